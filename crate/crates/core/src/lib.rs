//! Unipotent groups over F_p, their cochains and extensions, the wreath construction of
//! tilde U_5, Massey-vanishing checks on finite groups, symbols on F_q((t)) and the
//! splitting-variety equations.

pub mod error;
pub mod fpcore;
pub mod groupengine;
pub mod unipotent;
pub mod cohomology;
pub mod wreath;
pub mod massey;
pub mod localfield;
pub mod variety;
pub mod suite;

pub use error::{Error, Result};
