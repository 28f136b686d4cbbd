//! Exact arithmetic over F_p and F_q.

pub mod field;
pub mod fq;
pub mod linalg;

pub use field::{dlog, is_prime, primitive_element, CyclicUnits, Field, PolyQuotient, PrimeField};
pub use fq::{finite_field, Fq, FqElem};
pub use linalg::{solve_linear, solve_system, tensor, FpMatrix, FpScalar, FpVector, RowEchelon};
