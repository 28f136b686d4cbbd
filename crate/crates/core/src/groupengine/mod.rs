//! Finite groups materialized by generator closure, and searches over them.

mod group;
mod homs;
mod store;
mod subgroups;

pub use group::{CyclicGroup, Group, ProductGroup};
pub use homs::{enumerate_homs, GroupHom, HomLimits};
pub use store::{
    closure, count_closure_indexed, lower_central_series, normal_closure, GroupStore, LcsReport, LcsTerm, Limits,
};
pub use subgroups::{all_subgroups, audit_store, conjugacy_class_reps, is_free_cyclic, FreeCyclic, Subgroup};

/// Index-level view of a finite group, with 0 as the identity.
pub trait IndexedGroup: Send + Sync {
    fn order(&self) -> usize;
    fn mul_idx(&self, a: usize, b: usize) -> usize;
    fn inv_idx(&self, a: usize) -> usize;
    fn generator_idx(&self) -> Vec<usize>;
}

impl<G: Group> IndexedGroup for GroupStore<G> {
    fn order(&self) -> usize {
        GroupStore::order(self)
    }
    fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.mul(a, b)
    }
    fn inv_idx(&self, a: usize) -> usize {
        self.inv(a)
    }
    fn generator_idx(&self) -> Vec<usize> {
        self.generator_indices().to_vec()
    }
}

/// An indexed group seen as a [`Group`] whose elements are the indices.
#[derive(Clone)]
pub struct Indexed(pub std::sync::Arc<dyn IndexedGroup>);

impl Group for Indexed {
    type Elem = u32;

    fn identity(&self) -> u32 {
        0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.0.mul_idx(*a as usize, *b as usize) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        self.0.inv_idx(*a as usize) as u32
    }
}
