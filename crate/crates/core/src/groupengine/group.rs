use std::fmt::Debug;
use std::hash::Hash;

/// A concrete finite group: a context object plus an element type.
pub trait Group: Clone + Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Approximate heap plus inline footprint of one element, for memory budgets.
    fn elem_bytes(&self) -> usize {
        std::mem::size_of::<Self::Elem>()
    }

    /// a^{-1} b^{-1} a b
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// g h g^{-1}
    fn conj(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, h), &self.inv(g))
    }

    fn pow(&self, a: &Self::Elem, mut k: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn element_order(&self, a: &Self::Elem) -> u64 {
        let e = self.identity();
        let mut x = a.clone();
        let mut k = 1;
        while x != e {
            x = self.mul(&x, a);
            k += 1;
        }
        k
    }
}

/// Direct product of two groups.
#[derive(Clone, Debug)]
pub struct ProductGroup<A: Group, B: Group> {
    pub left: A,
    pub right: B,
}

impl<A: Group, B: Group> ProductGroup<A, B> {
    pub fn new(left: A, right: B) -> Self {
        ProductGroup { left, right }
    }
}

impl<A: Group, B: Group> Group for ProductGroup<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.inv(&a.0), self.right.inv(&a.1))
    }
    fn elem_bytes(&self) -> usize {
        self.left.elem_bytes() + self.right.elem_bytes()
    }
}

/// The cyclic group Z/N written additively.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicGroup {
    pub order: u64,
}

impl Group for CyclicGroup {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.order
    }
    fn inv(&self, a: &u64) -> u64 {
        (self.order - a) % self.order
    }
}
