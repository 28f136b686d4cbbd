use std::collections::BTreeSet;

use rand::Rng;

use super::group::Group;
use super::store::GroupStore;
use crate::fpcore::{FpMatrix, FpVector, PrimeField, RowEchelon};

/// A subgroup of a store, as a sorted list of member indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    pub members: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    fn mask(&self, n: usize) -> Vec<u64> {
        let mut m = vec![0u64; n.div_ceil(64)];
        for &i in &self.members {
            m[i / 64] |= 1 << (i % 64);
        }
        m
    }
}

fn generated<G: Group>(store: &GroupStore<G>, seeds: &[usize]) -> Subgroup {
    let mut seen = vec![false; store.order()];
    seen[0] = true;
    let mut list = vec![0];
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for &s in seeds {
            let y = store.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                list.push(y);
            }
        }
    }
    list.sort_unstable();
    Subgroup { members: list }
}

/// Every subgroup, found by joining cyclic subgroups. Meant for small groups.
pub fn all_subgroups<G: Group>(store: &GroupStore<G>) -> Vec<Subgroup> {
    let n = store.order();
    let cyclic: BTreeSet<Subgroup> = (0..n).map(|i| generated(store, &[i])).collect();
    let cyclic: Vec<Subgroup> = cyclic.into_iter().collect();
    let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
    let trivial = Subgroup { members: vec![0] };
    found.insert(trivial.mask(n));
    let mut work = vec![trivial];
    let mut out = Vec::new();
    while let Some(h) = work.pop() {
        for z in &cyclic {
            let g = z.members.iter().find(|&&x| x != 0);
            let Some(&g) = g else { continue };
            if h.contains(g) && z.members.iter().all(|&x| h.contains(x)) {
                continue;
            }
            let mut seeds = h.members.clone();
            seeds.push(g);
            let j = generated(store, &seeds);
            if found.insert(j.mask(n)) {
                work.push(j);
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    out
}

/// One representative per conjugacy class: the member whose sorted list of element ranks in
/// the canonical ordering is least.
pub fn conjugacy_class_reps<G: Group>(store: &GroupStore<G>, subgroups: &[Subgroup]) -> Vec<Subgroup> {
    let canon = store.canonical_order();
    let mut rank = vec![0usize; store.order()];
    for (r, &i) in canon.iter().enumerate() {
        rank[i] = r;
    }
    let key = |s: &Subgroup| {
        let mut v: Vec<usize> = s.members.iter().map(|&i| rank[i]).collect();
        v.sort_unstable();
        v
    };
    let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for s in subgroups {
        let mut best: Option<(Vec<usize>, Subgroup)> = None;
        for g in 0..store.order() {
            let gi = store.inv(g);
            let mut m: Vec<usize> = s.members.iter().map(|&x| store.mul(store.mul(g, x), gi)).collect();
            m.sort_unstable();
            let c = Subgroup { members: m };
            let k = key(&c);
            if best.as_ref().is_none_or(|(bk, _)| k < *bk) {
                best = Some((k, c));
            }
        }
        let (k, c) = best.expect("nonempty group");
        if reps.insert(k) {
            out.push(c);
        }
    }
    out
}

/// Sampled associativity audit plus an exact inverse audit. Returns the number of failures.
pub fn audit_store<G: Group, R: Rng>(store: &GroupStore<G>, samples: usize, rng: &mut R) -> usize {
    let g = store.group();
    let n = store.order();
    let mut bad = 0;
    for _ in 0..samples {
        let (a, b, c) = (store.element(rng.gen_range(0..n)), store.element(rng.gen_range(0..n)), store.element(rng.gen_range(0..n)));
        let lhs = g.mul(&g.mul(a, b), c);
        if lhs != g.mul(a, &g.mul(b, c)) || !store.contains(&lhs) {
            bad += 1;
        }
    }
    for x in store.elements() {
        let y = g.inv(x);
        if !store.contains(&y) || !g.is_identity(&g.mul(x, &y)) || !g.is_identity(&g.mul(&y, x)) {
            bad += 1;
        }
    }
    bad
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeCyclic {
    /// The span of the translates g·v has dimension |G|.
    pub free: bool,
    /// Σ_g g·v ≠ 0.
    pub norm_nonzero: bool,
}

impl FreeCyclic {
    pub fn lemma_holds(&self) -> bool {
        !self.norm_nonzero || self.free
    }
}

/// Decides whether F_p[G]·v is free of rank one, given the action matrix of every element.
pub fn is_free_cyclic(action: &[FpMatrix], v: &FpVector) -> FreeCyclic {
    let p = v.p;
    let f = PrimeField::new(p).expect("prime");
    let mut ech = RowEchelon::new(f, v.len());
    let mut norm = FpVector::zeros(p, v.len());
    for m in action {
        let w = m.mul_vec(v).expect("dimensions");
        norm = norm.add(&w);
        ech.insert(w.data);
    }
    FreeCyclic { free: ech.rank() == action.len(), norm_nonzero: !norm.is_zero() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupengine::{closure, CyclicGroup, Limits, ProductGroup};
    use crate::unipotent::UnipotentGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn subgroup_counts() {
        // C_2 × C_2 has 5 subgroups, C_4 has 3, U_3(F_2) ≅ D_4 has 10 (8 classes)
        let v4 = ProductGroup::new(CyclicGroup { order: 2 }, CyclicGroup { order: 2 });
        let s = closure(&v4, &[(1, 0), (0, 1)], Limits::default()).unwrap();
        assert_eq!(all_subgroups(&s).len(), 5);
        let c4 = closure(&CyclicGroup { order: 4 }, &[1], Limits::default()).unwrap();
        assert_eq!(all_subgroups(&c4).len(), 3);
        let u3 = UnipotentGroup::new(2, 3).unwrap();
        let d4 = closure(&u3, &u3.sigmas(), Limits::default()).unwrap().with_table();
        let subs = all_subgroups(&d4);
        assert_eq!(subs.len(), 10);
        assert_eq!(conjugacy_class_reps(&d4, &subs).len(), 8);
    }

    #[test]
    fn audits_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = UnipotentGroup::new(3, 4).unwrap();
        let s = closure(&u, &u.sigmas(), Limits::default()).unwrap();
        assert_eq!(audit_store(&s, 10_000, &mut rng), 0);
    }

    #[test]
    fn free_cyclic_examples() {
        let swap = FpMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let act = vec![FpMatrix::identity(2, 2), swap];
        assert!(!is_free_cyclic(&act, &FpVector::zeros(2, 2)).free);
        let r = is_free_cyclic(&act, &FpVector::from_slice(2, &[1, 0]));
        assert!(r.free && r.norm_nonzero);
        let shift = FpMatrix::from_rows(3, &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let act3 = vec![FpMatrix::identity(3, 3), shift.clone(), shift.pow(2)];
        assert!(is_free_cyclic(&act3, &FpVector::basis(3, 3, 0)).free);
    }
}
