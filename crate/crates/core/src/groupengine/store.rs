use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::group::Group;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_elements: u64,
    pub max_bytes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_elements: 50_000_000, max_bytes: 4 << 30 }
    }
}

impl Limits {
    pub fn elements(n: u64) -> Self {
        Limits { max_elements: n, ..Default::default() }
    }
}

/// Largest order for which a full multiplication table is cached.
const TABLE_LIMIT: usize = 2048;

/// A finite group materialized as an explicit element list.
///
/// Index 0 is the identity; other indices follow insertion order of the closure.
pub struct GroupStore<G: Group> {
    group: G,
    elements: Vec<G::Elem>,
    index: FxHashMap<G::Elem, u32>,
    generators: Vec<G::Elem>,
    gen_idx: Vec<usize>,
    limits: Limits,
    table: OnceLock<Option<Vec<u32>>>,
    inverses: OnceLock<Vec<u32>>,
}

impl<G: Group> Clone for GroupStore<G> {
    fn clone(&self) -> Self {
        GroupStore {
            group: self.group.clone(),
            elements: self.elements.clone(),
            index: self.index.clone(),
            generators: self.generators.clone(),
            gen_idx: self.gen_idx.clone(),
            limits: self.limits,
            table: OnceLock::new(),
            inverses: OnceLock::new(),
        }
    }
}

impl<G: Group> std::fmt::Debug for GroupStore<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupStore(order {}, {} generators)", self.elements.len(), self.generators.len())
    }
}

impl<G: Group> GroupStore<G> {
    fn empty(group: G, limits: Limits) -> Self {
        let id = group.identity();
        let mut index = FxHashMap::default();
        index.insert(id.clone(), 0);
        GroupStore {
            group,
            elements: vec![id],
            index,
            generators: Vec::new(),
            gen_idx: Vec::new(),
            limits,
            table: OnceLock::new(),
            inverses: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[G::Elem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &G::Elem {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[G::Elem] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_idx
    }

    pub fn index_of(&self, x: &G::Elem) -> Option<usize> {
        self.index.get(x).map(|&i| i as usize)
    }

    pub fn contains(&self, x: &G::Elem) -> bool {
        self.index.contains_key(x)
    }

    /// Indices sorted by element order (the canonical ordering).
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.order()).collect();
        idx.sort_by(|&a, &b| self.elements[a].cmp(&self.elements[b]));
        idx
    }

    fn bytes_per_element(&self) -> u64 {
        // element in the list, key copy in the map, map overhead
        (2 * self.group.elem_bytes() + 16) as u64
    }

    fn check(&self) -> Result<()> {
        let n = self.elements.len() as u64;
        if n > self.limits.max_elements || n * self.bytes_per_element() > self.limits.max_bytes {
            return Err(Error::Resource { what: "closure".into(), partial: n });
        }
        Ok(())
    }

    fn push(&mut self, x: G::Elem) -> Result<Option<usize>> {
        if self.index.contains_key(&x) {
            return Ok(None);
        }
        let i = self.elements.len();
        self.index.insert(x.clone(), i as u32);
        self.elements.push(x);
        if i % 65536 == 0 {
            self.check()?;
        }
        Ok(Some(i))
    }

    fn bfs(&mut self, start: usize) -> Result<()> {
        let mut cur = start;
        while cur < self.elements.len() {
            let x = self.elements[cur].clone();
            for gi in 0..self.generators.len() {
                let y = self.group.mul(&x, &self.generators[gi]);
                self.push(y)?;
            }
            cur += 1;
        }
        self.check()
    }

    /// Adds a generator and closes again; returns false if it was already a member.
    pub fn extend(&mut self, g: G::Elem) -> Result<bool> {
        if self.contains(&g) {
            return Ok(false);
        }
        self.table = OnceLock::new();
        self.inverses = OnceLock::new();
        let old = self.elements.len();
        self.generators.push(g.clone());
        for i in 0..old {
            let y = self.group.mul(&self.elements[i], &g);
            self.push(y)?;
        }
        self.bfs(old)?;
        self.gen_idx = self.generators.iter().map(|x| self.index[x] as usize).collect();
        Ok(true)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(Some(t)) = self.table.get() {
            return t[a * self.order() + b] as usize;
        }
        let y = self.group.mul(&self.elements[a], &self.elements[b]);
        self.index[&y] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses.get_or_init(|| {
            (0..self.order()).map(|i| self.index[&self.group.inv(&self.elements[i])]).collect()
        })[a] as usize
    }

    /// Builds the multiplication table when the order is small.
    pub fn with_table(self) -> Self {
        if self.order() <= TABLE_LIMIT {
            let n = self.order();
            let t: Vec<u32> = (0..n * n)
                .map(|k| {
                    let y = self.group.mul(&self.elements[k / n], &self.elements[k % n]);
                    self.index[&y]
                })
                .collect();
            let _ = self.table.set(Some(t));
        }
        self
    }

    /// Inserts the conjugates of this subgroup's generators by `ambient` until stable.
    fn normalize_under(&mut self, ambient: &[G::Elem]) -> Result<()> {
        let mut k = 0;
        while k < self.generators.len() {
            let h = self.generators[k].clone();
            for g in ambient {
                let c = self.group.conj(g, &h);
                self.extend(c)?;
            }
            k += 1;
        }
        Ok(())
    }

    /// The subgroup with the given member indices, as its own store.
    pub fn subgroup(&self, members: &[usize]) -> Result<GroupStore<G>> {
        let mut s = GroupStore::empty(self.group.clone(), self.limits);
        for &m in members {
            if !s.contains(&self.elements[m]) {
                s.extend(self.elements[m].clone())?;
            }
        }
        if s.order() != members.len() {
            return crate::error::contract("member list is not a subgroup");
        }
        Ok(s)
    }
}

/// The subgroup generated by `gens`.
pub fn closure<G: Group>(group: &G, gens: &[G::Elem], limits: Limits) -> Result<GroupStore<G>> {
    let mut s = GroupStore::empty(group.clone(), limits);
    for g in gens {
        s.generators.push(g.clone());
    }
    s.bfs(0)?;
    s.gen_idx = s.generators.iter().map(|x| s.index[x] as usize).collect();
    Ok(s)
}

/// Smallest subgroup containing `seeds` and closed under conjugation by `ambient`.
pub fn normal_closure<G: Group>(
    group: &G,
    ambient: &[G::Elem],
    seeds: &[G::Elem],
    limits: Limits,
) -> Result<GroupStore<G>> {
    let mut s = GroupStore::empty(group.clone(), limits);
    for x in seeds {
        s.extend(x.clone())?;
    }
    s.normalize_under(ambient)?;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcsTerm {
    pub order: u64,
    /// true when the order was supplied rather than enumerated
    pub structural: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LcsReport {
    pub terms: Vec<LcsTerm>,
    pub complete: bool,
    pub stopped: Option<String>,
}

impl LcsReport {
    pub fn orders(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.order).collect()
    }
}

/// γ_1 ⊇ γ_2 ⊇ … down to the trivial group. When `gamma1` is given, γ_1 is not enumerated.
pub fn lower_central_series<G: Group>(
    group: &G,
    gens: &[G::Elem],
    gamma1: Option<u64>,
    limits: Limits,
) -> LcsReport {
    let mut terms = Vec::new();
    let first = match gamma1 {
        Some(o) => LcsTerm { order: o, structural: true },
        None => match closure(group, gens, limits) {
            Ok(s) => LcsTerm { order: s.order() as u64, structural: false },
            Err(e) => return LcsReport { terms, complete: false, stopped: Some(e.to_string()) },
        },
    };
    let mut done = first.order == 1;
    terms.push(first);
    let mut layer_gens: Vec<G::Elem> = gens.to_vec();
    while !done {
        let seeds: Vec<G::Elem> =
            gens.iter().flat_map(|x| layer_gens.iter().map(move |h| (x, h))).map(|(x, h)| group.commutator(x, h)).collect();
        match normal_closure(group, gens, &seeds, limits) {
            Ok(s) => {
                terms.push(LcsTerm { order: s.order() as u64, structural: false });
                done = s.order() == 1;
                layer_gens = s.generators.clone();
            }
            Err(e) => return LcsReport { terms, complete: false, stopped: Some(e.to_string()) },
        }
    }
    LcsReport { terms, complete: true, stopped: None }
}

/// Closure that deduplicates through an injective index into [0, universe) with a bit set.
/// Returns the number of elements reached.
pub fn count_closure_indexed<G: Group>(
    group: &G,
    gens: &[G::Elem],
    universe: u64,
    index: impl Fn(&G::Elem) -> Option<u64>,
    mut progress: impl FnMut(u64),
) -> Result<u64> {
    let words = universe.div_ceil(64) as usize;
    let mut seen = vec![0u64; words];
    let mark = |seen: &mut Vec<u64>, x: &G::Elem| -> Result<bool> {
        let i = index(x).ok_or_else(|| Error::Contract(format!("element {x:?} outside the index range")))?;
        if i >= universe {
            return Err(Error::Contract("index out of range".into()));
        }
        let (w, b) = ((i / 64) as usize, i % 64);
        let new = seen[w] >> b & 1 == 0;
        seen[w] |= 1 << b;
        Ok(new)
    };
    let id = group.identity();
    mark(&mut seen, &id)?;
    let mut count = 1u64;
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = group.mul(x, g);
                if mark(&mut seen, &y)? {
                    count += 1;
                    next.push(y);
                }
            }
        }
        progress(count);
        frontier = next;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupengine::{CyclicGroup, ProductGroup};
    use crate::unipotent::{sigma, UnipotentGroup};

    #[test]
    fn closure_examples() {
        let u3 = UnipotentGroup::new(2, 3).unwrap();
        let s = closure(&u3, &u3.sigmas(), Limits::default()).unwrap();
        assert_eq!(s.order(), 8);
        assert!(s.element(0).is_identity());
        let t = closure(&u3, &[], Limits::default()).unwrap();
        assert_eq!(t.order(), 1);
        for &(p, n) in &[(2u32, 4usize), (3, 4), (2, 5), (3, 5)] {
            let g = UnipotentGroup::new(p, n).unwrap();
            let s = closure(&g, &g.sigmas(), Limits::default()).unwrap();
            assert_eq!(s.order() as u64, (p as u64).pow(g.order_log()));
            if s.order() <= 1024 {
                let again = closure(&g, s.elements(), Limits::default()).unwrap();
                assert_eq!(again.order(), s.order());
            }
        }
    }

    #[test]
    fn closure_limit() {
        let g = UnipotentGroup::new(3, 5).unwrap();
        match closure(&g, &g.sigmas(), Limits::elements(100)) {
            Err(Error::Resource { partial, .. }) => assert!(partial > 100),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn normal_closure_examples() {
        let u3 = UnipotentGroup::new(2, 3).unwrap();
        let gens = u3.sigmas();
        let id = normal_closure(&u3, &gens, &[u3.identity()], Limits::default()).unwrap();
        assert_eq!(id.order(), 1);
        let n = normal_closure(&u3, &gens, &[sigma(2, 3, 2)], Limits::default()).unwrap();
        // oracle: brute force over all 8 elements
        let all = closure(&u3, &gens, Limits::default()).unwrap();
        let mut best: Option<usize> = None;
        for mask in 0u32..256 {
            let set: Vec<_> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| all.element(i).clone()).collect();
            if !set.contains(&sigma(2, 3, 2)) || !set.contains(&u3.identity()) {
                continue;
            }
            let closed = set.iter().all(|a| set.iter().all(|b| set.contains(&u3.mul(a, b))));
            let normal = set.iter().all(|a| all.elements().iter().all(|g| set.contains(&u3.conj(g, a))));
            if closed && normal {
                best = Some(best.map_or(set.len(), |b: usize| b.min(set.len())));
            }
        }
        assert_eq!(best, Some(4));
        assert_eq!(n.order(), 4);
    }

    #[test]
    fn lcs_examples() {
        let c = ProductGroup::new(CyclicGroup { order: 3 }, CyclicGroup { order: 3 });
        let r = lower_central_series(&c, &[(1, 0), (0, 1)], None, Limits::default());
        assert_eq!(r.orders(), vec![9, 1]);
        let u3 = UnipotentGroup::new(2, 3).unwrap();
        let r = lower_central_series(&u3, &u3.sigmas(), None, Limits::default());
        assert_eq!(r.orders(), vec![8, 2, 1]);
        let u5 = UnipotentGroup::new(2, 5).unwrap();
        let r = lower_central_series(&u5, &u5.sigmas(), None, Limits::default());
        assert_eq!(r.orders(), vec![1024, 64, 8, 2, 1]);
    }

    #[test]
    fn indexed_count_matches_store() {
        let g = UnipotentGroup::new(3, 4).unwrap();
        let n = count_closure_indexed(&g, &g.sigmas(), 729, |x| x.code().map(|c| {
            // base-3 digits of the 2-bit fields
            let mut v = 0u64;
            for k in (0..6).rev() {
                v = v * 3 + ((c >> (2 * k)) & 3) as u64;
            }
            v
        }), |_| {})
        .unwrap();
        assert_eq!(n, 729);
    }

    #[test]
    fn table_and_inverses() {
        let u3 = UnipotentGroup::new(3, 3).unwrap();
        let s = closure(&u3, &u3.sigmas(), Limits::default()).unwrap().with_table();
        for a in 0..s.order() {
            assert_eq!(s.mul(a, s.inv(a)), 0);
            for b in 0..s.order() {
                assert_eq!(s.element(s.mul(a, b)), &u3.mul(s.element(a), s.element(b)));
            }
        }
    }
}
