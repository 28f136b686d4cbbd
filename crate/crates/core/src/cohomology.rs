//! Inhomogeneous cochains of a finite group with coefficients in an F_p-module.
//!
//! Cochains are dense tables indexed by element indices of an [`IndexedGroup`]. The
//! coboundary of a 1-cochain b is (g, h) ↦ g·b(h) − b(gh) + b(g).

use std::sync::Arc;

use rand::Rng;

use crate::error::{contract, Error, Result};
use crate::fpcore::{solve_system, FpMatrix, FpVector, PrimeField, RowEchelon};
use crate::groupengine::{Group, IndexedGroup};

/// A finite-dimensional F_p-module over an indexed group, one action matrix per element.
pub struct GModule {
    pub p: u32,
    pub dim: usize,
    group: Arc<dyn IndexedGroup>,
    action: Vec<FpMatrix>,
    trivial: bool,
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GModule(dim {} over F_{}, |G| = {})", self.dim, self.p, self.group.order())
    }
}

impl GModule {
    /// Builds a module from the action matrix of each element; audits the identity and the
    /// multiplicativity of the action (exhaustively up to order 1000, else on 100 samples).
    pub fn new(p: u32, dim: usize, group: Arc<dyn IndexedGroup>, action: Vec<FpMatrix>) -> Result<GModule> {
        if action.len() != group.order() {
            return contract("one action matrix per group element is required");
        }
        if action.iter().any(|m| m.rows != dim || m.cols != dim || m.p != p) {
            return contract("action matrices have the wrong shape");
        }
        let trivial = action.iter().all(|m| *m == FpMatrix::identity(p, dim));
        let module = GModule { p, dim, group, action, trivial };
        module.audit()?;
        Ok(module)
    }

    pub fn trivial(p: u32, dim: usize, group: Arc<dyn IndexedGroup>) -> GModule {
        let action = vec![FpMatrix::identity(p, dim); group.order()];
        GModule { p, dim, group, action, trivial: true }
    }

    /// The action given by a generator-free rule g ↦ matrix.
    pub fn from_fn(p: u32, dim: usize, group: Arc<dyn IndexedGroup>, f: impl Fn(usize) -> FpMatrix) -> Result<GModule> {
        let action = (0..group.order()).map(f).collect();
        GModule::new(p, dim, group, action)
    }

    pub fn tensor(a: &GModule, b: &GModule) -> Result<GModule> {
        if !Arc::ptr_eq(&a.group, &b.group) {
            return contract("tensor factors must share the acting group");
        }
        let action = a.action.iter().zip(&b.action).map(|(x, y)| x.kron(y)).collect();
        Ok(GModule {
            p: a.p,
            dim: a.dim * b.dim,
            group: a.group.clone(),
            action,
            trivial: a.trivial && b.trivial,
        })
    }

    fn audit(&self) -> Result<()> {
        let n = self.group.order();
        if self.action[0] != FpMatrix::identity(self.p, self.dim) {
            return contract("identity does not act trivially");
        }
        let check = |a: usize, b: usize| -> Result<()> {
            let ab = self.group.mul_idx(a, b);
            if self.action[a].mul(&self.action[b])? != self.action[ab] {
                return contract(format!("action is not multiplicative at ({a}, {b})"));
            }
            Ok(())
        };
        if n <= 1000 && n * n * self.dim <= 20_000_000 {
            for a in 0..n {
                for b in 0..n {
                    check(a, b)?;
                }
            }
        } else {
            let mut rng: rand::rngs::StdRng = rand::SeedableRng::seed_from_u64(0x5eed);
            for _ in 0..100 {
                check(rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<dyn IndexedGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn matrix(&self, g: usize) -> &FpMatrix {
        &self.action[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn act(&self, g: usize, v: &[u32]) -> Vec<u32> {
        if self.trivial {
            return v.to_vec();
        }
        let m = &self.action[g];
        let p = self.p as u64;
        (0..self.dim)
            .map(|i| {
                let mut s = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    s += m.get(i, j) as u64 * x as u64;
                }
                (s % p) as u32
            })
            .collect()
    }
}

fn add_into(p: u32, acc: &mut [u32], v: &[u32]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = (*a + b) % p;
    }
}

fn sub_into(p: u32, acc: &mut [u32], v: &[u32]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a = (*a + p - b) % p;
    }
}

/// A map G → M stored densely.
#[derive(Clone, Debug)]
pub struct Cochain1 {
    pub module: Arc<GModule>,
    values: Vec<u32>,
}

impl Cochain1 {
    pub fn zero(module: Arc<GModule>) -> Self {
        let n = module.order() * module.dim;
        Cochain1 { module, values: vec![0; n] }
    }

    pub fn from_fn(module: Arc<GModule>, f: impl Fn(usize) -> Vec<u32>) -> Result<Self> {
        let d = module.dim;
        let mut values = Vec::with_capacity(module.order() * d);
        for g in 0..module.order() {
            let v = f(g);
            if v.len() != d {
                return contract(format!("cochain value of length {} in a module of dimension {d}", v.len()));
            }
            values.extend(v.into_iter().map(|x| x % module.p));
        }
        Ok(Cochain1 { module, values })
    }

    pub fn get(&self, g: usize) -> &[u32] {
        let d = self.module.dim;
        &self.values[g * d..(g + 1) * d]
    }

    pub fn vector(&self, g: usize) -> FpVector {
        FpVector { p: self.module.p, data: self.get(g).to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Cochain1) -> Cochain1 {
        let mut values = self.values.clone();
        add_into(self.module.p, &mut values, &o.values);
        Cochain1 { module: self.module.clone(), values }
    }

    pub fn scale(&self, k: u32) -> Cochain1 {
        let p = self.module.p as u64;
        let values = self.values.iter().map(|&x| (x as u64 * k as u64 % p) as u32).collect();
        Cochain1 { module: self.module.clone(), values }
    }

    /// Precomposition with a map of indexed groups, into a module over the new domain that
    /// has the same action matrices along the map.
    pub fn pullback(&self, module: Arc<GModule>, map: &[usize]) -> Result<Cochain1> {
        Cochain1::from_fn(module, |g| self.get(map[g]).to_vec())
    }
}

/// f(gh) = f(g) + g·f(h) for all g, h.
pub fn is_cocycle1(f: &Cochain1) -> bool {
    let m = &f.module;
    let g = m.group();
    let p = m.p;
    for a in 0..m.order() {
        for b in 0..m.order() {
            let mut rhs = m.act(a, f.get(b));
            add_into(p, &mut rhs, f.get(a));
            if rhs != f.get(g.mul_idx(a, b)) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
enum Storage {
    Table(Vec<u32>),
    /// x(g) ⊗ g·y(h), evaluated on demand
    Cup(Box<Cochain1>, Box<Cochain1>),
}

/// A map G × G → M.
#[derive(Clone, Debug)]
pub struct Cochain2 {
    pub module: Arc<GModule>,
    storage: Storage,
}

impl Cochain2 {
    pub fn zero(module: Arc<GModule>) -> Self {
        let n = module.order();
        let len = n * n * module.dim;
        Cochain2 { module, storage: Storage::Table(vec![0; len]) }
    }

    pub fn from_fn(module: Arc<GModule>, f: impl Fn(usize, usize) -> Vec<u32>) -> Result<Self> {
        let n = module.order();
        let d = module.dim;
        let mut t = Vec::with_capacity(n * n * d);
        for a in 0..n {
            for b in 0..n {
                let v = f(a, b);
                if v.len() != d {
                    return contract("cochain value has the wrong dimension");
                }
                t.extend(v.into_iter().map(|x| x % module.p));
            }
        }
        Ok(Cochain2 { module, storage: Storage::Table(t) })
    }

    pub fn get(&self, a: usize, b: usize) -> Vec<u32> {
        let d = self.module.dim;
        match &self.storage {
            Storage::Table(t) => {
                let k = (a * self.module.order() + b) * d;
                t[k..k + d].to_vec()
            }
            Storage::Cup(x, y) => {
                let gy = y.module.act(a, y.get(b));
                crate::fpcore::tensor(&x.vector(a), &FpVector { p: self.module.p, data: gy }).data
            }
        }
    }

    /// Materializes a lazily evaluated cochain.
    pub fn to_table(&self) -> Cochain2 {
        let n = self.module.order();
        let mut t = Vec::with_capacity(n * n * self.module.dim);
        for a in 0..n {
            for b in 0..n {
                t.extend(self.get(a, b));
            }
        }
        Cochain2 { module: self.module.clone(), storage: Storage::Table(t) }
    }

    pub fn is_zero(&self) -> bool {
        let n = self.module.order();
        (0..n).all(|a| (0..n).all(|b| self.get(a, b).iter().all(|&x| x == 0)))
    }

    pub fn sub(&self, o: &Cochain2) -> Result<Cochain2> {
        let p = self.module.p;
        Cochain2::from_fn(self.module.clone(), |a, b| {
            let mut v = self.get(a, b);
            sub_into(p, &mut v, &o.get(a, b));
            v
        })
    }

    pub fn pullback(&self, module: Arc<GModule>, map: &[usize]) -> Result<Cochain2> {
        Cochain2::from_fn(module, |a, b| self.get(map[a], map[b]))
    }
}

/// The coboundary δb(g, h) = g·b(h) − b(gh) + b(g).
pub fn coboundary(b: &Cochain1) -> Cochain2 {
    let m = b.module.clone();
    let p = m.p;
    Cochain2::from_fn(m.clone(), |g, h| {
        let mut v = m.act(g, b.get(h));
        sub_into(p, &mut v, b.get(m.group().mul_idx(g, h)));
        add_into(p, &mut v, b.get(g));
        v
    })
    .expect("dimensions")
}

fn cocycle2_at(c: &Cochain2, x: usize, y: usize, z: usize) -> bool {
    let m = &c.module;
    let g = m.group();
    let p = m.p;
    // x·c(y,z) − c(xy,z) + c(x,yz) − c(x,y)
    let mut v = m.act(x, &c.get(y, z));
    sub_into(p, &mut v, &c.get(g.mul_idx(x, y), z));
    add_into(p, &mut v, &c.get(x, g.mul_idx(y, z)));
    sub_into(p, &mut v, &c.get(x, y));
    v.iter().all(|&e| e == 0)
}

/// The 2-cocycle identity on every triple.
pub fn is_cocycle2(c: &Cochain2) -> bool {
    let n = c.module.order();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| cocycle2_at(c, x, y, z))))
}

/// The 2-cocycle identity on random triples.
pub fn is_cocycle2_sampled<R: Rng>(c: &Cochain2, samples: usize, rng: &mut R) -> bool {
    let n = c.module.order();
    (0..samples).all(|_| cocycle2_at(c, rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
}

/// (g, g′) ↦ x(g) ⊗ g·y(g′), with values in the tensor module. Materialized as a table.
pub fn cup11(x: &Cochain1, y: &Cochain1) -> Result<Cochain2> {
    Ok(cup11_lazy(x, y)?.to_table())
}

/// As [`cup11`] but evaluated on demand, for groups whose pair table is too large.
pub fn cup11_lazy(x: &Cochain1, y: &Cochain1) -> Result<Cochain2> {
    if !Arc::ptr_eq(x.module.group(), y.module.group()) {
        return contract("cup product factors must live on the same group");
    }
    if !is_cocycle1(x) || !is_cocycle1(y) {
        return contract("cup product of a non-cocycle");
    }
    let module = Arc::new(GModule::tensor(&x.module, &y.module)?);
    Ok(Cochain2 { module, storage: Storage::Cup(Box::new(x.clone()), Box::new(y.clone())) })
}

/// Affine expression: constant + M·u, where u collects the unknown values on generators.
struct Affine {
    c: Vec<u32>,
    m: Vec<Vec<u32>>,
}

/// Finds b with c = δb, or None when the class of c is nonzero.
///
/// The unknowns are the values of b on the generators. b(1) = c(1,1) and b(xs) = b(x) +
/// x·b(s) − c(x,s) along a breadth-first spanning tree; the remaining Cayley-graph edges give
/// the linear conditions. The result is checked against every pair; a failure there means c
/// was not a cocycle.
pub fn is_coboundary2(c: &Cochain2) -> Result<Option<Cochain1>> {
    let m = c.module.clone();
    let grp = m.group().clone();
    let (n, d, p) = (m.order(), m.dim, m.p);
    let gens = grp.generator_idx();
    let k = gens.len();
    let w = k * d;
    let f = PrimeField::new(p)?;
    let mut node: Vec<Option<Affine>> = (0..n).map(|_| None).collect();
    node[0] = Some(Affine { c: c.get(0, 0), m: vec![vec![0; w]; d] });
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    let mut ech = RowEchelon::new(f, w + 1);
    let mut queue = vec![0usize];
    let mut head = 0;
    let mut push_eq = |lhs: &Affine, r: &Affine, rows: &mut Vec<Vec<u32>>, rhs: &mut Vec<u32>| {
        // lhs − r = 0 as rows over the unknowns
        for i in 0..d {
            let row: Vec<u32> = (0..w).map(|j| (lhs.m[i][j] + p - r.m[i][j]) % p).collect();
            let b = (r.c[i] + p - lhs.c[i]) % p;
            let mut full = row.clone();
            full.push(b);
            if ech.insert(full) {
                rows.push(row);
                rhs.push(b);
            }
        }
    };
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (si, &s) in gens.iter().enumerate() {
            let bx = node[x].as_ref().expect("visited");
            // b(x) + x·u_s − c(x,s)
            let act = m.matrix(x);
            let mut e = Affine { c: bx.c.clone(), m: bx.m.clone() };
            sub_into(p, &mut e.c, &c.get(x, s));
            for i in 0..d {
                for j in 0..d {
                    let a = act.get(i, j);
                    if a != 0 {
                        let col = si * d + j;
                        e.m[i][col] = (e.m[i][col] + a) % p;
                    }
                }
            }
            let y = grp.mul_idx(x, s);
            match &node[y] {
                Some(by) => push_eq(by, &e, &mut rows, &mut rhs),
                None => {
                    node[y] = Some(e);
                    queue.push(y);
                }
            }
        }
    }
    // b(s) must equal u_s
    for (si, &s) in gens.iter().enumerate() {
        let mut u = Affine { c: vec![0; d], m: vec![vec![0; w]; d] };
        for i in 0..d {
            u.m[i][si * d + i] = 1;
        }
        let bs = node[s].take().expect("generator reached");
        push_eq(&bs, &u, &mut rows, &mut rhs);
        node[s] = Some(bs);
    }
    if node.iter().any(|x| x.is_none()) {
        return contract("generators do not generate the group");
    }
    let Some((u, _)) = solve_system(&f, &rows, &rhs, w)? else {
        return Ok(None);
    };
    let b = Cochain1::from_fn(m.clone(), |g| {
        let a = node[g].as_ref().expect("visited");
        (0..d)
            .map(|i| {
                let mut s = a.c[i] as u64;
                for j in 0..w {
                    s += a.m[i][j] as u64 * u[j] as u64;
                }
                (s % p as u64) as u32
            })
            .collect()
    })?;
    for g in 0..n {
        for h in 0..n {
            let mut v = m.act(g, b.get(h));
            sub_into(p, &mut v, b.get(grp.mul_idx(g, h)));
            add_into(p, &mut v, b.get(g));
            if v != c.get(g, h) {
                return Err(Error::Contract("input is not a 2-cocycle".into()));
            }
        }
    }
    Ok(Some(b))
}

/// Coboundary test as one dense system with |G|·dim unknowns, one equation block per pair.
pub fn is_coboundary2_dense(c: &Cochain2) -> Result<Option<Cochain1>> {
    let m = c.module.clone();
    let grp = m.group().clone();
    let (n, d, p) = (m.order(), m.dim, m.p);
    let w = n * d;
    let f = PrimeField::new(p)?;
    let mut rows = Vec::with_capacity(n * n * d);
    let mut rhs = Vec::with_capacity(n * n * d);
    for g in 0..n {
        for h in 0..n {
            let gh = grp.mul_idx(g, h);
            let cv = c.get(g, h);
            let act = m.matrix(g);
            for i in 0..d {
                let mut row = vec![0u32; w];
                for j in 0..d {
                    row[h * d + j] = (row[h * d + j] + act.get(i, j)) % p;
                }
                row[gh * d + i] = (row[gh * d + i] + p - 1) % p;
                row[g * d + i] = (row[g * d + i] + 1) % p;
                rows.push(row);
                rhs.push(cv[i]);
            }
        }
    }
    let Some((x, _)) = solve_system(&f, &rows, &rhs, w)? else {
        return Ok(None);
    };
    Ok(Some(Cochain1::from_fn(m, |g| x[g * d..(g + 1) * d].to_vec())?))
}

/// Extension element: module coordinates and a group index.
pub type ExtElem = (Vec<u32>, u32);

/// The set M × G with (m, g)(m′, g′) = (m + g·m′ + c(g, g′), gg′), where c is the input
/// cocycle shifted by the coboundary of the constant cochain β = c(1, 1).
///
/// After the shift the identity is (0, 1). Raw coordinates (those of the unshifted law, where
/// the identity is (−β, 1)) are related by (m, g) ↦ (m − β, g).
#[derive(Clone)]
pub struct ExtensionGroup {
    pub module: Arc<GModule>,
    cocycle: Arc<Cochain2>,
    shift: Vec<u32>,
}

impl std::fmt::Debug for ExtensionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExtensionGroup({:?}, shift {:?})", self.module, self.shift)
    }
}

impl ExtensionGroup {
    pub fn shift(&self) -> &[u32] {
        &self.shift
    }

    fn c(&self, g: usize, h: usize) -> Vec<u32> {
        // c(g,h) − g·β
        let mut v = self.cocycle.get(g, h);
        let gb = self.module.act(g, &self.shift);
        sub_into(self.module.p, &mut v, &gb);
        v
    }

    pub fn normalized(&self, g: usize, h: usize) -> Vec<u32> {
        self.c(g, h)
    }

    pub fn to_raw(&self, x: &ExtElem) -> ExtElem {
        let mut m = x.0.clone();
        sub_into(self.module.p, &mut m, &self.shift);
        (m, x.1)
    }

    pub fn from_raw(&self, x: &ExtElem) -> ExtElem {
        let mut m = x.0.clone();
        add_into(self.module.p, &mut m, &self.shift);
        (m, x.1)
    }

    pub fn order_log(&self) -> (u32, usize) {
        (self.module.dim as u32, self.module.order())
    }

    pub fn inclusion(&self, m: &[u32]) -> ExtElem {
        (m.to_vec(), 0)
    }

    pub fn lift(&self, g: usize) -> ExtElem {
        (vec![0; self.module.dim], g as u32)
    }

    /// Generators of the extension: the module basis and the lifts of the group generators.
    pub fn generators(&self) -> Vec<ExtElem> {
        let d = self.module.dim;
        let mut out: Vec<ExtElem> = (0..d)
            .map(|i| {
                let mut v = vec![0; d];
                v[i] = 1;
                (v, 0)
            })
            .collect();
        out.extend(self.module.group().generator_idx().into_iter().map(|g| self.lift(g)));
        out
    }
}

impl Group for ExtensionGroup {
    type Elem = ExtElem;

    fn identity(&self) -> ExtElem {
        (vec![0; self.module.dim], 0)
    }

    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let (g, h) = (a.1 as usize, b.1 as usize);
        let p = self.module.p;
        let mut m = self.module.act(g, &b.0);
        add_into(p, &mut m, &a.0);
        add_into(p, &mut m, &self.c(g, h));
        (m, self.module.group().mul_idx(g, h) as u32)
    }

    fn inv(&self, a: &ExtElem) -> ExtElem {
        let g = a.1 as usize;
        let grp = self.module.group();
        let gi = grp.inv_idx(g);
        let p = self.module.p;
        // m + g·m″ + c(g, g⁻¹) = 0
        let mut t = vec![0; self.module.dim];
        sub_into(p, &mut t, &a.0);
        sub_into(p, &mut t, &self.c(g, gi));
        (self.module.act(gi, &t), gi as u32)
    }

    fn elem_bytes(&self) -> usize {
        std::mem::size_of::<ExtElem>() + 4 * self.module.dim
    }
}

/// The extension of G by M classified by c.
pub fn extension_from_cocycle(c: &Cochain2) -> Result<ExtensionGroup> {
    let n = c.module.order();
    let checked = if n <= 64 {
        is_cocycle2(c)
    } else {
        let mut rng: rand::rngs::StdRng = rand::SeedableRng::seed_from_u64(0x0c0c);
        is_cocycle2_sampled(c, 20_000, &mut rng)
    };
    if !checked {
        return contract("extension data is not a 2-cocycle");
    }
    let shift = c.get(0, 0);
    Ok(ExtensionGroup { module: c.module.clone(), cocycle: Arc::new(c.clone()), shift })
}

/// Σ_{t ∈ T} α(n_{tg}) where tg = n_{tg}·t′ with t′ ∈ T. `alpha` is evaluated on N-members
/// given by their index in Γ; `members` lists N inside Γ.
pub fn corestrict_character(
    gamma: &dyn IndexedGroup,
    members: &[usize],
    transversal: &[usize],
    p: u32,
    alpha: impl Fn(usize) -> u32,
) -> Result<Vec<u32>> {
    let n = gamma.order();
    let mut coset = vec![usize::MAX; n];
    for (ti, &t) in transversal.iter().enumerate() {
        for &x in members {
            let y = gamma.mul_idx(x, t);
            if coset[y] != usize::MAX {
                return contract("transversal representatives share a coset");
            }
            coset[y] = ti;
        }
    }
    if coset.contains(&usize::MAX) {
        return contract("transversal misses a coset");
    }
    let mut out = vec![0u32; n];
    for (g, o) in out.iter_mut().enumerate() {
        let mut s = 0u64;
        for &t in transversal {
            let tg = gamma.mul_idx(t, g);
            let t2 = transversal[coset[tg]];
            let nn = gamma.mul_idx(tg, gamma.inv_idx(t2));
            s += alpha(nn) as u64;
        }
        *o = (s % p as u64) as u32;
    }
    Ok(out)
}

/// True iff the table is a homomorphism Γ → F_p.
pub fn is_character(gamma: &dyn IndexedGroup, p: u32, chi: &[u32]) -> bool {
    let n = gamma.order();
    (0..n).all(|a| (0..n).all(|b| chi[gamma.mul_idx(a, b)] == (chi[a] + chi[b]) % p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupengine::{closure, CyclicGroup, GroupStore, Limits};
    use crate::unipotent::{s_proj, UnipotentGroup};

    fn store<G: Group>(g: &G, gens: &[G::Elem]) -> Arc<GroupStore<G>> {
        Arc::new(closure(g, gens, Limits::default()).unwrap().with_table())
    }

    fn s_char(st: &Arc<GroupStore<UnipotentGroup>>, i: usize) -> Cochain1 {
        let p = st.group().p;
        let module = Arc::new(GModule::trivial(p, 1, st.clone()));
        Cochain1::from_fn(module, |g| vec![s_proj(st.element(g), i).unwrap().value()]).unwrap()
    }

    #[test]
    fn zero_cochains() {
        let u3 = UnipotentGroup::new(3, 3).unwrap();
        let st = store(&u3, &u3.sigmas());
        let m = Arc::new(GModule::trivial(3, 2, st.clone()));
        assert!(is_cocycle1(&Cochain1::zero(m.clone())));
        let z = Cochain2::zero(m.clone());
        assert!(is_cocycle2(&z));
        assert!(is_coboundary2(&z).unwrap().unwrap().is_zero());
        let zc = cup11(&Cochain1::zero(m.clone()), &s_char(&st, 1)).unwrap();
        assert!(zc.is_zero());
    }

    #[test]
    fn s1_cup_s2_vanishes() {
        for p in [2, 3, 5] {
            let u3 = UnipotentGroup::new(p, 3).unwrap();
            let st = store(&u3, &u3.sigmas());
            let c = cup11(&s_char(&st, 1), &s_char(&st, 2)).unwrap();
            for a in 0..st.order() {
                for b in 0..st.order() {
                    let want = s_proj(st.element(a), 1).unwrap() * s_proj(st.element(b), 2).unwrap();
                    assert_eq!(c.get(a, b), vec![want.value()]);
                }
            }
            let b = is_coboundary2(&c).unwrap().expect("coboundary");
            let db = coboundary(&b);
            assert!(db.sub(&c).unwrap().is_zero());
            if p < 5 {
                assert!(is_coboundary2_dense(&c).unwrap().is_some());
            }
            // the two solvers agree on s_1 ⌣ s_1
            let c11 = cup11(&s_char(&st, 1), &s_char(&st, 1)).unwrap();
            if p < 5 {
                assert_eq!(
                    is_coboundary2(&c11).unwrap().is_some(),
                    is_coboundary2_dense(&c11).unwrap().is_some()
                );
            }
        }
    }

    #[test]
    fn c4_over_c2_is_nonsplit() {
        let c2 = CyclicGroup { order: 2 };
        let st = Arc::new(closure(&c2, &[1], Limits::default()).unwrap());
        let m = Arc::new(GModule::trivial(2, 1, st.clone()));
        // carries: c(g,h) = 1 iff g = h = the generator
        let c = Cochain2::from_fn(m.clone(), |a, b| {
            let (x, y) = (*st.element(a), *st.element(b));
            vec![((x + y) / 2) as u32]
        })
        .unwrap();
        assert!(is_cocycle2(&c));
        assert!(is_coboundary2(&c).unwrap().is_none());
        assert!(is_coboundary2_dense(&c).unwrap().is_none());
        let e = extension_from_cocycle(&c).unwrap();
        let gen = e.lift(st.index_of(&1).unwrap());
        assert_eq!(e.element_order(&gen), 4);
    }

    #[test]
    fn extension_of_trivial_cocycle_is_split() {
        let c3 = CyclicGroup { order: 3 };
        let st = Arc::new(closure(&c3, &[1], Limits::default()).unwrap());
        let m = Arc::new(GModule::trivial(3, 1, st.clone()));
        let e = extension_from_cocycle(&Cochain2::zero(m)).unwrap();
        let all = closure(&e, &e.generators(), Limits::default()).unwrap();
        assert_eq!(all.order(), 9);
        assert!(all.elements().iter().all(|x| e.is_identity(&e.pow(x, 3))));
    }

    #[test]
    fn corestriction_examples() {
        for p in [2u32, 3] {
            let cp2 = CyclicGroup { order: (p * p) as u64 };
            let st = closure(&cp2, &[1], Limits::default()).unwrap();
            let sp = st.index_of(&(p as u64)).unwrap();
            let members: Vec<usize> = (0..p).map(|k| st.index_of(&((k * p) as u64)).unwrap()).collect();
            let t: Vec<usize> = (0..p).map(|k| st.index_of(&(k as u64)).unwrap()).collect();
            // α(σ^p) = 1
            let alpha = |x: usize| (*st.element(x) / p as u64) as u32 % p;
            let cor = corestrict_character(&st, &members, &t, p, alpha).unwrap();
            assert_eq!(cor[st.index_of(&1).unwrap()], alpha(sp));
            assert!(is_character(&st, p, &cor));
            let t2: Vec<usize> = (0..p).map(|k| st.index_of(&((k + p) as u64 % (p * p) as u64)).unwrap()).collect();
            assert_eq!(corestrict_character(&st, &members, &t2, p, alpha).unwrap(), cor);
            assert!(corestrict_character(&st, &members, &[0], p, alpha).is_err());
            let same = corestrict_character(&st, &(0..st.order()).collect::<Vec<_>>(), &[0], p, |x| {
                *st.element(x) as u32 % p
            })
            .unwrap();
            assert!((0..st.order()).all(|x| same[x] == *st.element(x) as u32 % p));
        }
    }
}
