//! The wreath extensions F_p[U_m] ⋊ U_m, the group tilde G, the extension tilde U_n built
//! from the lifted cocycles, and for m = 2 its matrix model inside U_{2p+1}.

use std::sync::Arc;

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::cohomology::{cup11_lazy, Cochain1, Cochain2, ExtElem, ExtensionGroup, GModule};
use crate::error::{contract, Error, Result};
use crate::fpcore::{FpMatrix, FpVector};
use crate::groupengine::{
    closure, count_closure_indexed, lower_central_series, normal_closure, LcsReport, Group, GroupStore, IndexedGroup, Limits, ProductGroup,
};
use crate::unipotent::{section, sigma, split_section, Dense, SnElement, UniMatrix, UnipotentGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    /// maps to U_{m+1} through the last column
    First,
    /// maps to U_{m+1} through the first row
    Second,
}

/// An element of F_p[U_m] ⋊ U_m: group-algebra coefficients in the canonical order of U_m,
/// and the index of the point part in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElt {
    pub x: Vec<u32>,
    pub h: u32,
}

/// U_{m+1}^{(i)} = F_p[U_m] ⋊ U_m with U_m acting by left multiplication.
#[derive(Clone, Debug)]
pub struct WreathGroup {
    pub p: u32,
    pub m: usize,
    pub tag: Tag,
    points: Arc<Vec<UniMatrix>>,
    table: Arc<Vec<u32>>,
    inverse: Arc<Vec<u32>>,
}

/// Largest |U_m| handled.
const MAX_POINTS: usize = 64;

impl WreathGroup {
    pub fn new(p: u32, m: usize, tag: Tag) -> Result<Self> {
        let um = UnipotentGroup::new(p, m)?;
        if (p as u64).pow(um.order_log()) > MAX_POINTS as u64 {
            return Err(Error::Resource { what: format!("group algebra of U_{m}(F_{p})"), partial: 0 });
        }
        let store = closure(&um, &um.sigmas(), Limits::default())?;
        let mut points: Vec<UniMatrix> = store.elements().to_vec();
        points.sort();
        let k = points.len();
        let pos = |x: &UniMatrix| points.binary_search(x).expect("closed") as u32;
        let table = (0..k * k).map(|i| pos(&points[i / k].mul(&points[i % k]))).collect();
        let inverse = points.iter().map(|x| pos(&x.inv())).collect();
        Ok(WreathGroup { p, m, tag, points: Arc::new(points), table: Arc::new(table), inverse: Arc::new(inverse) })
    }

    /// |U_m|
    pub fn points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, h: u32) -> &UniMatrix {
        &self.points[h as usize]
    }

    pub fn point_index(&self, u: &UniMatrix) -> Option<u32> {
        self.points.binary_search(u).ok().map(|i| i as u32)
    }

    fn pmul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.points() + b as usize]
    }

    /// h·x: the coefficient of u moves to hu.
    pub fn act(&self, h: u32, x: &[u32]) -> Vec<u32> {
        let mut out = vec![0; x.len()];
        for (u, &c) in x.iter().enumerate() {
            out[self.pmul(h, u as u32) as usize] = c;
        }
        out
    }

    /// Permutation matrix of h on F_p[U_m].
    pub fn act_matrix(&self, h: u32) -> FpMatrix {
        let k = self.points();
        let mut m = FpMatrix::zeros(self.p, k, k);
        for u in 0..k {
            m.set(self.pmul(h, u as u32) as usize, u, 1);
        }
        m
    }

    pub fn delta(&self, u: u32) -> Vec<u32> {
        let mut x = vec![0; self.points()];
        x[u as usize] = 1;
        x
    }

    /// The identity of U_m, as an index.
    pub fn one(&self) -> u32 {
        self.point_index(&UniMatrix::identity(self.p, self.m)).expect("identity")
    }

    pub fn elt(&self, x: Vec<u32>, h: u32) -> WreathElt {
        WreathElt { x, h }
    }

    /// Generators (0, σ_i) for σ_i in U_m, then (1, 1).
    pub fn generators(&self) -> Vec<WreathElt> {
        let zero = vec![0; self.points()];
        let mut out: Vec<WreathElt> = (1..self.m)
            .map(|i| self.elt(zero.clone(), self.point_index(&sigma(self.p, self.m, i)).expect("σ")))
            .collect();
        out.push(self.elt(self.delta(self.one()), self.one()));
        out
    }

    /// f_1 (tag First) or f_2 (tag Second) into U_{m+1}.
    pub fn f_map(&self, w: &WreathElt) -> UniMatrix {
        let (p, m) = (self.p, self.m);
        let h = self.point(w.h).unpack();
        let mut d = Dense::identity(p, m + 1);
        match self.tag {
            Tag::First => {
                // [[h, Σ x_u u·v], [0, 1]] with v the last basis vector
                let mut col = vec![0u32; m];
                for (u, &c) in w.x.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let ud = self.points[u].unpack();
                    for (i, e) in col.iter_mut().enumerate() {
                        *e = (*e + c * ud.get(i, m - 1)) % p;
                    }
                }
                for i in 0..m {
                    for j in i + 1..m {
                        d.set(i, j, h.get(i, j));
                    }
                    d.set(i, m, col[i]);
                }
            }
            Tag::Second => {
                // [[1, L(x)·h], [0, h]] with L(u) = v*·u^{-1}
                let mut row = vec![0u32; m];
                for (u, &c) in w.x.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let ui = self.points[self.inverse[u] as usize].unpack();
                    for (j, e) in row.iter_mut().enumerate() {
                        *e = (*e + c * ui.get(0, j)) % p;
                    }
                }
                for j in 0..m {
                    let mut s = 0;
                    for (i, &r) in row.iter().enumerate() {
                        s += r * h.get(i, j);
                    }
                    d.set(0, j + 1, s % p);
                }
                for i in 0..m {
                    for j in i + 1..m {
                        d.set(i + 1, j + 1, h.get(i, j));
                    }
                }
            }
        }
        UniMatrix::pack(&d)
    }

    /// Sum of the group-algebra coefficients.
    pub fn augmentation(&self, x: &[u32]) -> u32 {
        x.iter().sum::<u32>() % self.p
    }
}

impl Group for WreathGroup {
    type Elem = WreathElt;

    fn identity(&self) -> WreathElt {
        self.elt(vec![0; self.points()], self.one())
    }

    fn mul(&self, a: &WreathElt, b: &WreathElt) -> WreathElt {
        let mut x = self.act(a.h, &b.x);
        for (e, &c) in x.iter_mut().zip(&a.x) {
            *e = (*e + c) % self.p;
        }
        self.elt(x, self.pmul(a.h, b.h))
    }

    fn inv(&self, a: &WreathElt) -> WreathElt {
        let hi = self.inverse[a.h as usize];
        let x = self.act(hi, &a.x).into_iter().map(|c| (self.p - c) % self.p).collect();
        self.elt(x, hi)
    }

    fn elem_bytes(&self) -> usize {
        std::mem::size_of::<WreathElt>() + 4 * self.points()
    }
}

/// tilde G = U_{m+1}^{(1)} × U_{m+1}^{(2)}, indexed by i1·|W| + i2.
pub struct TildeG {
    pub p: u32,
    pub m: usize,
    pub w1: Arc<GroupStore<WreathGroup>>,
    pub w2: Arc<GroupStore<WreathGroup>>,
    gens: Vec<usize>,
}

impl TildeG {
    pub fn new(p: u32, m: usize) -> Result<TildeG> {
        let build = |tag| -> Result<Arc<GroupStore<WreathGroup>>> {
            let w = WreathGroup::new(p, m, tag)?;
            Ok(Arc::new(closure(&w, &w.generators(), Limits::default())?.with_table()))
        };
        let (w1, w2) = (build(Tag::First)?, build(Tag::Second)?);
        let n2 = w2.order();
        let g1: Vec<usize> = w1.generator_indices().iter().map(|&g| g * n2).collect();
        let g2: Vec<usize> = w2.generator_indices().to_vec();
        // order: point generators of factor 1, algebra generator of factor 1, algebra
        // generator of factor 2, point generators of factor 2
        let mut gens = g1;
        let (alg2, pts2) = g2.split_last().expect("nonempty");
        gens.push(*alg2);
        gens.extend(pts2.iter().rev());
        Ok(TildeG { p, m, w1, w2, gens })
    }

    pub fn wreath(&self, tag: Tag) -> &WreathGroup {
        match tag {
            Tag::First => self.w1.group(),
            Tag::Second => self.w2.group(),
        }
    }

    pub fn split(&self, g: usize) -> (usize, usize) {
        (g / self.w2.order(), g % self.w2.order())
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        a * self.w2.order() + b
    }

    pub fn elem(&self, g: usize) -> (&WreathElt, &WreathElt) {
        let (a, b) = self.split(g);
        (self.w1.element(a), self.w2.element(b))
    }

    pub fn index_of(&self, a: &WreathElt, b: &WreathElt) -> Option<usize> {
        Some(self.join(self.w1.index_of(a)?, self.w2.index_of(b)?))
    }

    /// f = (f_1, f_2) into U_{m+1} × U_{m+1}.
    pub fn f(&self, g: usize) -> (UniMatrix, UniMatrix) {
        let (a, b) = self.elem(g);
        (self.w1.group().f_map(a), self.w2.group().f_map(b))
    }

    /// s_1, …, s_{2m} through f and the maps s_i of U_{2m+1}.
    pub fn characters(&self, g: usize) -> Vec<u32> {
        let (a, b) = self.f(g);
        let m = self.m;
        let mut out: Vec<u32> = (0..m).map(|i| a.entry(i, i + 1)).collect();
        out.extend((0..m).map(|i| b.entry(i, i + 1)));
        out
    }

    /// Membership in tilde N = f^{-1}(N_1 × N_2′): both point parts trivial.
    pub fn in_tilde_n(&self, g: usize) -> bool {
        let (a, b) = self.elem(g);
        a.h == self.w1.group().one() && b.h == self.w2.group().one()
    }

    /// The module F_p[U_m]^{(i)}, acted on through the point part of factor i.
    pub fn algebra_module(self: &Arc<Self>, tag: Tag) -> Result<GModule> {
        let w = self.wreath(tag).clone();
        let me = self.clone();
        GModule::from_fn(self.p, w.points(), self.clone(), move |g| {
            let (a, b) = me.elem(g);
            w.act_matrix(if tag == Tag::First { a.h } else { b.h })
        })
    }

    /// tilde φ_i: the group-algebra part of factor i.
    pub fn tilde_phi(&self, tag: Tag, g: usize) -> Vec<u32> {
        let (a, b) = self.elem(g);
        match tag {
            Tag::First => a.x.clone(),
            Tag::Second => b.x.clone(),
        }
    }
}

impl IndexedGroup for TildeG {
    fn order(&self) -> usize {
        self.w1.order() * self.w2.order()
    }
    fn mul_idx(&self, a: usize, b: usize) -> usize {
        let ((a1, a2), (b1, b2)) = (self.split(a), self.split(b));
        self.join(self.w1.mul(a1, b1), self.w2.mul(a2, b2))
    }
    fn inv_idx(&self, a: usize) -> usize {
        let (a1, a2) = self.split(a);
        self.join(self.w1.inv(a1), self.w2.inv(a2))
    }
    fn generator_idx(&self) -> Vec<usize> {
        self.gens.clone()
    }
}

/// tilde U_n as the extension of tilde G classified by tilde φ1 ⌣ tilde φ2.
pub struct TildeUn {
    pub tilde_g: Arc<TildeG>,
    pub phi1: Cochain1,
    pub phi2: Cochain1,
    pub omega: Cochain2,
    pub ext: ExtensionGroup,
}

impl TildeUn {
    /// log_p of the order: dim F_p[U_m × U_m] + log_p |tilde G|.
    pub fn order_log(&self) -> u32 {
        let tg = self.tilde_g.order() as f64;
        self.omega.module.dim as u32 + (tg.log(self.tilde_g.p as f64).round() as u32)
    }

    /// The four (or 2m) distinguished characters on an extension element.
    pub fn characters(&self, x: &ExtElem) -> Vec<u32> {
        self.tilde_g.characters(x.1 as usize)
    }

    /// Lifts of the canonical generators of tilde G, in the order of s_1, …, s_{2m}.
    pub fn canonical_generators(&self) -> Vec<ExtElem> {
        self.tilde_g.generator_idx().into_iter().map(|g| self.ext.lift(g)).collect()
    }
}

impl TildeUn {
    /// The quotient map to U_{2m+1} over f, on raw coordinates: the module maps to the corner
    /// through δ_u ⊗ δ_w ↦ (u e_m)(e_1ᵀ w^{-1}).
    pub fn to_un(&self, raw: &ExtElem) -> UniMatrix {
        let tg = &self.tilde_g;
        let (p, m) = (tg.p, tg.m);
        let w1 = tg.wreath(Tag::First);
        let k = w1.points();
        let mut h = FpMatrix::zeros(p, m, m);
        for (i, &c) in raw.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (u, w) = (w1.point(i as u32 / k as u32).unpack(), w1.point(w1.inverse[i % k]).unpack());
            for r in 0..m {
                for s in 0..m {
                    let v = (h.get(r, s) + c * u.get(r, m - 1) * w.get(0, s)) % p;
                    h.set(r, s, v);
                }
            }
        }
        let (a, b) = tg.f(raw.1 as usize);
        let s = SnElement::new(p, 2 * m + 1, h).expect("shape");
        s.to_matrix().mul(&section(&a, &b))
    }
}

pub fn build_tilde_un(p: u32, m: usize) -> Result<TildeUn> {
    if m != 2 {
        return Err(Error::Resource { what: format!("tilde U_{} needs m = 2", 2 * m + 1), partial: 0 });
    }
    let tg = Arc::new(TildeG::new(p, m)?);
    let m1 = Arc::new(tg.algebra_module(Tag::First)?);
    let m2 = Arc::new(tg.algebra_module(Tag::Second)?);
    let phi1 = Cochain1::from_fn(m1, |g| tg.tilde_phi(Tag::First, g))?;
    let phi2 = Cochain1::from_fn(m2, |g| tg.tilde_phi(Tag::Second, g))?;
    let omega = cup11_lazy(&phi1, &phi2)?;
    let ext = crate::cohomology::extension_from_cocycle(&omega)?;
    Ok(TildeUn { tilde_g: tg, phi1, phi2, omega, ext })
}

/// σ′_1, …, σ′_4 in U_{2p+1}.
pub fn explicit_generators(p: u32) -> Result<[UniMatrix; 4]> {
    let n = 2 * p as usize + 1;
    let pp = p as usize;
    let j1: Vec<(usize, usize, i64)> = (0..pp - 1).map(|i| (i, i + 1, 1)).collect();
    let j4: Vec<(usize, usize, i64)> = (0..pp - 1).map(|i| (pp + 1 + i, pp + 2 + i, 1)).collect();
    Ok([
        UniMatrix::from_entries(p, n, &j1)?,
        sigma(p, n, pp),
        sigma(p, n, pp + 1),
        UniMatrix::from_entries(p, n, &j4)?,
    ])
}

/// The explicit model: ι into U_{p+1} × U_{p+1}, the basis dictionary on S_{2p+1}, and κ.
pub struct MatrixModel {
    pub p: u32,
    pub generators: [UniMatrix; 4],
    /// Jordan block of size p and its powers J^k
    jpow: Vec<UniMatrix>,
    /// Δ(δ_u ⊗ δ_w) as a p×p corner block, index u·p + w
    pub dictionary: Vec<FpMatrix>,
}

impl MatrixModel {
    pub fn new(p: u32) -> Result<MatrixModel> {
        let generators = explicit_generators(p)?;
        let pp = p as usize;
        let j = UniMatrix::from_entries(p, pp, &(0..pp - 1).map(|i| (i, i + 1, 1)).collect::<Vec<_>>())?;
        let mut jpow = vec![UniMatrix::identity(p, pp)];
        for k in 1..pp {
            jpow.push(jpow[k - 1].mul(&j));
        }
        let ug = UnipotentGroup::new(p, 2 * pp + 1)?;
        let comm = ug.commutator(&generators[1], &generators[2]);
        let mut dictionary = Vec::with_capacity(pp * pp);
        for a in 0..pp as u64 {
            for b in 0..pp as u64 {
                let g = ug.mul(&ug.pow(&generators[0], a), &ug.pow(&generators[3], b));
                let c = ug.conj(&g, &comm);
                let s = SnElement::from_matrix(&c).ok_or_else(|| Error::Contract("conjugate left S".into()))?;
                dictionary.push(s.h);
            }
        }
        Ok(MatrixModel { p, generators, jpow, dictionary })
    }

    /// C(σ^k) = J^k e_p
    pub fn column(&self, k: usize) -> FpVector {
        let pp = self.p as usize;
        FpVector { p: self.p, data: (0..pp).map(|i| self.jpow[k].entry(i, pp - 1)).collect() }
    }

    /// D(σ^k) = e_1ᵀ J^{-k}
    pub fn row(&self, k: usize) -> FpVector {
        let pp = self.p as usize;
        let inv = self.jpow[(pp - k) % pp].clone();
        FpVector { p: self.p, data: (0..pp).map(|j| inv.entry(0, j)).collect() }
    }

    fn jk(&self, k: u32) -> &UniMatrix {
        &self.jpow[k as usize]
    }

    /// ι on one factor, for m = 2 where the point index is the power of σ.
    pub fn iota_factor(&self, w: &WreathGroup, e: &WreathElt) -> UniMatrix {
        let pp = self.p as usize;
        let mut d = Dense::identity(self.p, pp + 1);
        let jk = self.jk(e.h).unpack();
        match w.tag {
            Tag::First => {
                for i in 0..pp {
                    for j in i + 1..pp {
                        d.set(i, j, jk.get(i, j));
                    }
                }
                let mut col = vec![0u32; pp];
                for (u, &c) in e.x.iter().enumerate() {
                    for (i, v) in self.column(u).data.iter().enumerate() {
                        col[i] = (col[i] + c * v) % self.p;
                    }
                }
                for (i, v) in col.iter().enumerate() {
                    d.set(i, pp, *v);
                }
            }
            Tag::Second => {
                for i in 0..pp {
                    for j in i + 1..pp {
                        d.set(i + 1, j + 1, jk.get(i, j));
                    }
                }
                let mut row = vec![0u32; pp];
                for (u, &c) in e.x.iter().enumerate() {
                    for (i, v) in self.row(u).data.iter().enumerate() {
                        row[i] = (row[i] + c * v) % self.p;
                    }
                }
                // D(x)·J^k
                for jj in 0..pp {
                    let mut s = 0;
                    for (i, r) in row.iter().enumerate() {
                        s += r * jk.get(i, jj);
                    }
                    d.set(0, jj + 1, s % self.p);
                }
            }
        }
        UniMatrix::pack(&d)
    }

    pub fn iota(&self, tg: &TildeG, g: usize) -> (UniMatrix, UniMatrix) {
        let (a, b) = tg.elem(g);
        (self.iota_factor(tg.wreath(Tag::First), a), self.iota_factor(tg.wreath(Tag::Second), b))
    }

    /// Δ of a module vector in F_p[U_2 × U_2].
    pub fn corner(&self, z: &[u32]) -> FpMatrix {
        let pp = self.p as usize;
        let mut h = FpMatrix::zeros(self.p, pp, pp);
        for (i, &c) in z.iter().enumerate() {
            if c != 0 {
                h = h.add(&self.dictionary[i].scale(c));
            }
        }
        h
    }

    /// κ(z, g) = (1 + Δz)·s(ι(g)).
    pub fn kappa(&self, tg: &TildeG, x: &ExtElem) -> UniMatrix {
        let (a, b) = self.iota(tg, x.1 as usize);
        let n = 2 * self.p as usize + 1;
        let s = SnElement::new(self.p, n, self.corner(&x.0)).expect("shape");
        s.to_matrix().mul(&section(&a, &b))
    }

    /// Section-based cocycle of U_{2p+1} over U_{p+1}², pulled back along ι.
    pub fn section_cocycle(&self, tg: &TildeG, g: usize, h: usize) -> FpMatrix {
        let (a1, a2) = self.iota(tg, g);
        let (b1, b2) = self.iota(tg, h);
        let prod = section(&a1, &a2).mul(&section(&b1, &b2));
        split_section(&prod).0.h
    }

    /// The dictionary equals C(σ^u) D(σ^w) and is a basis of the corner.
    pub fn audit_dictionary(&self) -> bool {
        let pp = self.p as usize;
        let mut vecs = Vec::new();
        for u in 0..pp {
            for w in 0..pp {
                let (c, r) = (self.column(u), self.row(w));
                let outer = FpMatrix::from_columns(self.p, &[c]).mul(&FpMatrix::from_rows(self.p, &[r.data.iter().map(|&x| x as i64).collect()]).expect("row")).expect("dims");
                if outer != self.dictionary[u * pp + w] {
                    return false;
                }
                vecs.push(outer.data.iter().map(|&x| x as i64).collect::<Vec<i64>>());
            }
        }
        FpMatrix::from_rows(self.p, &vecs).expect("rows").rank() == pp * pp
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub p: u32,
    /// (a) order of the image of ⟨σ′⟩ in U_{p+1} × U_{p+1}
    pub quotient_order: u64,
    pub quotient_is_iota_image: bool,
    /// (b) normal closure of [σ′_2, σ′_3]
    pub kernel_order: u64,
    pub kernel_elementary_abelian: bool,
    pub kernel_in_corner: bool,
    pub commutator: Vec<Vec<u32>>,
    pub commutator_position_ok: bool,
    /// (c)
    pub order_log: u32,
    /// (d) only for p = 2
    pub equals_u5: Option<bool>,
    /// (e)
    pub cocycle_pairs_checked: u64,
    pub cocycle_agrees: bool,
    pub dictionary_ok: bool,
    pub generators_match: bool,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        let pp = self.p as u64;
        self.quotient_order == pp.pow(2 * self.p + 2)
            && self.quotient_is_iota_image
            && self.kernel_order == pp.pow(self.p * self.p)
            && self.kernel_elementary_abelian
            && self.kernel_in_corner
            && self.commutator_position_ok
            && self.order_log == self.p * self.p + 2 * self.p + 2
            && self.equals_u5.unwrap_or(true)
            && self.cocycle_agrees
            && self.dictionary_ok
            && self.generators_match
    }
}

/// Checks that ⟨σ′_1, …, σ′_4⟩ realizes tilde U_5(F_p). `samples` bounds check (e) when the
/// pair set of tilde G is larger.
pub fn verify_structure<R: Rng>(p: u32, limits: Limits, samples: u64, rng: &mut R) -> Result<StructureReport> {
    let model = MatrixModel::new(p)?;
    let tu = build_tilde_un(p, 2)?;
    let tg = &tu.tilde_g;
    let pp = p as usize;
    let n = 2 * pp + 1;
    let gens = model.generators.clone();

    // (a)
    let up1 = UnipotentGroup::new(p, pp + 1)?;
    let quot = ProductGroup::new(up1, up1);
    let proj = |g: &UniMatrix| (g.block(0, pp + 1), g.block(pp, pp + 1));
    let qgens: Vec<_> = gens.iter().map(proj).collect();
    let q = closure(&quot, &qgens, limits)?;
    let mut image: Vec<(UniMatrix, UniMatrix)> = (0..tg.order()).map(|g| model.iota(tg, g)).collect();
    image.sort();
    image.dedup();
    let quotient_is_iota_image = image.len() == tg.order()
        && image.len() == q.order()
        && image.iter().all(|x| q.contains(x));

    // (b)
    let ug = UnipotentGroup::new(p, n)?;
    let comm = ug.commutator(&gens[1], &gens[2]);
    let kern = normal_closure(&ug, &gens, &[comm.clone()], limits)?;
    let kg = kern.generators();
    let kernel_elementary_abelian = kg.iter().all(|a| ug.is_identity(&ug.pow(a, p as u64)))
        && kg.iter().all(|a| kg.iter().all(|b| ug.mul(a, b) == ug.mul(b, a)));
    let kernel_in_corner = kern.elements().iter().all(|x| SnElement::from_matrix(x).is_some());
    let commutator_position_ok = comm == UniMatrix::from_entries(p, n, &[(pp - 1, pp + 1, 1)])?;

    let quotient_order = q.order() as u64;
    let kernel_order = kern.order() as u64;
    let order_log = (quotient_order as f64 * kernel_order as f64).log(p as f64).round() as u32;

    // (d)
    let equals_u5 = if p == 2 {
        let full = closure(&ug, &gens, limits)?;
        let u5 = closure(&ug, &ug.sigmas(), limits)?;
        Some(full.order() == u5.order() && u5.elements().iter().all(|x| full.contains(x)))
    } else {
        None
    };

    // (e)
    let dictionary_ok = model.audit_dictionary();
    let total = (tg.order() as u64).pow(2);
    let check = |g: usize, h: usize| -> bool {
        let want = model.section_cocycle(tg, g, h);
        model.corner(&tu.omega.get(g, h)) == want
    };
    let (cocycle_pairs_checked, cocycle_agrees) = if total <= samples {
        let ok = (0..tg.order()).all(|g| (0..tg.order()).all(|h| check(g, h)));
        (total, ok)
    } else {
        let pairs: Vec<(usize, usize)> =
            (0..samples).map(|_| (rng.gen_range(0..tg.order()), rng.gen_range(0..tg.order()))).collect();
        (samples, pairs.into_iter().all(|(g, h)| check(g, h)))
    };
    let generators_match =
        tu.canonical_generators().iter().zip(&gens).all(|(x, s)| model.kappa(tg, &tu.ext.to_raw(x)) == *s);

    Ok(StructureReport {
        p,
        quotient_order,
        quotient_is_iota_image,
        kernel_order,
        kernel_elementary_abelian,
        kernel_in_corner,
        commutator: comm.rows(),
        commutator_position_ok,
        order_log,
        equals_u5,
        cocycle_pairs_checked,
        cocycle_agrees,
        dictionary_ok,
        generators_match,
    })
}

/// Lower central series of ⟨σ′_1, …, σ′_4⟩. For p ≥ 3 the first term is taken from the
/// structure theorem instead of enumerating it.
pub fn explicit_lcs(p: u32, limits: Limits) -> Result<LcsReport> {
    let ug = UnipotentGroup::new(p, 2 * p as usize + 1)?;
    let gens = explicit_generators(p)?;
    let gamma1 = (p > 2).then(|| (p as u64).pow(p * p + 2 * p + 2));
    Ok(lower_central_series(&ug, &gens, gamma1, limits))
}

/// Enumerates ⟨σ′_1, …, σ′_4⟩ in full with a bit set indexed by (ι-image rank, corner code).
pub fn enumerate_tilde_u5(p: u32, progress: impl FnMut(u64)) -> Result<u64> {
    let model = MatrixModel::new(p)?;
    let tg = TildeG::new(p, 2)?;
    let pp = p as usize;
    let n = 2 * pp + 1;
    let mut rank: FxHashMap<(u128, u128), u64> = FxHashMap::default();
    for g in 0..tg.order() {
        let (a, b) = model.iota(&tg, g);
        let key = (a.code().expect("small"), b.code().expect("small"));
        let next = rank.len() as u64;
        rank.entry(key).or_insert(next);
    }
    if rank.len() != tg.order() {
        return contract("ι is not injective");
    }
    let corner = (p as u64).pow((pp * pp) as u32);
    let universe = rank.len() as u64 * corner;
    let ug = UnipotentGroup::new(p, n)?;
    let index = |x: &UniMatrix| -> Option<u64> {
        let (s, g1, g2) = split_section(x);
        let r = rank.get(&(g1.code()?, g2.code()?))?;
        let mut c = 0u64;
        for v in s.h.data.iter() {
            c = c * p as u64 + *v as u64;
        }
        Some(r * corner + c)
    };
    count_closure_indexed(&ug, &model.generators, universe, index, progress)
}

/// The images of the standard generators of the extension under κ, and a sampled check that
/// κ is multiplicative.
pub fn audit_kappa<R: Rng>(tu: &TildeUn, model: &MatrixModel, samples: usize, rng: &mut R) -> bool {
    let tg = &tu.tilde_g;
    let d = tu.omega.module.dim;
    let random = |rng: &mut R| -> ExtElem {
        ((0..d).map(|_| rng.gen_range(0..model.p)).collect(), rng.gen_range(0..tg.order()) as u32)
    };
    (0..samples).all(|_| {
        let (a, b) = (random(rng), random(rng));
        let ab = tu.ext.mul(&a, &b);
        let k = |x: &ExtElem| model.kappa(tg, &tu.ext.to_raw(x));
        k(&ab) == k(&a).mul(&k(&b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::is_cocycle1;
    use crate::unipotent::{phi_cocycle, twisted_psi};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wreath_orders_and_f_maps() {
        for p in [2u32, 3] {
            for tag in [Tag::First, Tag::Second] {
                let w = WreathGroup::new(p, 2, tag).unwrap();
                let s = closure(&w, &w.generators(), Limits::default()).unwrap();
                assert_eq!(s.order() as u64, (p as u64).pow(p + 1));
                let u3 = UnipotentGroup::new(p, 3).unwrap();
                let mut kernel = 0;
                for a in s.elements() {
                    let fa = w.f_map(a);
                    if fa.is_identity() {
                        kernel += 1;
                    }
                    if p == 2 {
                        for b in s.elements() {
                            assert_eq!(w.f_map(&w.mul(a, b)), u3.mul(&fa, &w.f_map(b)));
                        }
                    }
                }
                assert_eq!(kernel as u64, (p as u64).pow(p - 2));
                let image: std::collections::BTreeSet<_> = s.elements().iter().map(|a| w.f_map(a)).collect();
                assert_eq!(image.len() as u64, (p as u64).pow(3));
            }
        }
    }

    #[test]
    fn f1_basics() {
        let w = WreathGroup::new(3, 2, Tag::First).unwrap();
        let one = w.one();
        assert_eq!(w.f_map(&w.elt(w.delta(one), one)), sigma(3, 3, 2));
        let s = w.point_index(&sigma(3, 2, 1)).unwrap();
        assert_eq!(w.f_map(&w.elt(vec![0; 3], s)), sigma(3, 3, 1));
    }

    #[test]
    fn lifted_cocycles() {
        for p in [2u32, 3] {
            let tu = build_tilde_un(p, 2).unwrap();
            let tg = &tu.tilde_g;
            assert!(is_cocycle1(&tu.phi1) && is_cocycle1(&tu.phi2));
            assert!(tu.phi1.get(0).iter().all(|&x| x == 0));
            for g in 0..tg.order() {
                let (f1, f2) = tg.f(g);
                let (a, b) = tg.elem(g);
                // 1 ↦ v and 1 ↦ v* on the lifted values
                let w1 = tg.wreath(Tag::First);
                let v = w1.f_map(&w1.elt(a.x.clone(), w1.one()));
                assert_eq!(phi_cocycle(&v).data, phi_cocycle(&f1).data);
                let w2 = tg.wreath(Tag::Second);
                let r = w2.f_map(&w2.elt(b.x.clone(), w2.one()));
                assert_eq!(crate::unipotent::psi_cocycle(&r).data, twisted_psi(&f2).data);
                if tg.in_tilde_n(g) {
                    assert_eq!(tu.phi1.get(g), &a.x[..]);
                }
            }
            assert_eq!(tu.order_log(), p * p + 2 * p + 2);
        }
    }

    #[test]
    fn induced_module_orbits() {
        let tu = build_tilde_un(3, 2).unwrap();
        let tg = &tu.tilde_g;
        let m = &tu.omega.module;
        let k = m.dim;
        let mut orbit = std::collections::BTreeSet::new();
        for g in 0..tg.order() {
            let v = m.act(g, &{
                let mut e = vec![0; k];
                e[0] = 1;
                e
            });
            orbit.insert(v.clone());
            let fixes = (0..k).all(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                m.act(g, &e) == e
            });
            assert_eq!(fixes, tg.in_tilde_n(g));
        }
        assert_eq!(orbit.len(), k);
    }

    #[test]
    fn explicit_generators_p3() {
        let g = explicit_generators(3).unwrap();
        let text = g[0].to_text();
        assert!(text.starts_with("3 7\n1 1 0 0 0 0 0\n0 1 1 0 0 0 0\n0 0 1 0 0 0 0\n"));
        assert_eq!(g[3].entry(4, 5), 1);
        assert_eq!(g[3].entry(5, 6), 1);
        assert_eq!(g[1], sigma(3, 7, 3));
        let two = explicit_generators(2).unwrap();
        for (i, s) in two.iter().enumerate() {
            assert_eq!(*s, sigma(2, 5, i + 1));
        }
    }

    #[test]
    fn structure_p2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = verify_structure(2, Limits::default(), 10_000, &mut rng).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.equals_u5, Some(true));
        assert_eq!(r.cocycle_pairs_checked, 4096);
        let tu = build_tilde_un(2, 2).unwrap();
        let model = MatrixModel::new(2).unwrap();
        assert!(audit_kappa(&tu, &model, 2000, &mut rng));
        let all = closure(&tu.ext, &tu.ext.generators(), Limits::default()).unwrap();
        assert_eq!(all.order(), 1024);
    }

    #[test]
    fn quotient_to_u5() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2u32, 3] {
            let tu = build_tilde_un(p, 2).unwrap();
            let tg = &tu.tilde_g;
            let d = tu.omega.module.dim;
            let model = MatrixModel::new(p).unwrap();
            for _ in 0..3000 {
                let mut rand = || -> ExtElem {
                    ((0..d).map(|_| rng.gen_range(0..p)).collect(), rng.gen_range(0..tg.order()) as u32)
                };
                let (a, b) = (rand(), rand());
                let q = |x: &ExtElem| tu.to_un(&tu.ext.to_raw(x));
                assert_eq!(q(&tu.ext.mul(&a, &b)), q(&a).mul(&q(&b)));
                if p == 2 {
                    assert_eq!(q(&a), model.kappa(tg, &tu.ext.to_raw(&a)));
                }
            }
        }
    }

    #[test]
    fn lcs_p2() {
        let r = explicit_lcs(2, Limits::default()).unwrap();
        assert_eq!(r.orders(), vec![1024, 64, 8, 2, 1]);
    }

    #[test]
    fn enumerate_p2() {
        assert_eq!(enumerate_tilde_u5(2, |_| {}).unwrap(), 1024);
    }
}
