//! The groups U_n(F_p) of upper unitriangular matrices, the maps s_i, π, π′, the
//! corner module S_n and the cocycles φ and ψ.
//!
//! Matrices act on column vectors from the left. Entry coordinates are 0-based; the
//! index of s_i and σ_i is 1-based as usual.

use std::fmt;

use rand::Rng;

use crate::error::{contract, Error, Result};
use crate::fpcore::{FpMatrix, FpScalar, FpVector};
use crate::groupengine::Group;

pub const MAX_N: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Packed {
    Words(u128),
    Bytes(Box<[u8]>),
}

/// Upper unitriangular n×n matrix over F_p, strictly-upper entries packed row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniMatrix {
    p: u8,
    n: u8,
    bits: Packed,
}

fn width(p: u32) -> u32 {
    32 - (p - 1).leading_zeros()
}

#[inline]
fn entry_index(n: usize, i: usize, j: usize) -> usize {
    // row-major position of (i, j), i < j, among strictly-upper entries
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Dense working copy used for arithmetic.
#[derive(Clone)]
pub struct Dense {
    pub p: u32,
    pub n: usize,
    pub a: [u8; MAX_N * MAX_N],
}

impl Dense {
    pub fn identity(p: u32, n: usize) -> Self {
        let mut a = [0u8; MAX_N * MAX_N];
        for i in 0..n {
            a[i * MAX_N + i] = 1;
        }
        Dense { p, n, a }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.a[i * MAX_N + j] as u32
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.a[i * MAX_N + j] = (v % self.p) as u8;
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let p = self.p;
        let mut out = Dense::identity(p, n);
        for i in 0..n {
            for j in i + 1..n {
                let mut s = self.get(i, j) + o.get(i, j);
                for k in i + 1..j {
                    s += self.get(i, k) * o.get(k, j);
                }
                out.a[i * MAX_N + j] = (s % p) as u8;
            }
        }
        out
    }

    pub fn inv(&self) -> Dense {
        let n = self.n;
        let p = self.p;
        let mut x = Dense::identity(p, n);
        for j in 1..n {
            for i in (0..j).rev() {
                let mut s = self.get(i, j);
                for k in i + 1..j {
                    s += self.get(i, k) * x.get(k, j);
                }
                x.a[i * MAX_N + j] = ((p - s % p) % p) as u8;
            }
        }
        x
    }
}

impl UniMatrix {
    pub fn identity(p: u32, n: usize) -> Self {
        Self::pack(&Dense::identity(p, n))
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn is_identity(&self) -> bool {
        match &self.bits {
            Packed::Words(w) => *w == 0,
            Packed::Bytes(b) => b.iter().all(|&x| x == 0),
        }
    }

    /// The packed code when the entries fit in two machine words.
    pub fn code(&self) -> Option<u128> {
        match &self.bits {
            Packed::Words(w) => Some(*w),
            Packed::Bytes(_) => None,
        }
    }

    pub fn pack(d: &Dense) -> Self {
        let n = d.n;
        let w = width(d.p);
        let count = n * (n - 1) / 2;
        let bits = if (count as u32) * w <= 128 {
            let mut code: u128 = 0;
            let mut shift = 0;
            for i in 0..n {
                for j in i + 1..n {
                    code |= (d.get(i, j) as u128) << shift;
                    shift += w;
                }
            }
            Packed::Words(code)
        } else {
            let mut v = Vec::with_capacity(count);
            for i in 0..n {
                for j in i + 1..n {
                    v.push(d.get(i, j) as u8);
                }
            }
            Packed::Bytes(v.into_boxed_slice())
        };
        UniMatrix { p: d.p as u8, n: n as u8, bits }
    }

    pub fn unpack(&self) -> Dense {
        let n = self.n();
        let p = self.p();
        let mut d = Dense::identity(p, n);
        match &self.bits {
            Packed::Words(code) => {
                let w = width(p);
                let mask = (1u128 << w) - 1;
                let mut c = *code;
                for i in 0..n {
                    for j in i + 1..n {
                        d.a[i * MAX_N + j] = (c & mask) as u8;
                        c >>= w;
                    }
                }
            }
            Packed::Bytes(b) => {
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        d.a[i * MAX_N + j] = b[k];
                        k += 1;
                    }
                }
            }
        }
        d
    }

    /// Entry (i, j), 0-based.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        if i > j {
            return 0;
        }
        match &self.bits {
            Packed::Words(code) => {
                let w = width(self.p());
                let k = entry_index(self.n(), i, j) as u32;
                ((code >> (k * w)) & ((1u128 << w) - 1)) as u32
            }
            Packed::Bytes(b) => b[entry_index(self.n(), i, j)] as u32,
        }
    }

    /// Builds a matrix from its strictly-upper entries given as (i, j, value), 0-based.
    pub fn from_entries(p: u32, n: usize, entries: &[(usize, usize, i64)]) -> Result<Self> {
        check_params(p, n)?;
        let mut d = Dense::identity(p, n);
        for &(i, j, v) in entries {
            if i >= j || j >= n {
                return contract(format!("({i},{j}) is not a strictly-upper position for n={n}"));
            }
            d.set(i, j, v.rem_euclid(p as i64) as u32);
        }
        Ok(Self::pack(&d))
    }

    pub fn from_fp_matrix(m: &FpMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return contract("unitriangular matrices are square");
        }
        let n = m.rows;
        check_params(m.p, n)?;
        let mut d = Dense::identity(m.p, n);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                let expect = if i == j { Some(1) } else if i > j { Some(0) } else { None };
                match expect {
                    Some(e) if v != e => return contract(format!("entry ({i},{j}) = {v} is not unitriangular")),
                    Some(_) => {}
                    None => d.set(i, j, v),
                }
            }
        }
        Ok(Self::pack(&d))
    }

    pub fn to_fp_matrix(&self) -> FpMatrix {
        let n = self.n();
        let mut m = FpMatrix::zeros(self.p(), n, n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, self.entry(i, j));
            }
        }
        m
    }

    pub fn mul(&self, o: &UniMatrix) -> UniMatrix {
        debug_assert_eq!((self.p, self.n), (o.p, o.n));
        Self::pack(&self.unpack().mul(&o.unpack()))
    }

    pub fn inv(&self) -> UniMatrix {
        Self::pack(&self.unpack().inv())
    }

    pub fn random<R: Rng>(p: u32, n: usize, rng: &mut R) -> UniMatrix {
        let mut d = Dense::identity(p, n);
        for i in 0..n {
            for j in i + 1..n {
                d.set(i, j, rng.gen_range(0..p));
            }
        }
        Self::pack(&d)
    }

    /// Top-left block of size k starting at offset (off, off).
    pub fn block(&self, off: usize, k: usize) -> UniMatrix {
        let src = self.unpack();
        let mut d = Dense::identity(self.p(), k);
        for i in 0..k {
            for j in i + 1..k {
                d.set(i, j, src.get(off + i, off + j));
            }
        }
        Self::pack(&d)
    }

    /// Embeds `self` as the diagonal block at offset `off` of an n×n identity.
    pub fn embed(&self, n: usize, off: usize) -> UniMatrix {
        let src = self.unpack();
        let k = self.n();
        let mut d = Dense::identity(self.p(), n);
        for i in 0..k {
            for j in i + 1..k {
                d.set(off + i, off + j, src.get(i, j));
            }
        }
        Self::pack(&d)
    }

    /// Parses the text format: "p n" then n rows of n residues.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix".into()))?;
        let (p, n) = parse_pair(header)?;
        let rows: Vec<&str> = lines.collect();
        Self::parse_rows(p, n, &rows)
    }

    pub(crate) fn parse_rows(p: u32, n: usize, rows: &[&str]) -> Result<Self> {
        if rows.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
        }
        let mut m = FpMatrix::zeros(p, n, n);
        for (i, row) in rows.iter().enumerate() {
            let vals: Vec<&str> = row.split_whitespace().collect();
            if vals.len() != n {
                return Err(Error::Parse(format!("row {} has {} entries, expected {n}", i + 1, vals.len())));
            }
            for (j, v) in vals.iter().enumerate() {
                let x: i64 = v.parse().map_err(|_| Error::Parse(format!("bad residue '{v}'")))?;
                if x < 0 || x >= p as i64 {
                    return Err(Error::Parse(format!("residue {x} out of range for p={p}")));
                }
                m.set(i, j, x as u32);
            }
        }
        Self::from_fp_matrix(&m).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.p(), self.n());
        s.push_str(&self.to_fp_matrix().to_string());
        s
    }

    /// Rows as nested vectors, for reports.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        (0..n).map(|i| (0..n).map(|j| self.entry(i, j)).collect()).collect()
    }
}

pub(crate) fn parse_pair(header: &str) -> Result<(u32, usize)> {
    let hs: Vec<&str> = header.split_whitespace().collect();
    if hs.len() < 2 {
        return Err(Error::Parse(format!("bad header '{header}'")));
    }
    let p: u32 = hs[0].parse().map_err(|_| Error::Parse(format!("bad prime '{}'", hs[0])))?;
    let n: usize = hs[1].parse().map_err(|_| Error::Parse(format!("bad size '{}'", hs[1])))?;
    check_params(p, n).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((p, n))
}

fn check_params(p: u32, n: usize) -> Result<()> {
    if !crate::fpcore::is_prime(p as u64) || p > 255 {
        return contract(format!("p = {p} must be a prime below 256"));
    }
    if n == 0 || n > MAX_N {
        return contract(format!("n = {n} outside 1..={MAX_N}"));
    }
    Ok(())
}

impl fmt::Debug for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows().iter().map(|r| format!("{r:?}")).collect();
        write!(f, "U[{}]", rows.join(","))
    }
}

impl fmt::Display for UniMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// U_n(F_p) as a group context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnipotentGroup {
    pub p: u32,
    pub n: usize,
}

impl UnipotentGroup {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        check_params(p, n)?;
        Ok(UnipotentGroup { p, n })
    }

    pub fn order_log(&self) -> u32 {
        (self.n * (self.n - 1) / 2) as u32
    }

    /// σ_1, …, σ_{n−1}.
    pub fn sigmas(&self) -> Vec<UniMatrix> {
        (1..self.n).map(|i| sigma(self.p, self.n, i)).collect()
    }
}

impl Group for UnipotentGroup {
    type Elem = UniMatrix;

    fn identity(&self) -> UniMatrix {
        UniMatrix::identity(self.p, self.n)
    }
    fn mul(&self, a: &UniMatrix, b: &UniMatrix) -> UniMatrix {
        a.mul(b)
    }
    fn inv(&self, a: &UniMatrix) -> UniMatrix {
        a.inv()
    }
    fn elem_bytes(&self) -> usize {
        let bits = self.n * (self.n - 1) / 2 * width(self.p) as usize;
        std::mem::size_of::<UniMatrix>() + if bits > 128 { bits / 8 + 16 } else { 0 }
    }
}

/// σ_i = I + E_{i,i+1}, 1-based i.
pub fn sigma(p: u32, n: usize, i: usize) -> UniMatrix {
    assert!(i >= 1 && i < n, "σ_{i} undefined for n = {n}");
    UniMatrix::from_entries(p, n, &[(i - 1, i, 1)]).expect("valid σ")
}

/// s_i(g) = g_{i,i+1}, 1-based i.
pub fn s_proj(g: &UniMatrix, i: usize) -> Result<FpScalar> {
    if i == 0 || i >= g.n() {
        return contract(format!("s_{i} undefined on U_{}", g.n()));
    }
    Ok(FpScalar::raw(g.entry(i - 1, i), g.p()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// π: delete the last column and bottom row.
    Head,
    /// π′: delete the top row and first column.
    Tail,
}

pub fn project(g: &UniMatrix, side: Side) -> UniMatrix {
    let n = g.n();
    assert!(n >= 2, "projection needs n ≥ 2");
    match side {
        Side::Head => g.block(0, n - 1),
        Side::Tail => g.block(1, n - 1),
    }
}

/// An element of S_n: the m×m top-right block h of 1 + h.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SnElement {
    pub p: u32,
    pub n: usize,
    pub h: FpMatrix,
}

impl SnElement {
    pub fn corner(n: usize) -> usize {
        n / 2
    }

    pub fn zero(p: u32, n: usize) -> Self {
        let m = Self::corner(n);
        SnElement { p, n, h: FpMatrix::zeros(p, m, m) }
    }

    pub fn new(p: u32, n: usize, h: FpMatrix) -> Result<Self> {
        let m = Self::corner(n);
        if h.rows != m || h.cols != m || h.p != p {
            return contract(format!("S_{n} block must be {m}×{m} over F_{p}"));
        }
        Ok(SnElement { p, n, h })
    }

    /// Basis element e_i ⊗ e_j^*, index i·m + j.
    pub fn basis(p: u32, n: usize, idx: usize) -> Self {
        let mut s = Self::zero(p, n);
        let m = Self::corner(n);
        s.h.set(idx / m, idx % m, 1);
        s
    }

    pub fn to_matrix(&self) -> UniMatrix {
        let m = Self::corner(self.n);
        let off = self.n - m;
        let mut d = Dense::identity(self.p, self.n);
        for i in 0..m {
            for j in 0..m {
                d.set(i, off + j, self.h.get(i, j));
            }
        }
        UniMatrix::pack(&d)
    }

    /// The corner block of a matrix; None unless the matrix lies in S_n.
    pub fn from_matrix(g: &UniMatrix) -> Option<Self> {
        let n = g.n();
        let m = Self::corner(n);
        let off = n - m;
        for i in 0..n {
            for j in i + 1..n {
                let in_corner = i < m && j >= off;
                if !in_corner && g.entry(i, j) != 0 {
                    return None;
                }
            }
        }
        let mut h = FpMatrix::zeros(g.p(), m, m);
        for i in 0..m {
            for j in 0..m {
                h.set(i, j, g.entry(i, off + j));
            }
        }
        Some(SnElement { p: g.p(), n, h })
    }

    /// Coordinates in the basis e_i ⊗ e_j^*.
    pub fn to_vector(&self) -> FpVector {
        FpVector { p: self.p, data: self.h.data.clone() }
    }
}

/// Action of U_{m+1}×U_{m+1} (odd n = 2m+1) or U_m×U_m (even n = 2m) on S_n.
pub fn sn_act(g1: &UniMatrix, g2: &UniMatrix, h: &SnElement) -> Result<SnElement> {
    let n = h.n;
    let m = SnElement::corner(n);
    let (a, b) = if n % 2 == 1 {
        if g1.n() != m + 1 || g2.n() != m + 1 {
            return contract(format!("S_{n} is acted on by U_{} × U_{}", m + 1, m + 1));
        }
        (project(g1, Side::Head), project(g2, Side::Tail))
    } else {
        if g1.n() != m || g2.n() != m {
            return contract(format!("S_{n} is acted on by U_{m} × U_{m}"));
        }
        (g1.clone(), g2.clone())
    };
    let res = a.to_fp_matrix().mul(&h.h)?.mul(&b.inv().to_fp_matrix())?;
    SnElement::new(h.p, n, res)
}

/// A lift of (g1, g2) to U_n whose conjugation action on S_n is the action above.
pub fn lift_pair(g1: &UniMatrix, g2: &UniMatrix, n: usize) -> UniMatrix {
    g1.embed(n, 0).mul(&g2.embed(n, n / 2))
}

/// s(g1, g2) for n = 2m+1: g1 in the top-left (m+1)-block, g2 in the bottom-right one,
/// zero top-right m×m corner.
pub fn section(g1: &UniMatrix, g2: &UniMatrix) -> UniMatrix {
    let k = g1.n();
    let n = 2 * k - 1;
    let (a, b) = (g1.unpack(), g2.unpack());
    let mut d = Dense::identity(g1.p(), n);
    for i in 0..k {
        for j in i + 1..k {
            d.set(i, j, a.get(i, j));
            d.set(k - 1 + i, k - 1 + j, b.get(i, j));
        }
    }
    UniMatrix::pack(&d)
}

/// The blocks (g1, g2) of an element of U_{2m+1} and its S-part σ·s(g1, g2)^{-1}.
pub fn split_section(g: &UniMatrix) -> (SnElement, UniMatrix, UniMatrix) {
    let n = g.n();
    let k = n / 2 + 1;
    let g1 = g.block(0, k);
    let g2 = g.block(k - 1, k);
    let s = SnElement::from_matrix(&g.mul(&section(&g1, &g2).inv())).expect("S-part lies in S_n");
    (s, g1, g2)
}

/// Last column of g without its last entry.
pub fn phi_cocycle(g: &UniMatrix) -> FpVector {
    let k = g.n() - 1;
    FpVector { p: g.p(), data: (0..k).map(|i| g.entry(i, k)).collect() }
}

/// First row of g without its first entry, as a row vector.
pub fn psi_cocycle(g: &UniMatrix) -> FpVector {
    let n = g.n();
    FpVector { p: g.p(), data: (1..n).map(|j| g.entry(0, j)).collect() }
}

/// Action of g ∈ U_{m+1} on a row vector r ∈ V_m^*: r ↦ r·π′(g)^{-1}.
pub fn act_dual(g: &UniMatrix, r: &FpVector) -> FpVector {
    let t = project(g, Side::Tail).inv().to_fp_matrix();
    t.vec_mul(r).expect("dimensions")
}

/// Action of g ∈ U_{m+1} on a column vector v ∈ V_m: v ↦ π(g)·v.
pub fn act_natural(g: &UniMatrix, v: &FpVector) -> FpVector {
    project(g, Side::Head).to_fp_matrix().mul_vec(v).expect("dimensions")
}

/// The twisted cocycle g ↦ g·ψ(g).
pub fn twisted_psi(g: &UniMatrix) -> FpVector {
    act_dual(g, &psi_cocycle(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pack_roundtrip_and_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for &(p, n) in &[(2, 5), (3, 7), (5, 11), (7, 15)] {
            for _ in 0..50 {
                let g = UniMatrix::random(p, n, &mut rng);
                assert_eq!(UniMatrix::pack(&g.unpack()), g);
                assert_eq!(g.mul(&g.inv()), UniMatrix::identity(p, n));
                let m = g.to_fp_matrix();
                let h = UniMatrix::random(p, n, &mut rng);
                assert_eq!(g.mul(&h).to_fp_matrix(), m.mul(&h.to_fp_matrix()).unwrap());
            }
        }
        let g = UnipotentGroup::new(3, 7).unwrap();
        assert!(UniMatrix::identity(3, 7).code().is_some());
        assert_eq!(g.element_order(&sigma(3, 7, 2)), 3);
    }

    #[test]
    fn u2_codes_follow_powers() {
        let s = sigma(3, 2, 1);
        assert_eq!(s.code(), Some(1));
        assert_eq!(s.mul(&s).code(), Some(2));
    }

    #[test]
    fn text_format() {
        let g = UniMatrix::from_entries(3, 3, &[(0, 1, 1), (0, 2, 2), (1, 2, 1)]).unwrap();
        let t = g.to_text();
        assert_eq!(t, "3 3\n1 1 2\n0 1 1\n0 0 1\n");
        assert_eq!(UniMatrix::parse(&t).unwrap(), g);
        assert!(UniMatrix::parse("3 2\n1 1\n1 1\n").is_err());
        assert!(UniMatrix::parse("3 2\n2 0\n0 1\n").is_err());
        assert!(UniMatrix::parse("3 2\n1 0\n0 1\n0 1\n").is_err());
    }

    #[test]
    fn s_and_projections() {
        let s1s2 = sigma(3, 3, 1).mul(&sigma(3, 3, 2));
        assert_eq!(s_proj(&s1s2, 1).unwrap().value(), 1);
        assert_eq!(s_proj(&s1s2, 2).unwrap().value(), 1);
        assert!(s_proj(&s1s2, 3).is_err());
        for i in 1..5 {
            for j in 1..5 {
                assert_eq!(s_proj(&sigma(2, 5, j), i).unwrap().value(), (i == j) as u32);
            }
        }
        assert_eq!(project(&UniMatrix::identity(3, 5), Side::Head), UniMatrix::identity(3, 4));
        for i in 1..4 {
            assert_eq!(project(&sigma(3, 5, i), Side::Head), sigma(3, 4, i));
        }
        assert!(project(&sigma(3, 5, 4), Side::Head).is_identity());
    }

    #[test]
    fn cocycle_examples() {
        let g = UniMatrix::from_entries(5, 3, &[(0, 1, 3), (0, 2, 4), (1, 2, 2)]).unwrap();
        assert_eq!(phi_cocycle(&g).data, vec![4, 2]);
        assert_eq!(psi_cocycle(&g).data, vec![3, 4]);
        assert!(phi_cocycle(&UniMatrix::identity(5, 3)).is_zero());
        assert!(psi_cocycle(&UniMatrix::identity(5, 3)).is_zero());
    }

    #[test]
    fn sn_identity_action() {
        let h = SnElement::basis(3, 5, 2);
        let e = UniMatrix::identity(3, 3);
        assert_eq!(sn_act(&e, &e, &h).unwrap(), h);
        let h6 = SnElement::basis(3, 6, 4);
        let e3 = UniMatrix::identity(3, 3);
        assert_eq!(sn_act(&e3, &e3, &h6).unwrap(), h6);
    }

    #[test]
    fn even_sn_action_matches_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let g1 = UniMatrix::random(3, 3, &mut rng);
            let g2 = UniMatrix::random(3, 3, &mut rng);
            let idx = rng.gen_range(0..9);
            let h = SnElement::basis(3, 6, idx);
            let l = lift_pair(&g1, &g2, 6);
            let c = l.mul(&h.to_matrix()).mul(&l.inv());
            assert_eq!(SnElement::from_matrix(&c).unwrap(), sn_act(&g1, &g2, &h).unwrap());
        }
    }

    #[test]
    fn section_split_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let g = UniMatrix::random(3, 5, &mut rng);
            let (h, g1, g2) = split_section(&g);
            assert_eq!(h.to_matrix().mul(&section(&g1, &g2)), g);
            assert_eq!(project(&g1, Side::Tail), g.block(1, 2));
        }
    }
}
