//! Finite fields and quotient rings F[X]/(g) over them.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{contract, Result};

/// Arithmetic in a finite commutative ring; a field unless stated otherwise.
///
/// `from_index` enumerates the elements with index 0 the zero and index 1 the one.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None when `a` is not a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    fn size(&self) -> u64;
    fn from_index(&self, idx: u64) -> Self::Elem;
    fn index_of(&self, a: &Self::Elem) -> u64;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn from_int(&self, k: i64) -> Self::Elem {
        let c = self.characteristic() as i64;
        let r = k.rem_euclid(c) as u64;
        let one = self.one();
        let mut acc = self.zero();
        for _ in 0..r {
            acc = self.add(&acc, &one);
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents for units.
    fn pow_i(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|b| self.pow(&b, e.unsigned_abs()))
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits q = ℓ^f; None unless q is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let l = fs[0];
    let mut f = 0;
    let mut r = q;
    while r > 1 {
        r /= l;
        f += 1;
    }
    Some((l, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return contract(format!("{p} is not prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a % self.p == 0 {
            return None;
        }
        Some(self.pow(a, self.p as u64 - 2))
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn size(&self) -> u64 {
        self.p as u64
    }
    fn from_index(&self, idx: u64) -> u32 {
        (idx % self.p as u64) as u32
    }
    fn index_of(&self, a: &u32) -> u64 {
        *a as u64
    }
    fn from_int(&self, k: i64) -> u32 {
        self.reduce(k)
    }
}

/// The quotient ring F[X]/(g) for a monic g of positive degree.
/// Elements are coefficient vectors of length deg g, constant term first.
#[derive(Clone, Debug)]
pub struct PolyQuotient<F: Field> {
    base: F,
    modulus: Arc<Vec<F::Elem>>,
}

impl<F: Field> PolyQuotient<F> {
    /// `modulus` lists coefficients constant-first and must be monic.
    pub fn new(base: F, modulus: Vec<F::Elem>) -> Result<Self> {
        if modulus.len() < 2 {
            return contract("quotient modulus must have positive degree");
        }
        if *modulus.last().unwrap() != base.one() {
            return contract("quotient modulus must be monic");
        }
        Ok(PolyQuotient { base, modulus: Arc::new(modulus) })
    }

    /// F[X]/(X^k − a).
    pub fn binomial(base: F, k: usize, a: &F::Elem) -> Result<Self> {
        let mut m = vec![base.zero(); k + 1];
        m[0] = base.neg(a);
        m[k] = base.one();
        Self::new(base, m)
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[F::Elem] {
        &self.modulus
    }

    pub fn constant(&self, c: &F::Elem) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = c.clone();
        v
    }

    /// The class of X.
    pub fn generator(&self) -> Vec<F::Elem> {
        let mut v = vec![self.base.zero(); self.degree()];
        if self.degree() == 1 {
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = self.base.one();
        }
        v
    }

    /// Evaluates a polynomial with base coefficients at an element of this ring.
    pub fn eval_poly(&self, coeffs: &[F::Elem], x: &Vec<F::Elem>) -> Vec<F::Elem> {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.constant(c));
        }
        acc
    }

    fn reduce(&self, mut prod: Vec<F::Elem>) -> Vec<F::Elem> {
        let d = self.degree();
        let b = &self.base;
        for k in (d..prod.len()).rev() {
            let c = prod[k].clone();
            if b.is_zero(&c) {
                continue;
            }
            for j in 0..d {
                let t = b.mul(&c, &self.modulus[j]);
                prod[k - d + j] = b.sub(&prod[k - d + j], &t);
            }
            prod[k] = b.zero();
        }
        prod.truncate(d);
        prod
    }

    /// Extended Euclid on (a, g); None if gcd is not a unit.
    fn inv_euclid(&self, a: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let b = &self.base;
        let mut r0 = trimmed(b, self.modulus.to_vec());
        let mut r1 = trimmed(b, a.to_vec());
        let mut s0 = vec![b.zero()];
        let mut s1 = vec![b.one()];
        while !(r1.len() == 1 && b.is_zero(&r1[0])) {
            let (q, r) = poly_divmod(b, &r0, &r1)?;
            let s = trimmed(b, poly_sub(b, &s0, &poly_mul(b, &q, &s1)));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // gcd is r0
        if r0.len() != 1 {
            return None;
        }
        let c = b.inv(&r0[0])?;
        let mut out: Vec<F::Elem> = s0.iter().map(|x| b.mul(x, &c)).collect();
        if out.len() < self.degree() {
            out.resize(self.degree(), b.zero());
        }
        Some(self.reduce(out))
    }
}

fn trimmed<F: Field>(f: &F, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    while v.len() > 1 && f.is_zero(v.last().unwrap()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(f.zero());
    }
    v
}

fn poly_mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    out
}

fn poly_sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            f.sub(&x, &y)
        })
        .collect()
}

/// Division with remainder; None if the divisor's leading coefficient is not a unit.
fn poly_divmod<F: Field>(f: &F, a: &[F::Elem], d: &[F::Elem]) -> Option<(Vec<F::Elem>, Vec<F::Elem>)> {
    let lead_inv = f.inv(d.last().unwrap())?;
    let mut r = a.to_vec();
    if r.len() < d.len() {
        return Some((vec![f.zero()], trimmed(f, r)));
    }
    let mut q = vec![f.zero(); r.len() - d.len() + 1];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + d.len() - 1], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        q[k] = c.clone();
        for (j, dc) in d.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, dc));
        }
    }
    r.truncate(d.len() - 1);
    Some((trimmed(f, q), trimmed(f, r)))
}

impl<F: Field> Field for PolyQuotient<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        self.constant(&self.base.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let d = self.degree();
        let bf = &self.base;
        let mut prod = vec![bf.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if bf.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = bf.mul(x, y);
                prod[i + j] = bf.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.inv_euclid(a)
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn size(&self) -> u64 {
        self.base.size().pow(self.degree() as u32)
    }
    fn from_index(&self, mut idx: u64) -> Self::Elem {
        let s = self.base.size();
        (0..self.degree())
            .map(|_| {
                let c = self.base.from_index(idx % s);
                idx /= s;
                c
            })
            .collect()
    }
    fn index_of(&self, a: &Self::Elem) -> u64 {
        let s = self.base.size();
        a.iter().rev().fold(0, |acc, c| acc * s + self.base.index_of(c))
    }
}

/// Multiplicative order of a unit in a finite field of the given size.
pub fn unit_order<F: Field>(f: &F, a: &F::Elem) -> u64 {
    let n = f.size() - 1;
    let mut ord = n;
    for r in prime_factors(n) {
        while ord % r == 0 && f.pow(a, ord / r) == f.one() {
            ord /= r;
        }
    }
    ord
}

/// Least-index generator of the multiplicative group; `f` must be a field.
pub fn primitive_element<F: Field>(f: &F) -> F::Elem {
    let n = f.size() - 1;
    let rs = prime_factors(n);
    for idx in 1..f.size() {
        let x = f.from_index(idx);
        if rs.iter().all(|r| f.pow(&x, n / r) != f.one()) {
            return x;
        }
    }
    unreachable!("finite field without a primitive element")
}

/// Baby-step giant-step discrete logarithm of `x` to `base`, whose order is `order`.
pub fn dlog<F: Field>(f: &F, base: &F::Elem, x: &F::Elem, order: u64) -> Option<u64> {
    if f.is_zero(x) {
        return None;
    }
    let m = (order as f64).sqrt().ceil() as u64 + 1;
    let mut table: FxHashMap<u64, u64> = FxHashMap::default();
    let mut cur = f.one();
    for j in 0..m {
        table.entry(f.index_of(&cur)).or_insert(j);
        cur = f.mul(&cur, base);
    }
    let step = f.inv(&f.pow(base, m))?;
    let mut gamma = x.clone();
    for i in 0..=m {
        if let Some(j) = table.get(&f.index_of(&gamma)) {
            let k = (i * m + j) % order;
            return Some(k);
        }
        gamma = f.mul(&gamma, &step);
    }
    None
}

/// A finite field bundled with its canonical generator.
#[derive(Clone, Debug)]
pub struct CyclicUnits<F: Field> {
    pub field: F,
    pub generator: F::Elem,
}

impl<F: Field> CyclicUnits<F> {
    pub fn new(field: F) -> Self {
        let generator = primitive_element(&field);
        CyclicUnits { field, generator }
    }

    pub fn order(&self) -> u64 {
        self.field.size() - 1
    }

    pub fn log(&self, x: &F::Elem) -> Option<u64> {
        dlog(&self.field, &self.generator, x, self.order())
    }

    pub fn gen_pow(&self, k: i64) -> F::Elem {
        let n = self.order() as i64;
        self.field.pow(&self.generator, k.rem_euclid(n) as u64)
    }

    /// True iff `x` is a nonzero k-th power.
    pub fn is_power(&self, x: &F::Elem, k: u64) -> bool {
        match self.log(x) {
            Some(l) => l % gcd(k, self.order()) == 0,
            None => false,
        }
    }

    /// Some k-th root of `x` when one exists.
    pub fn root(&self, x: &F::Elem, k: u64) -> Option<F::Elem> {
        let l = self.log(x)?;
        let n = self.order();
        let g = gcd(k, n);
        if l % g != 0 {
            return None;
        }
        // solve k e ≡ l mod n
        let (kk, ll, nn) = (k / g, l / g, n / g);
        let inv = mod_inverse(kk % nn.max(1), nn.max(1)).unwrap_or(0);
        let e = if nn == 1 { 0 } else { (ll as u128 * inv as u128 % nn as u128) as u64 };
        Some(self.field.pow(&self.generator, e))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (n as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn quotient_inverse_and_zero_divisors() {
        let f = PrimeField::new(3).unwrap();
        // X^2 - 1 is reducible, X - 1 has no inverse
        let r = PolyQuotient::binomial(f, 2, &1).unwrap();
        assert!(r.inv(&vec![2, 1]).is_none());
        let u = vec![1, 1];
        assert!(r.inv(&u).is_none());
        // X^2 + 1 irreducible over F_3
        let k = PolyQuotient::new(f, vec![1, 0, 1]).unwrap();
        for idx in 1..9 {
            let x = k.from_index(idx);
            assert_eq!(k.mul(&x, &k.inv(&x).unwrap()), k.one());
        }
    }

    #[test]
    fn dlog_roundtrip() {
        let f = PrimeField::new(7).unwrap();
        let c = CyclicUnits::new(f);
        assert_eq!(c.generator, 3);
        for k in 0..6 {
            let x = c.gen_pow(k);
            assert_eq!(c.log(&x), Some(k as u64));
        }
        assert!(c.is_power(&6, 3));
        assert!(!c.is_power(&3, 3));
        let r = c.root(&6, 3).unwrap();
        assert_eq!(f.pow(&r, 3), 6);
    }
}
