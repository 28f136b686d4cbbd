//! F_q as F_ℓ[x]/(g) with g the least monic irreducible polynomial of degree f.

use super::field::{prime_power, Field, PolyQuotient, PrimeField};
use crate::error::{contract, Result};

pub type Fq = PolyQuotient<PrimeField>;

/// Element of F_q: coefficient vector over F_ℓ, constant term first.
pub type FqElem = Vec<u32>;

/// Monic polynomials of degree `deg` over F_ℓ in increasing index order; the index
/// reads the non-leading coefficients as base-ℓ digits, constant term least significant.
fn monic(l: u32, deg: usize, idx: u64) -> Vec<u32> {
    let mut v = Vec::with_capacity(deg + 1);
    let mut r = idx;
    for _ in 0..deg {
        v.push((r % l as u64) as u32);
        r /= l as u64;
    }
    v.push(1);
    v
}

fn rem(f: PrimeField, a: &[u32], d: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let dl = d.len();
    if r.len() < dl {
        return r;
    }
    for k in (0..=r.len() - dl).rev() {
        let c = r[k + dl - 1];
        if c == 0 {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[k + j] = f.sub(&r[k + j], &f.mul(&c, dc));
        }
    }
    r.truncate(dl - 1);
    r
}

/// Irreducibility over F_ℓ by trial division with every monic polynomial of degree ≤ deg/2.
pub fn is_irreducible(l: u32, poly: &[u32]) -> bool {
    let f = PrimeField::new(l).expect("prime");
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for idx in 0..(l as u64).pow(d as u32) {
            let m = monic(l, d, idx);
            if rem(f, poly, &m).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

pub fn least_irreducible(l: u32, deg: usize) -> Vec<u32> {
    (0..(l as u64).pow(deg as u32))
        .map(|idx| monic(l, deg, idx))
        .find(|m| is_irreducible(l, m))
        .expect("irreducible polynomials exist in every degree")
}

/// Builds F_q. Elements are indexed by reading coordinates as base-ℓ digits.
pub fn finite_field(q: u64) -> Result<Fq> {
    let Some((l, f)) = prime_power(q) else {
        return contract(format!("{q} is not a prime power"));
    };
    if q > u32::MAX as u64 {
        return contract("field size above 2^32");
    }
    let base = PrimeField::new(l as u32)?;
    let m = least_irreducible(l as u32, f as usize);
    Fq::new(base, m)
}

/// Integer code of an F_q element.
pub fn code(fq: &Fq, x: &FqElem) -> u64 {
    fq.index_of(x)
}
