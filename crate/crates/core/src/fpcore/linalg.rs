//! Scalars, vectors and dense matrices over F_p; exact elimination over any `Field`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::field::{is_prime, Field, PrimeField};
use crate::error::{contract, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpScalar {
    residue: u32,
    p: u32,
}

impl FpScalar {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return contract(format!("{p} is not prime"));
        }
        Ok(FpScalar { residue: value.rem_euclid(p as i64) as u32, p })
    }

    pub(crate) fn raw(residue: u32, p: u32) -> Self {
        FpScalar { residue: residue % p, p }
    }

    pub fn value(self) -> u32 {
        self.residue
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    pub fn inv(self) -> Option<Self> {
        PrimeField::new(self.p).ok()?.inv(&self.residue).map(|r| FpScalar { residue: r, p: self.p })
    }

    fn same(self, o: Self) -> u32 {
        assert_eq!(self.p, o.p, "mixed moduli");
        self.p
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, o: Self) -> Self {
        let p = self.same(o);
        FpScalar { residue: (self.residue + o.residue) % p, p }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, o: Self) -> Self {
        let p = self.same(o);
        FpScalar { residue: (self.residue + p - o.residue) % p, p }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, o: Self) -> Self {
        let p = self.same(o);
        FpScalar { residue: ((self.residue as u64 * o.residue as u64) % p as u64) as u32, p }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> Self {
        FpScalar { residue: (self.p - self.residue) % self.p, p: self.p }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpVector {
    pub p: u32,
    pub data: Vec<u32>,
}

impl FpVector {
    pub fn zeros(p: u32, n: usize) -> Self {
        FpVector { p, data: vec![0; n] }
    }

    pub fn from_slice(p: u32, v: &[i64]) -> Self {
        FpVector { p, data: v.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect() }
    }

    pub fn basis(p: u32, n: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, n);
        v.data[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn get(&self, i: usize) -> FpScalar {
        FpScalar::raw(self.data[i], self.p)
    }

    pub fn add(&self, o: &FpVector) -> FpVector {
        let p = self.p;
        FpVector { p, data: self.data.iter().zip(&o.data).map(|(a, b)| (a + b) % p).collect() }
    }

    pub fn sub(&self, o: &FpVector) -> FpVector {
        let p = self.p;
        FpVector { p, data: self.data.iter().zip(&o.data).map(|(a, b)| (a + p - b) % p).collect() }
    }

    pub fn neg(&self) -> FpVector {
        let p = self.p;
        FpVector { p, data: self.data.iter().map(|a| (p - a) % p).collect() }
    }

    pub fn scale(&self, k: u32) -> FpVector {
        let p = self.p as u64;
        FpVector { p: self.p, data: self.data.iter().map(|&a| (a as u64 * k as u64 % p) as u32).collect() }
    }

    pub fn dot(&self, o: &FpVector) -> u32 {
        let p = self.p as u64;
        (self.data.iter().zip(&o.data).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
    }
}

/// u ⊗ w in the basis e_i ⊗ e_j, lexicographic in (i, j).
pub fn tensor(u: &FpVector, w: &FpVector) -> FpVector {
    let p = u.p as u64;
    let mut data = Vec::with_capacity(u.len() * w.len());
    for &a in &u.data {
        for &b in &w.data {
            data.push((a as u64 * b as u64 % p) as u32);
        }
    }
    FpVector { p: u.p, data }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return contract("ragged matrix rows");
        }
        let data = rows.iter().flatten().map(|&x| x.rem_euclid(p as i64) as u32).collect();
        Ok(FpMatrix { p, rows: r, cols: c, data })
    }

    pub fn from_columns(p: u32, cols: &[FpVector]) -> Self {
        let r = cols.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(p, r, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..r {
                m.data[i * cols.len() + j] = v.data[i];
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> FpVector {
        FpVector { p: self.p, data: self.data[i * self.cols..(i + 1) * self.cols].to_vec() }
    }

    pub fn column(&self, j: usize) -> FpVector {
        FpVector { p: self.p, data: (0..self.rows).map(|i| self.get(i, j)).collect() }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, o: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != o.rows {
            return contract(format!("matrix product {}x{} by {}x{}", self.rows, self.cols, o.rows, o.cols));
        }
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * o.get(k, j) as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector> {
        if self.cols != v.len() {
            return contract("matrix-vector dimension mismatch");
        }
        let p = self.p as u64;
        let data = (0..self.rows)
            .map(|i| {
                let s: u64 = (0..self.cols).map(|j| self.get(i, j) as u64 * v.data[j] as u64).sum();
                (s % p) as u32
            })
            .collect();
        Ok(FpVector { p: self.p, data })
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &FpVector) -> Result<FpVector> {
        self.transpose().mul_vec(v)
    }

    pub fn add(&self, o: &FpMatrix) -> FpMatrix {
        let p = self.p;
        FpMatrix { data: self.data.iter().zip(&o.data).map(|(a, b)| (a + b) % p).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &FpMatrix) -> FpMatrix {
        let p = self.p;
        FpMatrix { data: self.data.iter().zip(&o.data).map(|(a, b)| (a + p - b) % p).collect(), ..self.clone() }
    }

    pub fn scale(&self, k: u32) -> FpMatrix {
        let p = self.p as u64;
        FpMatrix { data: self.data.iter().map(|&a| (a as u64 * k as u64 % p) as u32).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Kronecker product, matching `tensor` on vectors.
    pub fn kron(&self, o: &FpMatrix) -> FpMatrix {
        let p = self.p as u64;
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut out = Self::zeros(self.p, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j) as u64;
                if a == 0 {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.data[(i * o.rows + k) * c + j * o.cols + l] = (a * o.get(k, l) as u64 % p) as u32;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("square");
            }
            base = base.mul(&base).expect("square");
            e >>= 1;
        }
        acc
    }

    fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        let f = PrimeField::new(self.p).expect("prime modulus");
        let mut e = RowEchelon::new(f, self.cols);
        for r in self.to_rows() {
            e.insert(r);
        }
        e.rank()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let (x, ker) = solve_linear(self, &FpVector::basis(self.p, n, j)).ok()??;
            if !ker.is_empty() {
                return None;
            }
            cols.push(x);
        }
        Some(FpMatrix::from_columns(self.p, &cols))
    }

    /// Basis of the null space {x : A x = 0}.
    pub fn kernel(&self) -> Vec<FpVector> {
        match solve_linear(self, &FpVector::zeros(self.p, self.rows)) {
            Ok(Some((_, k))) => k,
            _ => unreachable!("homogeneous systems are solvable"),
        }
    }

    /// Basis of the column space.
    pub fn image(&self) -> Vec<FpVector> {
        let f = PrimeField::new(self.p).expect("prime modulus");
        let mut e = RowEchelon::new(f, self.rows);
        for j in 0..self.cols {
            e.insert(self.column(j).data);
        }
        e.rows().into_iter().map(|data| FpVector { p: self.p, data }).collect()
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Incrementally built reduced row echelon form; rows are inserted one at a time.
#[derive(Clone, Debug)]
pub struct RowEchelon<F: Field> {
    field: F,
    width: usize,
    // pivot column → fully reduced row with a 1 in that column
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(field: F, width: usize) -> Self {
        RowEchelon { field, width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> Vec<Vec<F::Elem>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    /// Reduces `row` against the current pivots without inserting it.
    pub fn reduce(&self, mut row: Vec<F::Elem>) -> Vec<F::Elem> {
        let f = &self.field;
        for (c, pr) in &self.rows {
            let k = row[*c].clone();
            if f.is_zero(&k) {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pr) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        row
    }

    /// Inserts a row; returns true iff the rank grew.
    pub fn insert(&mut self, row: Vec<F::Elem>) -> bool {
        assert_eq!(row.len(), self.width);
        let f = self.field.clone();
        let mut row = self.reduce(row);
        let Some(c) = row.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&row[c]).expect("field pivot");
        for x in row.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for (_, pr) in self.rows.iter_mut() {
            let k = pr[c].clone();
            if f.is_zero(&k) {
                continue;
            }
            for (x, y) in pr.iter_mut().zip(&row) {
                if !f.is_zero(y) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        let pos = self.rows.partition_point(|(pc, _)| *pc < c);
        self.rows.insert(pos, (c, row));
        true
    }

    pub fn contains(&self, row: &[F::Elem]) -> bool {
        let f = &self.field;
        self.reduce(row.to_vec()).iter().all(|x| f.is_zero(x))
    }
}

/// Solves A x = b for an r×c system given as rows. Returns a particular solution and a
/// kernel basis, or None when the system is inconsistent.
pub fn solve_system<F: Field>(
    field: &F,
    a: &[Vec<F::Elem>],
    b: &[F::Elem],
    cols: usize,
) -> Result<Option<(Vec<F::Elem>, Vec<Vec<F::Elem>>)>> {
    if a.len() != b.len() {
        return contract("right-hand side length differs from row count");
    }
    if a.iter().any(|r| r.len() != cols) {
        return contract("row length differs from column count");
    }
    let mut e = RowEchelon::new(field.clone(), cols + 1);
    for (r, bi) in a.iter().zip(b) {
        let mut row = r.clone();
        row.push(bi.clone());
        e.insert(row);
    }
    let pivots = e.pivots();
    if pivots.contains(&cols) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); cols];
    for (c, row) in e.rows.iter() {
        x[*c] = row[cols].clone();
    }
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (c, row) in e.rows.iter() {
            v[*c] = field.neg(&row[free]);
        }
        kernel.push(v);
    }
    Ok(Some((x, kernel)))
}

pub fn solve_linear(a: &FpMatrix, b: &FpVector) -> Result<Option<(FpVector, Vec<FpVector>)>> {
    if a.rows != b.len() {
        return contract(format!("{} rows but right-hand side of length {}", a.rows, b.len()));
    }
    let f = PrimeField::new(a.p)?;
    let rows = a.to_rows();
    let out = solve_system(&f, &rows, &b.data, a.cols)?;
    Ok(out.map(|(x, k)| {
        (FpVector { p: a.p, data: x }, k.into_iter().map(|data| FpVector { p: a.p, data }).collect())
    }))
}
