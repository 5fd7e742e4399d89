//! Exact arithmetic over prime fields and the rationals, and dense matrix
//! rank, kernel and solve.
//!
//! Prime-field matrices use a specialised row-major `u32` elimination kernel
//! ([`fp`]) that the rest of the crate calls directly for large systems.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Working prime used throughout unless a caller asks otherwise.
pub const DEFAULT_PRIME: u32 = 10007;
/// Second built-in prime for cross-checking characteristic independence.
pub const CHECK_PRIME: u32 = 32003;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// The coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u32),
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, ExactError> {
        if (2..(1u64 << 31)).contains(&p) && is_prime(p) {
            Ok(FieldSpec::Prime(p as u32))
        } else {
            Err(ExactError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => 0,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
            FieldSpec::Rational => write!(f, "Q"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic in `F_p` on canonical representatives `0..p`.
pub mod fp {
    use super::*;

    #[inline]
    pub fn add(a: u32, b: u32, p: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % p as u64) as u32
    }

    #[inline]
    pub fn sub(a: u32, b: u32, p: u32) -> u32 {
        add(a, p - b % p, p)
    }

    #[inline]
    pub fn mul(a: u32, b: u32, p: u32) -> u32 {
        ((a as u64 * b as u64) % p as u64) as u32
    }

    #[inline]
    pub fn neg(a: u32, p: u32) -> u32 {
        if a == 0 {
            0
        } else {
            p - a
        }
    }

    pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
        let mut r = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(a: u32, p: u32) -> u32 {
        assert!(!a.is_multiple_of(p), "inverse of zero in F_{p}");
        pow(a, p as u64 - 2, p)
    }

    pub fn from_i64(v: i64, p: u32) -> u32 {
        v.rem_euclid(p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(a: u32, p: u32) -> i64 {
        if a > p / 2 {
            a as i64 - p as i64
        } else {
            a as i64
        }
    }

    /// `dst += c * src` entrywise.
    #[inline]
    pub fn axpy(dst: &mut [u32], src: &[u32], c: u32, p: u32) {
        let p64 = p as u64;
        let c64 = c as u64;
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = ((*d as u64 + c64 * s as u64) % p64) as u32;
            }
        }
    }

    /// How the pivot row is chosen among candidate rows for a column.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Pivoting {
        FirstNonzero,
        LastNonzero,
    }

    const PAR_THRESHOLD: usize = 1 << 16;

    /// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
    /// place, drops zero rows, and returns the pivot column of each surviving
    /// row. With `full = false` only forward elimination is done, which is
    /// enough for the rank.
    pub fn echelon(rows: &mut Vec<Vec<u32>>, ncols: usize, p: u32, full: bool, piv: Pivoting) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            if rank == rows.len() {
                break;
            }
            let found = match piv {
                Pivoting::FirstNonzero => (rank..rows.len()).find(|&r| rows[r][col] != 0),
                Pivoting::LastNonzero => (rank..rows.len()).rev().find(|&r| rows[r][col] != 0),
            };
            let Some(r) = found else { continue };
            rows.swap(rank, r);
            let inv_piv = inv(rows[rank][col], p);
            for x in rows[rank][col..].iter_mut() {
                *x = mul(*x, inv_piv, p);
            }
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank][col..];
            let work = (tail.len() + if full { rank } else { 0 }) * (ncols - col);
            let eliminate = |row: &mut Vec<u32>| {
                let c = row[col];
                if c != 0 {
                    axpy(&mut row[col..], prow, p - c, p);
                }
            };
            if work > PAR_THRESHOLD {
                tail.par_iter_mut().for_each(eliminate);
            } else {
                tail.iter_mut().for_each(eliminate);
            }
            if full {
                let (above, rest) = rows.split_at_mut(rank);
                let prow = &rest[0][col..];
                let elim = |row: &mut Vec<u32>| {
                    let c = row[col];
                    if c != 0 {
                        axpy(&mut row[col..], prow, p - c, p);
                    }
                };
                if work > PAR_THRESHOLD {
                    above.par_iter_mut().for_each(elim);
                } else {
                    above.iter_mut().for_each(elim);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        pivots
    }

    /// Rank of a list of rows; the input is consumed.
    pub fn rank(mut rows: Vec<Vec<u32>>, ncols: usize, p: u32) -> usize {
        echelon(&mut rows, ncols, p, false, Pivoting::FirstNonzero).len()
    }

    /// Right kernel basis of the matrix with the given rows.
    pub fn kernel(rows: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
        let mut r = rows.to_vec();
        let pivots = echelon(&mut r, ncols, p, true, Pivoting::FirstNonzero);
        let mut is_pivot = vec![false; ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; ncols];
            v[free] = 1;
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = neg(row[free], p);
            }
            basis.push(v);
        }
        basis
    }

    /// Incrementally maintained row space in reduced echelon form, used to
    /// test membership and extend spans one vector at a time.
    #[derive(Debug, Clone)]
    pub struct RowSpace {
        p: u32,
        ncols: usize,
        rows: Vec<Vec<u32>>,
        pivots: Vec<usize>,
    }

    impl RowSpace {
        pub fn new(ncols: usize, p: u32) -> Self {
            RowSpace { p, ncols, rows: Vec::new(), pivots: Vec::new() }
        }

        pub fn dim(&self) -> usize {
            self.rows.len()
        }

        pub fn rows(&self) -> &[Vec<u32>] {
            &self.rows
        }

        pub fn pivots(&self) -> &[usize] {
            &self.pivots
        }

        /// Reduces `v` against the stored rows.
        pub fn reduce(&self, v: &mut [u32]) {
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                let c = v[pc];
                if c != 0 {
                    axpy(v, row, self.p - c, self.p);
                }
            }
        }

        /// Adds `v` to the span; returns `true` if the dimension grew.
        pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
            debug_assert_eq!(v.len(), self.ncols);
            self.reduce(&mut v);
            let Some(pc) = v.iter().position(|&x| x != 0) else { return false };
            let s = inv(v[pc], self.p);
            for x in v.iter_mut() {
                *x = mul(*x, s, self.p);
            }
            for row in self.rows.iter_mut() {
                let c = row[pc];
                if c != 0 {
                    axpy(row, &v, self.p - c, self.p);
                }
            }
            let pos = self.pivots.partition_point(|&q| q < pc);
            self.pivots.insert(pos, pc);
            self.rows.insert(pos, v);
            true
        }

        pub fn contains(&self, v: &[u32]) -> bool {
            let mut w = v.to_vec();
            self.reduce(&mut w);
            w.iter().all(|&x| x == 0)
        }
    }
}

/// Minimal field interface shared by the generic dense matrix.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn embed(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn spec(&self) -> FieldSpec;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, ExactError> {
        FieldSpec::prime(p as u64).map(|_| PrimeField { p })
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
    fn embed(&self, v: i64) -> u32 {
        fp::from_i64(v, self.p)
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        fp::add(*a, *b, self.p)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        fp::sub(*a, *b, self.p)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        fp::mul(*a, *b, self.p)
    }
    fn neg(&self, a: &u32) -> u32 {
        fp::neg(*a, self.p)
    }
    fn inv(&self, a: &u32) -> u32 {
        fp::inv(*a, self.p)
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn embed(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in Q");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
}

/// Dense row-major matrix over a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix { data: vec![z; rows * cols], field, rows, cols }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, m.field.one());
        }
        m
    }

    pub fn from_i64_rows(field: F, rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(ExactError::DimensionMismatch { expected: cols, got: r.len() });
            }
            for (j, &v) in r.iter().enumerate() {
                let e = m.field.embed(v);
                m.set(i, j, e);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(self.field.zero(), |acc, (a, b)| {
                    let t = self.field.mul(a, b);
                    self.field.add(&acc, &t)
                })
            })
            .collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &F::Elem) {
        for j in 0..self.cols {
            let v = self.field.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    /// Reduced row echelon form with pivoting by first nonzero entry.
    /// Returns the reduced matrix (zero rows dropped) and its pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(r) = (rank..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else { continue };
            m.swap_rows(rank, r);
            let s = f.inv(m.get(rank, col));
            m.scale_row(rank, &s);
            for i in 0..m.rows {
                if i == rank || f.is_zero(m.get(i, col)) {
                    continue;
                }
                let c = m.get(i, col).clone();
                for j in col..m.cols {
                    let t = f.mul(&c, m.get(rank, j));
                    let v = f.sub(m.get(i, j), &t);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = rhs`, or `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, ExactError> {
        if rhs.len() != self.rows {
            return Err(ExactError::DimensionMismatch { expected: self.rows, got: rhs.len() });
        }
        let f = &self.field;
        let mut aug = Matrix::zeros(f.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }
}

impl Matrix<PrimeField> {
    /// Rows as `u32` vectors for the specialised kernel.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rank via the fast kernel with an explicit pivoting rule.
    pub fn rank_with(&self, piv: fp::Pivoting) -> usize {
        let mut rows = self.to_rows();
        fp::echelon(&mut rows, self.cols, self.field.p, false, piv).len()
    }
}

/// A matrix whose field is chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactMatrix {
    Prime(Matrix<PrimeField>),
    Rational(Matrix<RationalField>),
}

/// A field element of either kind, for run-time dispatched results.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Prime(u32),
    Rational(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Prime(v) => *v == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Prime(v) => write!(f, "{v}"),
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl ExactMatrix {
    pub fn from_i64_rows(field: FieldSpec, rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        Ok(match field {
            FieldSpec::Prime(p) => ExactMatrix::Prime(Matrix::from_i64_rows(PrimeField::new(p)?, rows)?),
            FieldSpec::Rational => ExactMatrix::Rational(Matrix::from_i64_rows(RationalField, rows)?),
        })
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            ExactMatrix::Prime(m) => m.field().spec(),
            ExactMatrix::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            ExactMatrix::Prime(m) => m.rows(),
            ExactMatrix::Rational(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            ExactMatrix::Prime(m) => m.cols(),
            ExactMatrix::Rational(m) => m.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            ExactMatrix::Prime(m) => m.rank_with(fp::Pivoting::FirstNonzero),
            ExactMatrix::Rational(m) => m.rank(),
        }
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        match self {
            ExactMatrix::Prime(m) => {
                fp::kernel(&m.to_rows(), m.cols(), m.field().p).into_iter().map(|v| v.into_iter().map(Scalar::Prime).collect()).collect()
            }
            ExactMatrix::Rational(m) => {
                m.kernel_basis().into_iter().map(|v| v.into_iter().map(Scalar::Rational).collect()).collect()
            }
        }
    }

    /// Solves `self * x = rhs` with an integer right-hand side.
    pub fn solve(&self, rhs: &[i64]) -> Result<Option<Vec<Scalar>>, ExactError> {
        match self {
            ExactMatrix::Prime(m) => {
                let b: Vec<u32> = rhs.iter().map(|&v| m.field().embed(v)).collect();
                Ok(m.solve(&b)?.map(|x| x.into_iter().map(Scalar::Prime).collect()))
            }
            ExactMatrix::Rational(m) => {
                let b: Vec<BigRational> = rhs.iter().map(|&v| RationalField.embed(v)).collect();
                Ok(m.solve(&b)?.map(|x| x.into_iter().map(Scalar::Rational).collect()))
            }
        }
    }

    /// `self * v` for a kernel-style vector of run-time scalars.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, ExactError> {
        match self {
            ExactMatrix::Prime(m) => {
                let x: Vec<u32> = v.iter().map(|s| scalar_to_fp(s, m.field().p)).collect();
                Ok(m.mul_vec(&x)?.into_iter().map(Scalar::Prime).collect())
            }
            ExactMatrix::Rational(m) => {
                let x: Vec<BigRational> = v
                    .iter()
                    .map(|s| match s {
                        Scalar::Rational(q) => q.clone(),
                        Scalar::Prime(a) => RationalField.embed(*a as i64),
                    })
                    .collect();
                Ok(m.mul_vec(&x)?.into_iter().map(Scalar::Rational).collect())
            }
        }
    }
}

fn scalar_to_fp(s: &Scalar, p: u32) -> u32 {
    match s {
        Scalar::Prime(a) => a % p,
        Scalar::Rational(q) => {
            let m = BigInt::from(p);
            let n = q.numer().mod_floor(&m).to_u32().expect("residue fits in u32");
            let d = q.denom().mod_floor(&m).to_u32().expect("residue fits in u32");
            fp::mul(n, fp::inv(d, p), p)
        }
    }
}

/// Integer kernel basis of an integer matrix, computed over Q and scaled to
/// primitive integer vectors.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut v = vec![0; ncols];
                v[i] = 1;
                v
            })
            .collect();
    }
    let m = Matrix::from_i64_rows(RationalField, rows).expect("rectangular rows");
    m.kernel_basis()
        .into_iter()
        .map(|v| {
            let l = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            ints.iter().map(|x| (x / &g).to_i64().expect("small grading weight")).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let p = DEFAULT_PRIME;
        for a in 1..200u32 {
            assert_eq!(fp::mul(a, fp::inv(a, p), p), 1);
        }
    }

    #[test]
    fn integer_kernel_of_grading_differences() {
        let k = integer_kernel(&[vec![1, -2, 1]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] - 2 * v[1] + v[2], 0);
        }
    }
}
