//! Rational normal scrolls: the 2 x f matrix and its minors, line-bundle
//! section counts, Eagon–Northcott and C^b term ranks, scroll types from
//! section partitions, and genus-9 Betti predictions.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::betti::{binomial, BettiTable};
use crate::groebner::Ideal;
use crate::polyring::{Polynomial, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScrollError {
    #[error("scroll type must be nonincreasing with f >= 2, got {0:?}")]
    BadType(Vec<u32>),
    #[error("scroll needs {expected} variables, ring has {got}")]
    VariableCount { expected: usize, got: usize },
    #[error("section counts must decrease strictly to 0, got {0:?}")]
    BadPartition(Vec<u32>),
    #[error("the section formula needs b >= -1, got {0}")]
    BadTwist(i64),
    #[error("no genus-9 prediction for beta45 = {0}")]
    Unsupported(u64),
}

/// Scroll type `S(e_1, ..., e_d)` with `e_1 >= ... >= e_d >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScrollType {
    e: Vec<u32>,
}

impl ScrollType {
    pub fn new(e: Vec<u32>) -> Result<Self, ScrollError> {
        let f: u32 = e.iter().sum();
        if e.is_empty() || f < 2 || e.windows(2).any(|w| w[0] < w[1]) {
            return Err(ScrollError::BadType(e));
        }
        Ok(ScrollType { e })
    }

    pub fn parse(s: &str) -> Result<Self, ScrollError> {
        let e: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse()).collect();
        Self::new(e.map_err(|_| ScrollError::BadType(Vec::new()))?)
    }

    pub fn e(&self) -> &[u32] {
        &self.e
    }
    /// Degree `f = sum e_i`, the number of matrix columns.
    pub fn f(&self) -> usize {
        self.e.iter().sum::<u32>() as usize
    }
    pub fn dim(&self) -> usize {
        self.e.len()
    }
    /// The scroll lives in `P^{f + d - 1}`.
    pub fn ambient(&self) -> usize {
        self.f() + self.dim() - 1
    }
}

impl fmt::Display for ScrollType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.e.iter().map(|x| x.to_string()).collect();
        write!(f, "S({})", parts.join(","))
    }
}

/// Values `h^0(K - iD)` for `i = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionPartition {
    h0: Vec<u32>,
}

impl SectionPartition {
    pub fn new(h0: Vec<u32>) -> Result<Self, ScrollError> {
        let first_zero = h0.iter().position(|&x| x == 0);
        let ok = match first_zero {
            None => false,
            Some(z) => z > 0 && h0[..z].windows(2).all(|w| w[0] > w[1]) && h0[z..].iter().all(|&x| x == 0),
        };
        if !ok {
            return Err(ScrollError::BadPartition(h0));
        }
        Ok(SectionPartition { h0 })
    }

    pub fn h0(&self) -> &[u32] {
        &self.h0
    }

    /// Differences `d_i = h0_i - h0_{i+1}` up to the last nonzero value.
    pub fn differences(&self) -> Vec<u32> {
        self.h0.windows(2).filter(|w| w[0] > 0).map(|w| w[0] - w[1]).collect()
    }
}

/// The 2 x f matrix whose block for `e_i` has top row `x_{i,0..e_i-1}` and
/// bottom row `x_{i,1..e_i}`; variables are consumed block by block and a
/// block with `e_i = 0` uses one variable but contributes no columns.
pub fn scroll_matrix(t: &ScrollType, ring: &Arc<RingSpec>) -> Result<[Vec<Polynomial>; 2], ScrollError> {
    let need = t.ambient() + 1;
    if ring.nvars() != need {
        return Err(ScrollError::VariableCount { expected: need, got: ring.nvars() });
    }
    let (mut top, mut bottom) = (Vec::new(), Vec::new());
    let mut v = 0;
    for &e in &t.e {
        for j in 0..e as usize {
            top.push(Polynomial::var(ring, v + j));
            bottom.push(Polynomial::var(ring, v + j + 1));
        }
        v += e as usize + 1;
    }
    Ok([top, bottom])
}

/// All 2 x 2 minors of the scroll matrix.
pub fn scroll_ideal(t: &ScrollType, ring: &Arc<RingSpec>) -> Result<Ideal, ScrollError> {
    let [top, bottom] = scroll_matrix(t, ring)?;
    let f = top.len();
    let mut gens = Vec::new();
    for a in 0..f {
        for b in a + 1..f {
            let m = top[a].mul(&bottom[b]).and_then(|x| x.sub(&top[b].mul(&bottom[a])?)).expect("same ring");
            gens.push(m);
        }
    }
    Ok(Ideal::new(ring, gens).expect("minors are homogeneous"))
}

/// `beta_{i,i+1} = i binom(f, i+1)` for `1 <= i <= f-1`.
pub fn eagon_northcott_betti(f: usize) -> BettiTable {
    let mut t = BettiTable::new(f + 1);
    t.set(0, 0, 1);
    for i in 1..f {
        t.set(i, i as u32 + 1, (i as i64 * binomial(f as i64, i as i64 + 1)) as u64);
    }
    t
}

/// `h^0(O(aH + bR)) = f binom(a+d-1, d) + (b+1) binom(a+d-1, d-1)`.
pub fn h0_bundle(t: &ScrollType, a: i64, b: i64) -> Result<u64, ScrollError> {
    if b < -1 {
        return Err(ScrollError::BadTwist(b));
    }
    let (f, d) = (t.f() as i64, t.dim() as i64);
    Ok((f * binomial(a + d - 1, d) + (b + 1) * binomial(a + d - 1, d - 1)) as u64)
}

/// Rank of the `j`-th term of `C^b`: `binom(f,j)(b-j+1)` for `j <= b`,
/// `binom(f,j+1)(j-b)` for `j >= b+1`.
pub fn cb_term_rank(b: i64, j: u32, f: usize) -> u64 {
    let (j, f) = (j as i64, f as i64);
    let r = if j <= b { binomial(f, j) * (b - j + 1) } else { binomial(f, j + 1) * (j - b) };
    r as u64
}

/// Twist of the `j`-th term of `C^b`.
pub fn cb_term_twist(b: i64, j: u32) -> u32 {
    if (j as i64) <= b {
        j
    } else {
        j + 1
    }
}

/// Scroll type from the dual partition: `e_i = #{j : d_j >= i} - 1`.
pub fn type_from_partition(p: &SectionPartition) -> Result<ScrollType, ScrollError> {
    let d = p.differences();
    let dim = d.first().copied().unwrap_or(0);
    let e = (1..=dim).map(|i| d.iter().filter(|&&x| x >= i).count() as u32 - 1).collect();
    ScrollType::new(e)
}

/// Genus-9 canonical table `(1; 21, 64, 70, b; b, 70, 64, 21; 1)`.
pub fn predict_betti(psi_beta45: u64) -> Result<BettiTable, ScrollError> {
    if ![0, 4, 6, 8, 10, 12, 24].contains(&psi_beta45) {
        return Err(ScrollError::Unsupported(psi_beta45));
    }
    let b = psi_beta45;
    Ok(BettiTable::from_rows(9, &[(0, 0, &[1]), (1, 1, &[21, 64, 70, b]), (2, 3, &[b, 70, 64, 21]), (3, 7, &[1])]))
}
