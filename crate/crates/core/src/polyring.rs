//! Graded polynomial rings over prime fields: monomials, monomial orders,
//! polynomial arithmetic, graded pieces, derivatives and a text grammar.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactalg::{fp, FieldSpec};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial rings are only supported over prime fields, not {0}")]
    UnsupportedField(FieldSpec),
    #[error("a ring needs between 1 and {MAX_VARS} variables, got {0}")]
    VariableCount(usize),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("variable weights must be positive")]
    BadWeight,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Monomial(pub [u8; MAX_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        if exps.len() > MAX_VARS {
            return Err(PolyError::VariableCount(exps.len()));
        }
        let mut e = [0; MAX_VARS];
        for (slot, &x) in e.iter_mut().zip(exps) {
            *slot = u8::try_from(x).map_err(|_| PolyError::ExponentOverflow)?;
        }
        Ok(Monomial(e))
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.0[..n].iter().map(|&x| x as u32).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        weights.iter().zip(&self.0).map(|(&w, &e)| w * e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, &b) in e.iter_mut().zip(&other.0) {
            *a = a.checked_add(b).expect("monomial exponent exceeds 255");
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = other.0[i].checked_sub(self.0[i])?;
        }
        Some(Monomial(e))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut e = [0; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i].max(other.0[i]);
        }
        Monomial(e)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = MAX_VARS - self.0.iter().rev().take_while(|&&x| x == 0).count();
        write!(f, "{:?}", &self.0[..n.max(1)])
    }
}

/// Monomial orders. `BlockElim(k)` eliminates the first `k` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    BlockElim(usize),
}

fn grevlex_range(a: &Monomial, b: &Monomial, weights: &[u32], lo: usize, hi: usize) -> Ordering {
    let wa: u32 = (lo..hi).map(|i| weights[i] * a.0[i] as u32).sum();
    let wb: u32 = (lo..hi).map(|i| weights[i] * b.0[i] as u32).sum();
    match wa.cmp(&wb) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (lo..hi).rev() {
        match a.0[i].cmp(&b.0[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial, weights: &[u32]) -> Ordering {
        let n = weights.len();
        match *self {
            MonomialOrder::Grevlex => grevlex_range(a, b, weights, 0, n),
            MonomialOrder::BlockElim(k) => {
                let k = k.min(n);
                grevlex_range(a, b, weights, 0, k).then_with(|| grevlex_range(a, b, weights, k, n))
            }
        }
    }
}

/// Sort key realizing a monomial order: keys compare like the monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey([i32; MAX_VARS + 2]);

impl MonomialOrder {
    pub fn key(&self, m: &Monomial, weights: &[u32]) -> OrderKey {
        let n = weights.len();
        let mut k = [0i32; MAX_VARS + 2];
        let mut fill = |slot: &mut usize, lo: usize, hi: usize| {
            k[*slot] = (lo..hi).map(|i| (weights[i] * m.0[i] as u32) as i32).sum();
            *slot += 1;
            for i in (lo..hi).rev() {
                k[*slot] = -(m.0[i] as i32);
                *slot += 1;
            }
        };
        let mut slot = 0;
        match *self {
            MonomialOrder::Grevlex => fill(&mut slot, 0, n),
            MonomialOrder::BlockElim(b) => {
                let b = b.min(n);
                fill(&mut slot, 0, b);
                fill(&mut slot, b, n);
            }
        }
        OrderKey(k)
    }
}

/// Coefficient field, variable names and (positive) variable weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    p: u32,
    names: Vec<String>,
    weights: Vec<u32>,
}

impl RingSpec {
    pub fn new(field: FieldSpec, names: Vec<String>, weights: Option<Vec<u32>>) -> Result<Arc<Self>, PolyError> {
        let FieldSpec::Prime(p) = field else { return Err(PolyError::UnsupportedField(field)) };
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(PolyError::VariableCount(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateName(n.clone()));
            }
        }
        let weights = weights.unwrap_or_else(|| vec![1; names.len()]);
        if weights.len() != names.len() || weights.contains(&0) {
            return Err(PolyError::BadWeight);
        }
        Ok(Arc::new(RingSpec { p, names, weights }))
    }

    /// Standard-graded ring with variables `prefix0 .. prefix{n-1}`.
    pub fn standard(p: u32, prefix: &str, n: usize) -> Result<Arc<Self>, PolyError> {
        Self::new(FieldSpec::Prime(p), (0..n).map(|i| format!("{prefix}{i}")).collect(), None)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn field(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }
    pub fn is_standard_graded(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.weights)
    }

    pub fn cmp(&self, order: MonomialOrder, a: &Monomial, b: &Monomial) -> Ordering {
        order.cmp(a, b, &self.weights)
    }

    pub fn key(&self, order: MonomialOrder, m: &Monomial) -> OrderKey {
        order.key(m, &self.weights)
    }
}

/// All monomials of weighted degree `d`, in descending grevlex order.
pub fn graded_piece_basis(ring: &RingSpec, d: u32) -> Vec<Monomial> {
    graded_piece_basis_ordered(ring, d, MonomialOrder::Grevlex)
}

pub fn graded_piece_basis_ordered(ring: &RingSpec, d: u32, order: MonomialOrder) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = [0u8; MAX_VARS];
    fn rec(i: usize, left: u32, w: &[u32], cur: &mut [u8; MAX_VARS], out: &mut Vec<Monomial>) {
        if i + 1 == w.len() {
            if left.is_multiple_of(w[i]) {
                cur[i] = (left / w[i]) as u8;
                out.push(Monomial(*cur));
                cur[i] = 0;
            }
            return;
        }
        let mut e = 0u32;
        while e * w[i] <= left {
            cur[i] = e as u8;
            rec(i + 1, left - e * w[i], w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, d, &ring.weights, &mut cur, &mut out);
    out.sort_by(|a, b| ring.cmp(order, b, a));
    out
}

/// Index of each monomial in a graded piece basis.
pub fn monomial_index(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().enumerate().map(|(i, m)| (*m, i)).collect()
}

/// A polynomial with nonzero coefficients in `0..p`, terms sorted in
/// descending grevlex order.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<RingSpec>,
    terms: Vec<(Monomial, u32)>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: i64) -> Self {
        Self::from_terms(ring, vec![(Monomial::ONE, fp::from_i64(c, ring.p))])
    }

    pub fn var(ring: &Arc<RingSpec>, i: usize) -> Self {
        Self::from_terms(ring, vec![(Monomial::var(i), 1)])
    }

    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial, c: u32) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<RingSpec>, terms: Vec<(Monomial, u32)>) -> Self {
        let p = ring.p;
        let mut map: HashMap<Monomial, u32> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            let e = map.entry(m).or_insert(0);
            *e = fp::add(*e, c % p, p);
        }
        let mut terms: Vec<_> = map.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_by(|a, b| ring.cmp(MonomialOrder::Grevlex, &b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Polynomial from a coefficient vector over a graded piece basis.
    pub fn from_dense(ring: &Arc<RingSpec>, basis: &[Monomial], coeffs: &[u32]) -> Self {
        Self::from_terms(ring, basis.iter().zip(coeffs).filter(|(_, &c)| c != 0).map(|(m, &c)| (*m, c)).collect())
    }

    /// Coefficient vector over a graded piece basis; terms outside it are
    /// ignored.
    pub fn to_dense(&self, index: &HashMap<Monomial, usize>, len: usize) -> Vec<u32> {
        let mut v = vec![0; len];
        for (m, c) in &self.terms {
            if let Some(&i) = index.get(m) {
                v[i] = *c;
            }
        }
        v
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.iter().find(|(t, _)| t == m).map_or(0, |(_, c)| *c)
    }

    /// Leading term under the given order.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(Monomial, u32)> {
        self.terms.iter().copied().max_by(|a, b| self.ring.cmp(order, &a.0, &b.0))
    }

    /// Weighted degree of the highest term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| self.ring.degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.degree(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Component of weighted degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().copied().filter(|(m, _)| self.ring.degree(m) == d).collect(),
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    fn merge(&self, other: &Polynomial, c: u32) -> Polynomial {
        let p = self.ring.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                self.ring.cmp(MonomialOrder::Grevlex, &self.terms[i].0, &other.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let v = fp::mul(other.terms[j].1, c, p);
                    if v != 0 {
                        out.push((other.terms[j].0, v));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let v = fp::add(self.terms[i].1, fp::mul(other.terms[j].1, c, p), p);
                    if v != 0 {
                        out.push((self.terms[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, 1))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, self.ring.p - 1))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Polynomial, c: u32) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        Ok(self.merge(other, c % self.ring.p))
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.p - 1)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let p = self.ring.p;
        let c = c % p;
        if c == 0 {
            return Self::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|&(m, a)| (m, fp::mul(a, c, p))).collect() }
    }

    /// Multiplication by a monomial keeps the term order.
    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Polynomial {
        let p = self.ring.p;
        let c = c % p;
        if c == 0 {
            return Self::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|&(t, a)| (t.mul(m), fp::mul(a, c, p))).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let p = self.ring.p;
        let mut map: HashMap<Monomial, u64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = map.entry(a.mul(b)).or_insert(0);
                *e = (*e + *ca as u64 * *cb as u64) % p as u64;
            }
        }
        Ok(Self::from_terms(&self.ring, map.into_iter().map(|(m, c)| (m, c as u32)).collect()))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Self::constant(&self.ring, 1);
        for _ in 0..e {
            r = r.mul(self).expect("same ring");
        }
        r
    }

    pub fn evaluate(&self, point: &[u32]) -> u32 {
        let p = self.ring.p;
        let n = self.ring.nvars();
        assert_eq!(point.len(), n, "point dimension");
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = (0..n).fold(*c, |v, i| fp::mul(v, fp::pow(point[i], m.0[i] as u64, p), p));
            fp::add(acc, v, p)
        })
    }

    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        let p = self.ring.p;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|&(m, c)| {
                let mut e = m;
                e.0[var] -= 1;
                (e, fp::mul(c, m.0[var] as u32 % p, p))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    /// Hasse derivative `D^(alpha)`: `x^a -> prod binom(a_i, alpha_i) x^(a - alpha)`.
    /// Vanishing of all Hasse derivatives of order `< m` at a point expresses
    /// multiplicity `>= m` in every characteristic.
    pub fn hasse_derivative(&self, alpha: &Monomial) -> Polynomial {
        let p = self.ring.p;
        let n = self.ring.nvars();
        let terms = self
            .terms
            .iter()
            .filter_map(|&(m, c)| {
                let q = alpha.quotient_of(&m)?;
                let coef = (0..n).fold(c, |acc, i| fp::mul(acc, binom_mod(m.0[i] as u32, alpha.0[i] as u32, p), p));
                (coef != 0).then_some((q, coef))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    /// Substitutes `images[i]` for variable `i`; the images live in the
    /// target ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(PolyError::VariableCount(images.len()));
        }
        let target = images[0].ring.clone();
        for im in images {
            if im.ring != target {
                return Err(PolyError::RingMismatch);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|g| vec![Polynomial::constant(&target, 1), g.clone()]).collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, *c as i64);
            for i in 0..n {
                let e = m.0[i] as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Re-labels the polynomial into another ring with the same number of
    /// variables (for instance after changing weights).
    pub fn reinterpret(&self, ring: &Arc<RingSpec>) -> Result<Polynomial, PolyError> {
        if ring.nvars() < self.ring.nvars() || ring.p != self.ring.p {
            return Err(PolyError::RingMismatch);
        }
        Ok(Self::from_terms(ring, self.terms.clone()))
    }

    pub fn make_monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(fp::inv(c, self.ring.p)),
        }
    }

    pub fn parse(ring: &Arc<RingSpec>, s: &str) -> Result<Polynomial, PolyError> {
        Parser { ring, src: s.as_bytes(), pos: 0 }.polynomial()
    }
}

pub fn binom_mod(a: u32, b: u32, p: u32) -> u32 {
    if b > a {
        return 0;
    }
    // Lucas' theorem keeps this exact for small p.
    let (mut a, mut b) = (a, b);
    let mut r = 1u32;
    while a > 0 || b > 0 {
        let (ai, bi) = (a % p, b % p);
        if bi > ai {
            return 0;
        }
        let mut num = 1u32;
        let mut den = 1u32;
        for k in 0..bi {
            num = fp::mul(num, ai - k, p);
            den = fp::mul(den, k + 1, p);
        }
        r = fp::mul(r, fp::mul(num, fp::inv(den, p), p), p);
        a /= p;
        b /= p;
    }
    r
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = self.ring.p;
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = fp::to_signed(*c, p);
            let (neg, a) = (s < 0, s.unsigned_abs());
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if a != 1 || m.is_one() {
                factors.push(a.to_string());
            }
            for i in 0..self.ring.nvars() {
                match m.0[i] {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    e => factors.push(format!("{}^{}", self.ring.names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    ring: &'a Arc<RingSpec>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                return None;
            }
            self.pos += 1;
        }
        (start != self.pos).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn polynomial(&mut self) -> Result<Polynomial, PolyError> {
        let p = self.ring.p;
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = 1i64;
            match self.peek() {
                None if !first => break,
                None => return self.err("empty polynomial"),
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(_) if first => {}
                Some(_) => return self.err("expected `+` or `-`"),
            }
            first = false;
            let (m, c) = self.term()?;
            let c = if sign < 0 { fp::neg(c, p) } else { c };
            terms.push((m, c));
        }
        Ok(Polynomial::from_terms(self.ring, terms))
    }

    fn term(&mut self) -> Result<(Monomial, u32), PolyError> {
        let p = self.ring.p;
        let mut coef = 1u32;
        let mut mono = Monomial::ONE;
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let v = self.number().ok_or(PolyError::Parse { pos: self.pos, msg: "bad number".into() })?;
                    coef = fp::mul(coef, (v % p as u64) as u32, p);
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident().unwrap_or_default();
                    let Some(i) = self.ring.var_index(&name) else {
                        return self.err(&format!("unknown variable `{name}`"));
                    };
                    let mut e = 1u64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        e = match self.number() {
                            Some(e) => e,
                            None => return self.err("expected exponent"),
                        };
                    }
                    let total = mono.0[i] as u64 + e;
                    if total > u8::MAX as u64 {
                        return Err(PolyError::ExponentOverflow);
                    }
                    mono.0[i] = total as u8;
                }
                _ => return if any { Ok((mono, coef)) } else { self.err("expected a term") },
            }
            any = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_roundtrip() {
        let r = RingSpec::standard(10007, "x", 3).unwrap();
        let f = Polynomial::parse(&r, "3*x0^2*x1 - x2^3 + 5 - x1").unwrap();
        let g = Polynomial::parse(&r, &f.to_string()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn grevlex_ties_by_last_variable() {
        let r = RingSpec::standard(7, "x", 3).unwrap();
        let a = Monomial::from_exponents(&[1, 0, 1]).unwrap();
        let b = Monomial::from_exponents(&[0, 2, 0]).unwrap();
        assert_eq!(r.cmp(MonomialOrder::Grevlex, &b, &a), Ordering::Greater);
    }
}
