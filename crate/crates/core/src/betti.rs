//! Graded Betti tables: Koszul homology of `S/I` (primary path), explicit
//! graded free resolutions with minimalization (small inputs), and the
//! invariants read off a table.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactalg::{fp, integer_kernel};
use crate::groebner::{buchberger, buchberger_truncated, GroebnerBasis, GroebnerError, Ideal};
use crate::polyring::{graded_piece_basis, monomial_index, Monomial, MonomialOrder, Polynomial, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BettiError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("Betti computations need a standard graded ring")]
    NotStandardGraded,
    #[error("the ideal contains a unit")]
    UnitIdeal,
    #[error("resource ceiling exceeded: {0}")]
    ResourceCeiling(String),
    #[error("no regular sequence of {forms} linear forms found: quotient length {got} instead of {expected}")]
    NoRegularSequence { forms: usize, expected: usize, got: usize },
    #[error("malformed table: {0}")]
    Malformed(String),
}

/// Graded Betti numbers `beta_{i,j}` of a quotient `S/I`. Equality compares
/// the entries only.
#[derive(Debug, Clone, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, u32), u64>,
    num_vars: usize,
    codim_hint: Option<usize>,
}

impl BettiTable {
    pub fn new(num_vars: usize) -> Self {
        BettiTable { entries: BTreeMap::new(), num_vars, codim_hint: None }
    }

    /// Builds a table from `(i, j, beta)` triples; zero entries are ignored.
    pub fn from_triples(num_vars: usize, triples: &[(usize, u32, u64)]) -> Self {
        let mut t = Self::new(num_vars);
        for &(i, j, b) in triples {
            t.set(i, j, b);
        }
        t
    }

    /// Builds a table from rows indexed by `j - i`, each starting at
    /// homological index `start`.
    pub fn from_rows(num_vars: usize, rows: &[(u32, usize, &[u64])]) -> Self {
        let mut t = Self::new(num_vars);
        for &(r, start, vals) in rows {
            for (k, &b) in vals.iter().enumerate() {
                let i = start + k;
                t.set(i, i as u32 + r, b);
            }
        }
        t
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn codim_hint(&self) -> Option<usize> {
        self.codim_hint
    }

    pub fn with_codim_hint(mut self, c: usize) -> Self {
        self.codim_hint = Some(c);
        self
    }

    pub fn get(&self, i: usize, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: u32, b: u64) {
        if b == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), b);
        }
    }

    /// Nonzero entries sorted by `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u32, u64)> + '_ {
        self.entries.iter().map(|(&(i, j), &b)| (i, j, b))
    }

    /// Entries with `j - i = r`, by homological index.
    pub fn row(&self, r: u32) -> BTreeMap<usize, u64> {
        self.entries().filter(|&(i, j, _)| j >= i as u32 && j - i as u32 == r).map(|(i, _, b)| (i, b)).collect()
    }

    /// Total rank of each free module.
    pub fn totals(&self) -> BTreeMap<usize, u64> {
        let mut m = BTreeMap::new();
        for (i, _, b) in self.entries() {
            *m.entry(i).or_insert(0) += b;
        }
        m
    }

    /// Sum of absolute entry differences.
    pub fn l1_distance(&self, other: &BettiTable) -> u64 {
        let keys: HashSet<(usize, u32)> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.into_iter().map(|(i, j)| self.get(i, j).abs_diff(other.get(i, j))).sum()
    }

    /// Machine format: one `i j beta` line per nonzero entry.
    pub fn to_triples(&self) -> String {
        self.entries().map(|(i, j, b)| format!("{i} {j} {b}\n")).collect()
    }

    pub fn parse_triples(num_vars: usize, s: &str) -> Result<Self, BettiError> {
        let mut t = Self::new(num_vars);
        for (ln, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let bad = || BettiError::Malformed(format!("line {}: `{line}`", ln + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            let i = f[0].parse().map_err(|_| bad())?;
            let j = f[1].parse().map_err(|_| bad())?;
            let b = f[2].parse().map_err(|_| bad())?;
            t.set(i, j, b);
        }
        Ok(t)
    }
}

impl PartialEq for BettiTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for BettiTable {}

impl fmt::Display for BettiTable {
    /// Grid with rows indexed by `j - i` and columns by `i`; `-` marks zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max_i = self.entries().map(|e| e.0).max().unwrap_or(0);
        let max_r = self.entries().map(|(i, j, _)| j.saturating_sub(i as u32)).max().unwrap_or(0);
        let w = self.entries().map(|e| e.2.to_string().len()).max().unwrap_or(1).max(max_i.to_string().len());
        write!(f, "{:>4} ", "")?;
        for i in 0..=max_i {
            write!(f, " {i:>w$}")?;
        }
        writeln!(f)?;
        for r in 0..=max_r {
            write!(f, "{r:>4}:")?;
            for i in 0..=max_i {
                let b = self.get(i, i as u32 + r);
                if b == 0 {
                    write!(f, " {:>w$}", "-")?;
                } else {
                    write!(f, " {b:>w$}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Numerical invariants of a Betti table of `S/I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invariants {
    pub regularity: u32,
    pub projective_dimension: usize,
    pub depth: usize,
    pub is_gorenstein_symmetric: bool,
}

pub fn invariants(t: &BettiTable) -> Invariants {
    let regularity = t.entries().map(|(i, j, _)| j.saturating_sub(i as u32)).max().unwrap_or(0);
    let pd = t.entries().map(|e| e.0).max().unwrap_or(0);
    let top = t.entries().map(|e| e.1).max().unwrap_or(0);
    let symmetric = t.entries().all(|(i, j, b)| i <= pd && j <= top && t.get(pd - i, top - j) == b);
    Invariants {
        regularity,
        projective_dimension: pd,
        depth: t.num_vars.saturating_sub(pd),
        is_gorenstein_symmetric: symmetric,
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, t| acc * (n - t) / (t + 1))
}

/// `H(d) = sum_i (-1)^i sum_j beta_{ij} binom(n + d - j, n)`.
pub fn hilbert_from_betti(t: &BettiTable, n: usize, d: u32) -> i64 {
    t.entries()
        .map(|(i, j, b)| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * b as i64 * binomial(n as i64 + d as i64 - j as i64, n as i64)
        })
        .sum()
}

/// Options for the Koszul computation.
#[derive(Debug, Clone, Copy)]
pub struct KoszulOptions {
    /// Largest row `j - i` computed.
    pub max_row: u32,
    /// Split strands along the finest grading of the ideal.
    pub multigraded: bool,
}

impl Default for KoszulOptions {
    fn default() -> Self {
        KoszulOptions { max_row: 4, multigraded: true }
    }
}

pub fn betti_via_koszul(ideal: &Ideal) -> Result<BettiTable, BettiError> {
    betti_via_koszul_with(ideal, KoszulOptions::default())
}

/// Weight vectors for which every basis element is homogeneous.
pub fn multigrading(gb: &GroebnerBasis) -> Vec<Vec<i64>> {
    let n = gb.ring().nvars();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut seen = HashSet::new();
    let mut probe = fp::RowSpace::new(n, fp_check_prime());
    for g in gb.elements() {
        let Some(&(lead, _)) = g.terms().first() else { continue };
        for &(m, _) in &g.terms()[1..] {
            let diff: Vec<i64> = (0..n).map(|i| m.exponent(i) as i64 - lead.exponent(i) as i64).collect();
            if !seen.insert(diff.clone()) {
                continue;
            }
            let v: Vec<u32> = diff.iter().map(|&x| fp::from_i64(x, fp_check_prime())).collect();
            if probe.insert(v) {
                rows.push(diff);
            }
        }
    }
    let w = integer_kernel(&rows, n);
    let all_ok = seen.iter().all(|d| w.iter().all(|wv| wv.iter().zip(d).map(|(a, b)| a * b).sum::<i64>() == 0));
    if all_ok {
        w
    } else {
        let all: Vec<Vec<i64>> = seen.into_iter().collect();
        integer_kernel(&all, n)
    }
}

fn fp_check_prime() -> u32 {
    crate::exactalg::CHECK_PRIME
}

/// Koszul homology Betti numbers `beta_{i,i+r}` for `r <= max_row`:
/// `beta_{i,i+r} = dim(L^i) dim(A_r) - rank d_{i,r} - rank d_{i+1,r-1}` with
/// `d_{i,r}: L^i V (x) A_r -> L^{i-1} V (x) A_{r+1}` and `A = S/I`.
pub fn betti_via_koszul_with(ideal: &Ideal, opts: KoszulOptions) -> Result<BettiTable, BettiError> {
    let ring = ideal.ring().clone();
    if !ring.is_standard_graded() {
        return Err(BettiError::NotStandardGraded);
    }
    if ideal.generators().iter().any(|g| g.degree() == Some(0)) {
        return Err(BettiError::UnitIdeal);
    }
    let n = ring.nvars();
    let top = opts.max_row + 1;
    let gb = buchberger_truncated(ideal, MonomialOrder::Grevlex, Some(top));
    let std: Vec<Vec<Monomial>> = (0..=top).map(|r| gb.standard_monomials(r)).collect::<Result<_, _>>()?;
    let idx: Vec<HashMap<Monomial, usize>> = std.iter().map(|s| monomial_index(s)).collect();

    // nf[r][m][v] = NF(x_v * m) over std[r+1].
    let nf: Vec<Vec<Vec<Vec<(usize, u32)>>>> = (0..top as usize)
        .map(|r| {
            std[r]
                .par_iter()
                .map(|m| {
                    (0..n)
                        .map(|v| {
                            let prod = m.mul(&Monomial::var(v));
                            if gb.is_standard(&prod) {
                                vec![(idx[r + 1][&prod], 1)]
                            } else {
                                let f = gb.normal_form(&Polynomial::monomial(&ring, prod, 1)).expect("within truncation");
                                f.terms().iter().map(|(u, c)| (idx[r + 1][u], *c)).collect()
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let grading = if opts.multigraded { multigrading(&gb) } else { vec![vec![1; n]] };
    let mdeg = |m: &Monomial, mask: u32| -> Vec<i64> {
        grading
            .iter()
            .map(|w| (0..n).map(|v| w[v] * (m.exponent(v) as i64 + ((mask >> v) & 1) as i64)).sum())
            .collect()
    };

    let masks: Vec<Vec<u32>> = {
        let mut by = vec![Vec::new(); n + 1];
        for mask in 0u32..(1u32 << n) {
            by[mask.count_ones() as usize].push(mask);
        }
        by
    };
    let mut mask_rank = vec![0usize; 1 << n];
    for list in &masks {
        for (k, &m) in list.iter().enumerate() {
            mask_rank[m as usize] = k;
        }
    }

    // Tasks: rank of d_{i,r} for 1 <= i <= n, 0 <= r <= max_row.
    let mut tasks: Vec<(usize, u32, Vec<i64>, Vec<(u32, usize)>)> = Vec::new();
    for i in 1..=n {
        for r in 0..=opts.max_row {
            if std[r as usize].is_empty() || std[r as usize + 1].is_empty() {
                continue;
            }
            let mut blocks: BTreeMap<Vec<i64>, Vec<(u32, usize)>> = BTreeMap::new();
            for &mask in &masks[i] {
                for (mi, m) in std[r as usize].iter().enumerate() {
                    blocks.entry(mdeg(m, mask)).or_default().push((mask, mi));
                }
            }
            for (key, src) in blocks {
                tasks.push((i, r, key, src));
            }
        }
    }
    let ranks: Vec<(usize, u32, usize)> = tasks
        .par_iter()
        .map(|(i, r, _, src)| {
            let r = *r as usize;
            let width = std[r + 1].len();
            let mut cols: HashMap<usize, usize> = HashMap::new();
            let mut sparse_rows: Vec<Vec<(usize, u32)>> = Vec::with_capacity(src.len());
            for &(mask, mi) in src {
                let mut row = Vec::new();
                let mut k = 0;
                for v in 0..n {
                    if (mask >> v) & 1 == 0 {
                        continue;
                    }
                    let sub = mask & !(1 << v);
                    let base = mask_rank[sub as usize] * width;
                    for &(u, c) in &nf[r][mi][v] {
                        let next = cols.len();
                        let col = *cols.entry(base + u).or_insert(next);
                        row.push((col, if k % 2 == 0 { c } else { fp::neg(c, ring.p()) }));
                    }
                    k += 1;
                }
                sparse_rows.push(row);
            }
            let ncols = cols.len();
            let mut dense: Vec<Vec<u32>> = sparse_rows
                .into_iter()
                .map(|row| {
                    let mut v = vec![0u32; ncols];
                    for (c, x) in row {
                        v[c] = fp::add(v[c], x, ring.p());
                    }
                    v
                })
                .collect();
            let rank = if ncols == 0 { 0 } else { fp::echelon(&mut dense, ncols, ring.p(), false, fp::Pivoting::FirstNonzero).len() };
            (*i, r as u32, rank)
        })
        .collect();
    let mut rank: HashMap<(usize, u32), usize> = HashMap::new();
    for (i, r, k) in ranks {
        *rank.entry((i, r)).or_insert(0) += k;
    }
    let rk = |i: usize, r: i64| -> usize {
        if r < 0 {
            0
        } else {
            rank.get(&(i, r as u32)).copied().unwrap_or(0)
        }
    };
    let mut table = BettiTable::new(n);
    for i in 0..=n {
        for r in 0..=opts.max_row {
            let middle = binomial(n as i64, i as i64) as usize * std[r as usize].len();
            let b = middle - rk(i, r as i64) - rk(i + 1, r as i64 - 1);
            table.set(i, i as u32 + r, b as u64);
        }
    }
    Ok(table)
}

/// Cuts `S/I` down by `forms` random linear forms: the last `forms`
/// variables are replaced by random combinations of the others. The Betti
/// table is unchanged when the forms are a regular sequence, which holds
/// exactly when the resulting Artinian quotient has length `degree`.
pub fn artinian_reduction(ideal: &Ideal, forms: usize, degree: usize, seed: u64) -> Result<Ideal, BettiError> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let p = ring.p();
    let m = n - forms;
    let small = RingSpec::new(ring.field(), ring.names()[..m].to_vec(), None).map_err(GroebnerError::from)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut got = 0;
    let attempts = if p < 100 { 64 } else { 8 };
    for _attempt in 0..attempts {
        let images: Vec<Polynomial> = (0..n)
            .map(|v| {
                if v < m {
                    Polynomial::var(&small, v)
                } else {
                    let terms = (0..m).map(|u| (Monomial::var(u), rng.gen_range(0..p))).collect();
                    Polynomial::from_terms(&small, terms)
                }
            })
            .collect();
        let gens = ideal
            .generators()
            .iter()
            .map(|g| g.substitute(&images))
            .collect::<Result<Vec<_>, _>>()
            .map_err(GroebnerError::from)?;
        let reduced = Ideal::new(&small, gens)?;
        let gb = buchberger(&reduced, MonomialOrder::Grevlex);
        got = artinian_length(&gb, degree + 1);
        if got == degree {
            return Ok(reduced);
        }
    }
    Err(BettiError::NoRegularSequence { forms, expected: degree, got })
}

/// Total length of `S/I` counted until the first vanishing piece, capped
/// past `cap`.
fn artinian_length(gb: &GroebnerBasis, cap: usize) -> usize {
    let mut total = 0;
    for d in 0.. {
        let k = gb.quotient_piece_dim(d).unwrap_or(0);
        if k == 0 {
            break;
        }
        total += k;
        if total > cap {
            break;
        }
    }
    total
}

/// Betti table of an arithmetically Cohen–Macaulay `S/I` of Krull dimension
/// `krull_dim` and degree `degree`, via an Artinian reduction.
pub fn betti_via_artinian_reduction(
    ideal: &Ideal,
    krull_dim: usize,
    degree: usize,
    seed: u64,
    opts: KoszulOptions,
) -> Result<BettiTable, BettiError> {
    let reduced = artinian_reduction(ideal, krull_dim, degree, seed)?;
    let t = betti_via_koszul_with(&reduced, opts)?;
    let mut out = BettiTable::new(ideal.ring().nvars());
    for (i, j, b) in t.entries() {
        out.set(i, j, b);
    }
    Ok(out)
}

/// A graded free complex `F_0 <- F_1 <- ...` over a polynomial ring.
/// `differentials[k - 1]` is `d_k: F_k -> F_{k-1}` as a matrix whose rows
/// index generators of `F_{k-1}` and columns generators of `F_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    ring: Arc<RingSpec>,
    twists: Vec<Vec<u32>>,
    differentials: Vec<Vec<Vec<Polynomial>>>,
}

impl FreeComplex {
    pub fn new(ring: &Arc<RingSpec>, twists: Vec<Vec<u32>>, differentials: Vec<Vec<Vec<Polynomial>>>) -> Self {
        FreeComplex { ring: ring.clone(), twists, differentials }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn twists(&self) -> &[Vec<u32>] {
        &self.twists
    }

    pub fn differentials(&self) -> &[Vec<Vec<Polynomial>>] {
        &self.differentials
    }

    pub fn len(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.differentials.is_empty()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.twists.get(k).map_or(0, |t| t.len())
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut t = BettiTable::new(self.ring.nvars());
        for (k, tw) in self.twists.iter().enumerate() {
            for &j in tw {
                t.set(k, j, t.get(k, j) + 1);
            }
        }
        t
    }

    /// Whether consecutive differentials compose to zero and every entry has
    /// the degree its twists demand.
    pub fn is_complex(&self) -> bool {
        for (k, d) in self.differentials.iter().enumerate() {
            for (r, row) in d.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    if !e.is_zero() && e.degree() != Some(self.twists[k + 1][c] - self.twists[k][r]) {
                        return false;
                    }
                }
            }
        }
        for k in 1..self.differentials.len() {
            let (a, b) = (&self.differentials[k - 1], &self.differentials[k]);
            for row in a {
                for c in 0..self.rank(k + 1) {
                    let mut acc = Polynomial::zero(&self.ring);
                    for (m, e) in row.iter().enumerate() {
                        acc = acc.add(&e.mul(&b[m][c]).expect("same ring")).expect("same ring");
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Bounds guarding the explicit resolution.
#[derive(Debug, Clone, Copy)]
pub struct ResolutionLimits {
    pub max_len: usize,
    pub max_deg: u32,
    /// Largest dimension of one graded piece of a free module.
    pub max_piece: usize,
}

impl Default for ResolutionLimits {
    fn default() -> Self {
        ResolutionLimits { max_len: 8, max_deg: 12, max_piece: 20_000 }
    }
}

/// A graded free resolution of `S/I` by iterated syzygies. `F_1` is the
/// (usually non-minimal) reduced Gröbner basis. Syzygy modules are found
/// degree by degree: new generators complete the degree-`e` kernel modulo
/// the part generated in lower degrees. A generator appearing at `max_deg`
/// or a module beyond `max_len` is refused as possibly truncated.
pub fn free_resolution(ideal: &Ideal, limits: ResolutionLimits) -> Result<FreeComplex, BettiError> {
    let ring = ideal.ring().clone();
    if !ring.is_standard_graded() {
        return Err(BettiError::NotStandardGraded);
    }
    let p = ring.p();
    let gb = buchberger(ideal, MonomialOrder::Grevlex);
    if gb.elements().iter().any(|g| g.degree() == Some(0)) {
        return Err(BettiError::UnitIdeal);
    }
    let mut twists = vec![vec![0u32]];
    let mut diffs: Vec<Vec<Vec<Polynomial>>> = Vec::new();
    if gb.elements().is_empty() {
        return Ok(FreeComplex::new(&ring, twists, diffs));
    }
    twists.push(gb.elements().iter().map(|g| g.degree().unwrap()).collect());
    diffs.push(vec![gb.elements().to_vec()]);
    let mut bases: HashMap<u32, Vec<Monomial>> = HashMap::new();
    let mut basis = |d: u32| -> Vec<Monomial> { bases.entry(d).or_insert_with(|| graded_piece_basis(&ring, d)).clone() };

    loop {
        let k = diffs.len();
        let src = twists[k].clone();
        let dst = twists[k - 1].clone();
        let d = &diffs[k - 1];
        let mut gens: Vec<Vec<Polynomial>> = Vec::new();
        let mut gen_twists: Vec<u32> = Vec::new();
        let lo = *src.iter().min().unwrap() + 1;
        for e in lo..=limits.max_deg {
            // Domain basis (column c, monomial m) of (F_k)_e.
            let mut dom: Vec<(usize, Monomial)> = Vec::new();
            for (c, &t) in src.iter().enumerate() {
                if e >= t {
                    dom.extend(basis(e - t).into_iter().map(|m| (c, m)));
                }
            }
            let mut tgt_index: HashMap<(usize, Monomial), usize> = HashMap::new();
            for (r, &t) in dst.iter().enumerate() {
                if e >= t {
                    for m in basis(e - t) {
                        let l = tgt_index.len();
                        tgt_index.insert((r, m), l);
                    }
                }
            }
            if dom.len() > limits.max_piece || tgt_index.len() > limits.max_piece {
                return Err(BettiError::ResourceCeiling(format!("graded piece of size {} at step {k}, degree {e}", dom.len().max(tgt_index.len()))));
            }
            let dom_index: HashMap<(usize, Monomial), usize> = dom.iter().enumerate().map(|(i, x)| (*x, i)).collect();
            let mut mat = vec![vec![0u32; dom.len()]; tgt_index.len()];
            for (col, (c, m)) in dom.iter().enumerate() {
                for (r, row) in d.iter().enumerate() {
                    for &(u, a) in row[*c].terms() {
                        let t = tgt_index[&(r, u.mul(m))];
                        mat[t][col] = fp::add(mat[t][col], a, p);
                    }
                }
            }
            let kernel = fp::kernel(&mat, dom.len(), p);
            if kernel.is_empty() {
                continue;
            }
            let mut span = fp::RowSpace::new(dom.len(), p);
            for (g, &t) in gens.iter().zip(&gen_twists) {
                for m in basis(e - t) {
                    let mut v = vec![0u32; dom.len()];
                    for (c, poly) in g.iter().enumerate() {
                        for &(u, a) in poly.terms() {
                            v[dom_index[&(c, u.mul(&m))]] = a;
                        }
                    }
                    span.insert(v);
                }
            }
            for v in kernel {
                if span.insert(v.clone()) {
                    if e == limits.max_deg {
                        return Err(BettiError::ResourceCeiling(format!("syzygy at the degree bound {e} in step {k}")));
                    }
                    let mut polys: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); src.len()];
                    for (i, &a) in v.iter().enumerate() {
                        if a != 0 {
                            let (c, m) = dom[i];
                            polys[c].push((m, a));
                        }
                    }
                    gens.push(polys.into_iter().map(|t| Polynomial::from_terms(&ring, t)).collect());
                    gen_twists.push(e);
                }
            }
        }
        if gens.is_empty() {
            break;
        }
        if k == limits.max_len {
            return Err(BettiError::ResourceCeiling(format!("resolution longer than {}", limits.max_len)));
        }
        let matrix: Vec<Vec<Polynomial>> = (0..src.len()).map(|c| gens.iter().map(|g| g[c].clone()).collect()).collect();
        twists.push(gen_twists);
        diffs.push(matrix);
    }
    Ok(FreeComplex::new(&ring, twists, diffs))
}

/// Cancels unit entries until every differential has entries in the
/// maximal ideal. A unit `u` at `(r, c)` of `d_k` removes generator `c` of
/// `F_k` and `r` of `F_{k-1}`: `d_k' = d_k - col_c u^{-1} row_r` on the
/// remaining indices, row `c` of `d_{k+1}` and column `r` of `d_{k-1}` drop.
pub fn minimalize(c: &FreeComplex) -> (FreeComplex, BettiTable) {
    let mut cx = c.clone();
    let p = cx.ring.p();
    'outer: loop {
        for k in 0..cx.differentials.len() {
            let d = &cx.differentials[k];
            for (r, row) in d.iter().enumerate() {
                for (col, e) in row.iter().enumerate() {
                    if e.is_zero() || e.degree() != Some(0) {
                        continue;
                    }
                    if k == 0 {
                        continue;
                    }
                    let u = e.terms()[0].1;
                    let uinv = fp::inv(u, p);
                    let d = cx.differentials[k].clone();
                    let mut nd = Vec::new();
                    for (rr, rrow) in d.iter().enumerate() {
                        if rr == r {
                            continue;
                        }
                        let mut new_row = Vec::new();
                        for (cc, x) in rrow.iter().enumerate() {
                            if cc == col {
                                continue;
                            }
                            let corr = rrow[col].mul(&d[r][cc]).expect("same ring").scale(uinv);
                            new_row.push(x.sub(&corr).expect("same ring"));
                        }
                        nd.push(new_row);
                    }
                    cx.differentials[k] = nd;
                    if k + 1 < cx.differentials.len() {
                        cx.differentials[k + 1].remove(col);
                    }
                    for row in cx.differentials[k - 1].iter_mut() {
                        row.remove(r);
                    }
                    cx.twists[k + 1].remove(col);
                    cx.twists[k].remove(r);
                    while cx.differentials.last().is_some_and(|d| d.first().is_none_or(|row| row.is_empty())) {
                        cx.differentials.pop();
                        cx.twists.pop();
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    let t = cx.betti_table();
    (cx, t)
}
