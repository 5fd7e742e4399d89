//! Exterior algebra on generators `f1..fm`: wedge monomials, block wedge
//! maps `(Λ^k)^n -> (Λ^{k+1})^n'`, the maps α, β, γ and their kernels.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exactalg::{ExactError, ExactMatrix, FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("exterior algebra needs at least 2 generators, got {0}")]
    TooFewGenerators(usize),
    #[error("generator index {index} outside f1..f{m}")]
    BadIndex { index: usize, m: usize },
    #[error("block map shape mismatch")]
    Shape,
    #[error("rank {rank} of alpha is unclassified in characteristic {characteristic}")]
    Unclassified { rank: usize, characteristic: u32 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Ordered generators `f1..fm`; wedge monomials are strictly increasing
/// 1-based index tuples, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkewBasis {
    m: usize,
}

impl SkewBasis {
    pub fn new(m: usize) -> Result<Self, ExteriorError> {
        if m < 2 {
            return Err(ExteriorError::TooFewGenerators(m));
        }
        Ok(SkewBasis { m })
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    /// Wedge monomials of degree `k` in lexicographic order.
    pub fn monomials(&self, k: usize) -> Vec<Vec<u8>> {
        fn rec(start: u8, m: u8, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..=m {
                cur.push(i);
                rec(i + 1, m, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(1, self.m as u8, k, &mut Vec::new(), &mut out);
        out
    }

    pub fn dim(&self, k: usize) -> usize {
        crate::betti::binomial(self.m as i64, k as i64) as usize
    }

    /// Coordinates of a homogeneous degree-`k` element in `monomials(k)`.
    pub fn coordinates(&self, w: &Wedge, k: usize) -> Result<Vec<i64>, ExteriorError> {
        let basis = self.monomials(k);
        let mut out = vec![0; basis.len()];
        for (t, &c) in &w.terms {
            if t.len() != k {
                return Err(ExteriorError::Shape);
            }
            let i = basis.binary_search(t).map_err(|_| ExteriorError::BadIndex { index: *t.last().unwrap() as usize, m: self.m })?;
            out[i] += c;
        }
        Ok(out)
    }
}

/// An element of the exterior algebra with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Wedge {
    terms: BTreeMap<Vec<u8>, i64>,
}

impl Wedge {
    pub fn zero() -> Self {
        Wedge::default()
    }

    /// The generator `f_i` (1-based).
    pub fn gen(i: usize) -> Self {
        Self::monomial(&[i], 1)
    }

    /// `c * f_{i1} ∧ ... ∧ f_{ik}`, reordered with the permutation sign.
    pub fn monomial(idx: &[usize], c: i64) -> Self {
        let mut t: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
        let mut sign = 1;
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if t[i] == t[j] {
                    return Wedge::zero();
                }
                if t[i] > t[j] {
                    sign = -sign;
                }
            }
        }
        t.sort_unstable();
        let mut w = Wedge::zero();
        if c != 0 {
            w.terms.insert(t, sign * c);
        }
        w
    }

    /// A linear form `Σ c_i f_i` from `(i, c_i)` pairs.
    pub fn linear(pairs: &[(usize, i64)]) -> Self {
        pairs.iter().fold(Wedge::zero(), |acc, &(i, c)| acc.add(&Self::monomial(&[i], c)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, i64> {
        &self.terms
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().flat_map(|t| t.iter()).map(|&i| i as usize).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Wedge) -> Wedge {
        let mut terms = self.terms.clone();
        for (t, &c) in &o.terms {
            let e = terms.entry(t.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                terms.remove(t);
            }
        }
        Wedge { terms }
    }

    pub fn scale(&self, c: i64) -> Wedge {
        if c == 0 {
            return Wedge::zero();
        }
        Wedge { terms: self.terms.iter().map(|(t, &v)| (t.clone(), v * c)).collect() }
    }

    pub fn neg(&self) -> Wedge {
        self.scale(-1)
    }

    pub fn wedge(&self, o: &Wedge) -> Wedge {
        let mut out = Wedge::zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &o.terms {
                let idx: Vec<usize> = a.iter().chain(b.iter()).map(|&i| i as usize).collect();
                out = out.add(&Wedge::monomial(&idx, ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (t, &c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = t.iter().map(|i| format!("f{i}")).collect();
            let mono = mono.join("^");
            match (n, c) {
                (0, 1) => write!(f, "{mono}")?,
                (0, -1) => write!(f, "-{mono}")?,
                (0, _) => write!(f, "{c}*{mono}")?,
                (_, 1) => write!(f, " + {mono}")?,
                (_, -1) => write!(f, " - {mono}")?,
                (_, c) if c < 0 => write!(f, " - {}*{mono}", -c)?,
                (_, c) => write!(f, " + {c}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// The linear map `(Λ^k)^n -> (Λ^{k+1})^{n'}`, `out_i = Σ_j coef[i][j] ∧ v_j`,
/// with `coef` an `n' x n` array of linear forms. Rows are output
/// coordinates block by block, columns input coordinates block by block.
pub fn block_wedge_matrix(
    basis: SkewBasis,
    k: usize,
    coef: &[Vec<Wedge>],
    field: FieldSpec,
) -> Result<ExactMatrix, ExteriorError> {
    let nin = coef.first().map(|r| r.len()).ok_or(ExteriorError::Shape)?;
    if coef.iter().any(|r| r.len() != nin) {
        return Err(ExteriorError::Shape);
    }
    for c in coef.iter().flatten() {
        if c.max_index() > basis.m {
            return Err(ExteriorError::BadIndex { index: c.max_index(), m: basis.m });
        }
    }
    let src = basis.monomials(k);
    let (ds, dt) = (src.len(), basis.dim(k + 1));
    let nout = coef.len();
    let mut rows = vec![vec![0i64; nin * ds]; nout * dt];
    for (j, _) in coef[0].iter().enumerate() {
        for (s, t) in src.iter().enumerate() {
            let idx: Vec<usize> = t.iter().map(|&i| i as usize).collect();
            let v = Wedge::monomial(&idx, 1);
            for (i, row) in coef.iter().enumerate() {
                let img = basis.coordinates(&row[j].wedge(&v), k + 1)?;
                for (r, c) in img.into_iter().enumerate() {
                    rows[i * dt + r][j * ds + s] = c;
                }
            }
        }
    }
    Ok(ExactMatrix::from_i64_rows(field, &rows)?)
}

/// Flattens a block vector of degree-`k` elements into matrix coordinates.
pub fn encode(basis: SkewBasis, k: usize, v: &[Wedge]) -> Result<Vec<Scalar>, ExteriorError> {
    let mut out = Vec::new();
    for w in v {
        out.extend(basis.coordinates(w, k)?);
    }
    Ok(out.into_iter().map(|c| Scalar::Rational(num_rational::BigRational::from_integer(c.into()))).collect())
}

/// Whether the block vector `v` lies in the kernel of `m`.
pub fn annihilates(m: &ExactMatrix, basis: SkewBasis, k: usize, v: &[Wedge]) -> Result<bool, ExteriorError> {
    let x = encode(basis, k, v)?;
    if x.len() != m.cols() {
        return Err(ExteriorError::Shape);
    }
    Ok(m.apply(&x)?.iter().all(Scalar::is_zero))
}

/// Normal forms of a skew 4 x 4 linear matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PsiTag {
    A,
    B,
    C,
    D,
}

impl fmt::Display for PsiTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PsiTag::A => "A",
            PsiTag::B => "B",
            PsiTag::C => "C",
            PsiTag::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for PsiTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "A" | "a" => Ok(PsiTag::A),
            "B" | "b" => Ok(PsiTag::B),
            "C" | "c" => Ok(PsiTag::C),
            "D" | "d" => Ok(PsiTag::D),
            _ => Err(format!("unknown psi type {s:?}")),
        }
    }
}

/// A skew 4 x 4 matrix of linear forms given by its upper-triangular slots
/// `(12, 13, 14, 23, 24, 34)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiType {
    pub tag: PsiTag,
    pub slots: [Wedge; 6],
}

const SLOT_POS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl PsiType {
    /// The normal form with slot indices (0 for an empty slot).
    fn from_indices(tag: PsiTag, idx: [usize; 6]) -> Self {
        let slots = idx.map(|i| if i == 0 { Wedge::zero() } else { Wedge::gen(i) });
        PsiType { tag, slots }
    }

    pub fn standard(tag: PsiTag) -> Self {
        let idx = match tag {
            PsiTag::A => [1, 2, 3, 4, 5, 1],
            PsiTag::B => [1, 2, 3, 4, 5, 0],
            PsiTag::C => [0, 2, 3, 4, 5, 0],
            PsiTag::D => [1, 2, 3, 4, 2, 0],
        };
        Self::from_indices(tag, idx)
    }

    /// The D substitution `f1 -> f6, f3 -> f4` applied to the generic
    /// matrix with slots `(f1, ..., f6)`, on six generators.
    pub fn substituted_d() -> Self {
        Self::from_indices(PsiTag::D, [6, 2, 4, 4, 5, 6])
    }

    /// The full skew matrix.
    pub fn matrix(&self) -> Vec<Vec<Wedge>> {
        let mut m = vec![vec![Wedge::zero(); 4]; 4];
        for (s, &(i, j)) in SLOT_POS.iter().enumerate() {
            m[i][j] = self.slots[s].clone();
            m[j][i] = self.slots[s].neg();
        }
        m
    }

    /// Number of generators used: 5, or 6 when `f6` occurs.
    pub fn generators(&self) -> usize {
        self.slots.iter().map(Wedge::max_index).max().unwrap_or(0).max(5)
    }

    /// Conjugate `P^T ψ P` by an integer 4 x 4 matrix and substitute
    /// `f_i -> Σ_j g[i][j] f_j` through a 5 x 5 matrix `g`.
    pub fn transformed(&self, p: &[[i64; 4]; 4], g: &[[i64; 5]; 5]) -> Self {
        let m = self.matrix();
        let sub = |w: &Wedge| -> Wedge {
            let mut out = Wedge::zero();
            for (t, &c) in w.terms() {
                let i = t[0] as usize - 1;
                for (j, &gij) in g[i].iter().enumerate() {
                    out = out.add(&Wedge::monomial(&[j + 1], c * gij));
                }
            }
            out
        };
        let mut slots: [Wedge; 6] = Default::default();
        for (s, &(a, b)) in SLOT_POS.iter().enumerate() {
            let mut acc = Wedge::zero();
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    acc = acc.add(&e.scale(p[i][a] * p[j][b]));
                }
            }
            slots[s] = sub(&acc);
        }
        PsiType { tag: self.tag, slots }
    }
}

/// `α(v)_i = Σ_j ψ_ij ∧ v_j` from `(Λ²)^4` to `(Λ³)^4`.
pub fn alpha_matrix(t: &PsiType, field: FieldSpec) -> Result<ExactMatrix, ExteriorError> {
    block_wedge_matrix(SkewBasis::new(t.generators())?, 2, &t.matrix(), field)
}

/// Dimension of `ker α`.
pub fn alpha_kernel_dim(t: &PsiType, field: FieldSpec) -> Result<usize, ExteriorError> {
    let m = alpha_matrix(t, field)?;
    Ok(m.cols() - m.rank())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Char3KernelDims {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Kernel dimensions of α for the four normal forms over `F_3`.
pub fn char3_kernel_dims() -> Char3KernelDims {
    let f3 = FieldSpec::prime(3).expect("3 is prime");
    let k = |tag| alpha_kernel_dim(&PsiType::standard(tag), f3).expect("standard types are well formed");
    Char3KernelDims { a: k(PsiTag::A), b: k(PsiTag::B), c: k(PsiTag::C), d: k(PsiTag::D) }
}

/// `β45 = 44 - rank α` on the ranks that occur; characteristic 3 adds 34 and 38.
pub fn classify_rank(rank: usize, characteristic: u32) -> Result<u32, ExteriorError> {
    let ok = matches!(rank, 32 | 36 | 40) || (characteristic == 3 && matches!(rank, 34 | 38));
    if !ok {
        return Err(ExteriorError::Unclassified { rank, characteristic });
    }
    Ok(44 - rank as u32)
}

/// The 2 x 2 block `[[ω12, ω13], [ω22, ω23]]` of linear forms.
pub type OmegaBlock = [[Wedge; 2]; 2];

/// `ω12 = f1, ω13 = f2, ω22 = f3, ω23 = f4`.
pub fn generic_omega() -> OmegaBlock {
    [[Wedge::gen(1), Wedge::gen(2)], [Wedge::gen(3), Wedge::gen(4)]]
}

/// `γ(v1, v2) = (v1 ∧ ω12 + v2 ∧ ω22, v1 ∧ ω13 + v2 ∧ ω23)` on `(Λ²k⁵)²`.
pub fn gamma_matrix(omega: &OmegaBlock, field: FieldSpec) -> Result<ExactMatrix, ExteriorError> {
    // degree-2 elements commute with linear forms, so v ∧ ω = ω ∧ v
    let coef = vec![vec![omega[0][0].clone(), omega[1][0].clone()], vec![omega[0][1].clone(), omega[1][1].clone()]];
    block_wedge_matrix(SkewBasis::new(5)?, 2, &coef, field)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaReport {
    pub kernel_dim: usize,
    /// The four forms are dependent or the kernel exceeds the generic 4.
    pub degenerate: bool,
}

pub fn gamma_kernel(omega: &OmegaBlock, field: FieldSpec) -> Result<GammaReport, ExteriorError> {
    let m = gamma_matrix(omega, field)?;
    let kernel_dim = m.cols() - m.rank();
    let forms: Vec<Vec<i64>> = omega.iter().flatten().map(|w| SkewBasis::new(5).and_then(|b| b.coordinates(w, 1))).collect::<Result<_, _>>()?;
    let independent = ExactMatrix::from_i64_rows(field, &forms)?.rank() == 4;
    Ok(GammaReport { kernel_dim, degenerate: !independent || kernel_dim > 4 })
}

/// Multiplicity of the exceptional section in the two β computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaCase {
    /// `f1 = sφ0, f2 = tφ0, f3 = sφ1, f4 = tφ1, f5 = φ2`.
    Multiplicity2,
    /// `f1 = s²φ0, f2 = stφ0, f3 = t²φ0, f4 = φ, f5 = φ2`.
    Multiplicity3,
}

impl BetaCase {
    /// `coef[input][output]` with inputs `(y, z, s⊗x, t⊗x)` and outputs
    /// `(out1, out2, out3⊗s*, out3⊗t*)`.
    fn table(self) -> [[i64; 4]; 4] {
        match self {
            BetaCase::Multiplicity2 => [[0, 5, 3, 4], [-5, 0, 1, 2], [-3, -1, 0, 0], [-4, -2, 0, 0]],
            BetaCase::Multiplicity3 => [[0, 4, 2, 3], [-4, 0, 1, 2], [-2, -1, 0, 0], [-3, -2, 0, 0]],
        }
    }
}

/// β on `(Λ²k⁵)^4 -> (Λ³k⁵)^4`.
pub fn beta_matrix(case: BetaCase, field: FieldSpec) -> Result<ExactMatrix, ExteriorError> {
    let t = case.table();
    let form = |c: i64| if c == 0 { Wedge::zero() } else { Wedge::monomial(&[c.unsigned_abs() as usize], c.signum()) };
    let coef: Vec<Vec<Wedge>> = (0..4).map(|out| (0..4).map(|inp| form(t[inp][out])).collect()).collect();
    block_wedge_matrix(SkewBasis::new(5)?, 2, &coef, field)
}

pub fn beta_kernel(case: BetaCase, field: FieldSpec) -> Result<usize, ExteriorError> {
    let m = beta_matrix(case, field)?;
    Ok(m.cols() - m.rank())
}
