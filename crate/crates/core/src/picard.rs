//! Picard lattices of blowups of P², P¹×P¹ and F₂, adjunction, critical
//! divisors for the Reider-type ampleness test, and adjoint Hilbert
//! polynomials.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicardError {
    #[error("divisor classes live on different lattices")]
    LatticeMismatch,
    #[error("infinitely near pair ({0}, {1}) must have the form (k, k+1) with 1 <= k < s")]
    BadNearPair(usize, usize),
    #[error("D^2 + D.K = {0} is odd")]
    Parity(i64),
    #[error("Reider inapplicable: L^2 = {l2} < {need}")]
    ReiderInapplicable { l2: i64, need: i64 },
    #[error("i must be 0 or 1, got {0}")]
    BadLevel(u32),
    #[error("cannot parse divisor class {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Surface {
    P2,
    P1xP1,
    F2,
}

impl Surface {
    /// Number of base coordinates: `h`, `(a, b)` or `(h, r)`.
    pub fn base_rank(self) -> usize {
        match self {
            Surface::P2 => 1,
            _ => 2,
        }
    }

    fn base_form(self, x: &[i64], y: &[i64]) -> i64 {
        match self {
            Surface::P2 => x[0] * y[0],
            Surface::P1xP1 => x[0] * y[1] + x[1] * y[0],
            Surface::F2 => 2 * x[0] * y[0] + x[0] * y[1] + x[1] * y[0],
        }
    }

    /// Base classes meeting every effective class nonnegatively.
    fn nef_testers(self) -> Vec<Vec<i64>> {
        match self {
            Surface::P2 => vec![vec![1]],
            Surface::P1xP1 => vec![vec![1, 0], vec![0, 1]],
            Surface::F2 => vec![vec![0, 1], vec![1, 0]],
        }
    }

    /// Base coordinates of effective classes: `e >= 0`, `a, b >= 0`, `a >= 0, b >= -2a`.
    fn effective_base(self, x: &[i64]) -> bool {
        match self {
            Surface::P2 => x[0] >= 0,
            Surface::P1xP1 => x[0] >= 0 && x[1] >= 0,
            Surface::F2 => x[0] >= 0 && x[1] >= -2 * x[0],
        }
    }
}

impl std::str::FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "p2" => Ok(Surface::P2),
            "p1xp1" => Ok(Surface::P1xP1),
            "f2" => Ok(Surface::F2),
            _ => Err(format!("unknown surface {s:?}")),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::P2 => "p2",
            Surface::P1xP1 => "p1xp1",
            Surface::F2 => "f2",
        })
    }
}

/// Blowup of a base surface in `s` points; `near` holds 1-based pairs
/// `(k, k+1)` with `p_{k+1}` infinitely near `p_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLattice {
    base: Surface,
    s: usize,
    near: Vec<(usize, usize)>,
}

impl SurfaceLattice {
    pub fn new(base: Surface, s: usize, mut near: Vec<(usize, usize)>) -> Result<Self, PicardError> {
        near.sort_unstable();
        near.dedup();
        for &(i, j) in &near {
            if i == 0 || j != i + 1 || j > s {
                return Err(PicardError::BadNearPair(i, j));
            }
        }
        Ok(SurfaceLattice { base, s, near })
    }

    pub fn base(&self) -> Surface {
        self.base
    }
    pub fn num_exceptional(&self) -> usize {
        self.s
    }
    pub fn near_pairs(&self) -> &[(usize, usize)] {
        &self.near
    }

    pub fn with_near_pair(&self, k: usize) -> Result<Self, PicardError> {
        let mut near = self.near.clone();
        near.push((k, k + 1));
        Self::new(self.base, self.s, near)
    }

    /// `base - Σ m_i E_i`.
    pub fn class(&self, base: &[i64], mults: &[i64]) -> DivisorClass {
        let mut exc = vec![0; self.s];
        for (e, &m) in exc.iter_mut().zip(mults) {
            *e = -m;
        }
        DivisorClass { base: base.to_vec(), exc }
    }

    /// `base - m Σ E_i`.
    pub fn uniform(&self, base: &[i64], m: i64) -> DivisorClass {
        self.class(base, &vec![m; self.s])
    }

    /// The total transform `E_k` (1-based).
    pub fn exceptional(&self, k: usize) -> DivisorClass {
        let mut exc = vec![0; self.s];
        exc[k - 1] = 1;
        DivisorClass { base: vec![0; self.base.base_rank()], exc }
    }

    fn check(&self, d: &DivisorClass) -> Result<(), PicardError> {
        if d.base.len() != self.base.base_rank() || d.exc.len() != self.s {
            return Err(PicardError::LatticeMismatch);
        }
        Ok(())
    }

    /// Parses `7H-2E1-2E2`, `(5,5)-2E{1-7}`, `5A+5B-E3`, `H-2R`.
    pub fn parse_class(&self, s: &str) -> Result<DivisorClass, PicardError> {
        let err = || PicardError::Parse(s.to_string());
        let mut d = DivisorClass { base: vec![0; self.base.base_rank()], exc: vec![0; self.s] };
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = text.as_str();
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or_else(err)?;
            let parts: Vec<i64> = r[..close].split(',').map(|x| x.parse().map_err(|_| err())).collect::<Result<_, _>>()?;
            if parts.len() != d.base.len() {
                return Err(err());
            }
            d.base = parts;
            rest = &r[close + 1..];
        }
        while !rest.is_empty() {
            let (sign, r) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let ndig = r.bytes().take_while(u8::is_ascii_digit).count();
            let coef: i64 = if ndig == 0 { 1 } else { r[..ndig].parse().map_err(|_| err())? };
            let r = &r[ndig..];
            let sym = r.chars().next().ok_or_else(err)?;
            let r = &r[sym.len_utf8()..];
            let c = sign * coef;
            let (used, targets): (usize, Vec<usize>) = match sym {
                'E' => {
                    if let Some(inner) = r.strip_prefix('{') {
                        let close = inner.find('}').ok_or_else(err)?;
                        let (a, b) = inner[..close].split_once('-').ok_or_else(err)?;
                        let (a, b): (usize, usize) = (a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?);
                        (close + 2, (a..=b).collect())
                    } else {
                        let n = r.bytes().take_while(u8::is_ascii_digit).count();
                        (n, vec![r[..n].parse().map_err(|_| err())?])
                    }
                }
                _ => (0, Vec::new()),
            };
            match (sym, self.base) {
                ('E', _) => {
                    for k in targets {
                        if k == 0 || k > self.s {
                            return Err(err());
                        }
                        d.exc[k - 1] += c;
                    }
                }
                ('H', Surface::P2) | ('H', Surface::F2) | ('A', Surface::P1xP1) => d.base[0] += c,
                ('R', Surface::F2) | ('B', Surface::P1xP1) => d.base[1] += c,
                _ => return Err(err()),
            }
            rest = &r[used..];
        }
        Ok(d)
    }

    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<i64, PicardError> {
        self.check(d1)?;
        self.check(d2)?;
        let exc: i64 = d1.exc.iter().zip(&d2.exc).map(|(a, b)| a * b).sum();
        Ok(self.base.base_form(&d1.base, &d2.base) - exc)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<i64, PicardError> {
        self.intersect(d, d)
    }

    /// `-3H + ΣE`, `(-2,-2) + ΣE`, `-2H + ΣE`.
    pub fn canonical_class(&self) -> DivisorClass {
        let base = match self.base {
            Surface::P2 => vec![-3],
            Surface::P1xP1 => vec![-2, -2],
            Surface::F2 => vec![-2, 0],
        };
        DivisorClass { base, exc: vec![1; self.s] }
    }

    /// `p_a(D) = D.(D+K)/2 + 1`.
    pub fn arithmetic_genus(&self, d: &DivisorClass) -> Result<i64, PicardError> {
        let v = self.intersect(d, &d.add(&self.canonical_class()))?;
        if v % 2 != 0 {
            return Err(PicardError::Parity(v));
        }
        Ok(v / 2 + 1)
    }

    /// Candidates `D` with `D.(C-D) <= 1 + i`, taken from single `E_k`,
    /// `E_k - E_{k+1}` for declared near pairs, and base classes with
    /// 0/1 exceptional coefficients. `C - 2D` must meet the nef testers
    /// nonnegatively and `D.C >= 0`, as `C` is irreducible. Results are in
    /// lexicographic order of coordinates.
    pub fn critical_divisors(&self, c: &DivisorClass, i: u32) -> Result<Vec<(DivisorClass, i64)>, PicardError> {
        if i > 1 {
            return Err(PicardError::BadLevel(i));
        }
        self.check(c)?;
        let l2 = self.self_intersection(c)?;
        let need = 5 + 4 * i as i64;
        if l2 < need {
            return Err(PicardError::ReiderInapplicable { l2, need });
        }
        let bound = 1 + i as i64;
        let mut cands = Vec::new();
        for k in 1..=self.s {
            cands.push(self.exceptional(k));
        }
        for &(k, l) in &self.near {
            cands.push(self.exceptional(k).sub(&self.exceptional(l)));
        }
        let testers = self.base.nef_testers();
        let test = |b: &[i64], t: &[i64]| self.base.base_form(b, t);
        let caps: Vec<i64> = testers.iter().map(|t| test(&c.base, t)).collect();
        let range = caps.iter().copied().max().unwrap_or(0).max(1);
        let rank = self.base.base_rank();
        let mut bases: Vec<Vec<i64>> = Vec::new();
        let mut cur = vec![-2 * range; rank];
        loop {
            let ok = cur.iter().any(|&x| x != 0)
                && self.base.effective_base(&cur)
                && testers.iter().zip(&caps).all(|(t, &cap)| 2 * test(&cur, t) <= cap);
            if ok {
                bases.push(cur.clone());
            }
            let mut j = 0;
            while j < rank {
                cur[j] += 1;
                if cur[j] <= 2 * range {
                    break;
                }
                cur[j] = -2 * range;
                j += 1;
            }
            if j == rank {
                break;
            }
        }
        for b in bases {
            for mask in 0u32..(1u32 << self.s) {
                let exc: Vec<i64> = (0..self.s).map(|k| -(((mask >> k) & 1) as i64)).collect();
                cands.push(DivisorClass { base: b.clone(), exc });
            }
        }
        let mut out = Vec::new();
        for d in cands {
            if self.intersect(&d, c)? < 0 {
                continue;
            }
            let v = self.intersect(&d, &c.sub(&d))?;
            if v <= bound {
                out.push((d, v));
            }
        }
        out.sort_by(|a, b| (&a.0.base, &a.0.exc).cmp(&(&b.0.base, &b.0.exc)));
        out.dedup_by(|a, b| a.0 == b.0);
        Ok(out)
    }

    pub fn ampleness_verdict(&self, c: &DivisorClass, i: u32) -> Result<AmplenessVerdict, PicardError> {
        match self.critical_divisors(c, i) {
            Err(PicardError::ReiderInapplicable { .. }) => Ok(AmplenessVerdict { applicable: false, verdict: Verdict::Inapplicable }),
            Err(e) => Err(e),
            Ok(crit) => {
                let verdict = if crit.is_empty() {
                    Verdict::Holds
                } else if i == 0 {
                    Verdict::Fails(crit.into_iter().map(|x| x.0).collect())
                } else {
                    Verdict::HoldsOutside(crit.into_iter().map(|x| x.0).collect())
                };
                Ok(AmplenessVerdict { applicable: true, verdict })
            }
        }
    }

    /// `(a, b, c)` with `P(n) = a/2 n^2 + b n + c` for the image of `|K + C|`.
    pub fn adjoint_hilbert_poly(&self, c: &DivisorClass) -> Result<(i64, i64, i64), PicardError> {
        let adj = c.add(&self.canonical_class());
        let a = self.self_intersection(&adj)?;
        let g = self.arithmetic_genus(&adj)?;
        Ok((a, a / 2 + 1 - g, 1))
    }

    pub fn display(&self, d: &DivisorClass) -> String {
        let mut s = match self.base {
            Surface::P2 => mono(d.base[0], "H", true),
            Surface::P1xP1 if d.base.iter().all(|&b| b == 0) => String::new(),
            Surface::P1xP1 => format!("({},{})", d.base[0], d.base[1]),
            Surface::F2 => {
                let h = mono(d.base[0], "H", true);
                let first = h.is_empty();
                h + &mono(d.base[1], "R", first)
            }
        };
        for (k, &e) in d.exc.iter().enumerate() {
            let first = s.is_empty();
            s += &mono(e, &format!("E{}", k + 1), first);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

fn mono(c: i64, sym: &str, first: bool) -> String {
    match (c, first) {
        (0, _) => String::new(),
        (1, true) => sym.to_string(),
        (1, false) => format!("+{sym}"),
        (-1, _) => format!("-{sym}"),
        (c, true) => format!("{c}{sym}"),
        (c, false) if c > 0 => format!("+{c}{sym}"),
        (c, _) => format!("{c}{sym}"),
    }
}

/// A lattice element: base coordinates plus exceptional coordinates, so
/// `7H - 2E1` is `base = [7]`, `exc = [-2, ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub base: Vec<i64>,
    pub exc: Vec<i64>,
}

impl DivisorClass {
    pub fn add(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            base: self.base.iter().zip(&o.base).map(|(a, b)| a + b).collect(),
            exc: self.exc.iter().zip(&o.exc).map(|(a, b)| a + b).collect(),
        }
    }
    pub fn sub(&self, o: &DivisorClass) -> DivisorClass {
        self.add(&o.scale(-1))
    }
    pub fn scale(&self, c: i64) -> DivisorClass {
        DivisorClass { base: self.base.iter().map(|a| a * c).collect(), exc: self.exc.iter().map(|a| a * c).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Vec<DivisorClass>),
    HoldsOutside(Vec<DivisorClass>),
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplenessVerdict {
    pub applicable: bool,
    pub verdict: Verdict,
}

/// `ρ(g, r, d) = g - (r+1)(g - d + r)`.
pub fn brill_noether_rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}
