//! Random plane, quadric and cone models of curves with prescribed
//! singular points, their adjoint series, canonical ideals, section counts
//! of pencils, and the base-point test for a third pencil on (5,5) curves.
//!
//! Points are stored as Galois-stable clusters: a squarefree `h(a)` over
//! `F_p` together with chart coordinates in `F_p[a]/(h)`. Over a large
//! prime every point is its own rational cluster; over a small prime whole
//! orbits are drawn at once.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::betti::{betti_via_artinian_reduction, BettiError, BettiTable, KoszulOptions};
use crate::exactalg::{fp, FieldSpec};
use crate::groebner::{buchberger, ideal_piece, minimal_generators, ring_map_kernel, GroebnerBasis, GroebnerError, Ideal};
use crate::picard::{DivisorClass, PicardError, Surface, SurfaceLattice};
use crate::polyring::{binom_mod, graded_piece_basis, monomial_index, Monomial, MonomialOrder, PolyError, Polynomial, RingSpec};
use crate::scroll::{ScrollError, SectionPartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("models are not generated in characteristic {0}")]
    Characteristic(u32),
    #[error("no forms of degree {degree} satisfy {conditions} conditions")]
    EmptySystem { degree: u32, conditions: usize },
    #[error("no admissible draw after {0} attempts")]
    Degenerate(usize),
    #[error("model rejected: {0}")]
    Rejected(String),
    #[error("operation needs a {0} model")]
    WrongAmbient(&'static str),
    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Betti(#[from] BettiError),
    #[error(transparent)]
    Scroll(#[from] ScrollError),
    #[error(transparent)]
    Picard(#[from] PicardError),
}

const MAX_ATTEMPTS: usize = 100;

/// Dense univariate polynomials over `F_p`, constant term first.
mod upoly {
    use crate::exactalg::fp;

    pub fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0; r.len() - b.len() + 1];
        let lb = fp::inv(*b.last().expect("nonzero divisor"), p);
        while r.len() >= b.len() {
            let c = fp::mul(*r.last().unwrap(), lb, p);
            let shift = r.len() - b.len();
            q[shift] = c;
            for (i, &x) in b.iter().enumerate() {
                r[shift + i] = fp::sub(r[shift + i], fp::mul(c, x, p), p);
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = fp::add(out[i + j], fp::mul(x, y, p), p);
            }
        }
        trim(out)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| fp::sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p)).collect())
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !y.is_empty() {
            let r = divrem(&x, &y, p).1;
            x = y;
            y = r;
        }
        x
    }

    /// Residue of `a` modulo the monic `h`, padded to `deg h` entries.
    pub fn reduce(a: &[u32], h: &[u32], p: u32) -> Vec<u32> {
        let mut r = divrem(a, h, p).1;
        r.resize(h.len() - 1, 0);
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], h: &[u32], p: u32) -> Vec<u32> {
        reduce(&mul(&trim(a.to_vec()), &trim(b.to_vec()), p), h, p)
    }

    pub fn pow_mod(a: &[u32], mut e: u64, h: &[u32], p: u32) -> Vec<u32> {
        let mut base = reduce(a, h, p);
        let mut acc = reduce(&[1], h, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, h, p);
            }
            base = mul_mod(&base, &base, h, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or test: no factor of degree at most `deg h / 2`.
    pub fn is_irreducible(h: &[u32], p: u32) -> bool {
        let k = h.len() - 1;
        let x = [0u32, 1];
        let mut xq = reduce(&x, h, p);
        for _ in 0..k / 2 {
            xq = pow_mod(&xq, p as u64, h, p);
            if gcd(h, &sub(&xq, &x, p), p).len() != 1 {
                return false;
            }
        }
        k >= 1
    }

    /// Rank of a matrix over the field `F_p[a]/(h)`, `h` irreducible.
    pub fn rank(mut rows: Vec<Vec<Vec<u32>>>, ncols: usize, h: &[u32], p: u32) -> usize {
        let zero = |x: &[u32]| x.iter().all(|&c| c == 0);
        let mut r = 0;
        for col in 0..ncols {
            let Some(piv) = (r..rows.len()).find(|&i| !zero(&rows[i][col])) else { continue };
            rows.swap(r, piv);
            let inv = inv_mod(&rows[r][col], h, p).expect("field element");
            let pivot: Vec<Vec<u32>> = rows[r].iter().map(|x| mul_mod(x, &inv, h, p)).collect();
            for row in rows.iter_mut().skip(r + 1) {
                if zero(&row[col]) {
                    continue;
                }
                let c = row[col].clone();
                for j in col..ncols {
                    if !zero(&pivot[j]) {
                        let t = mul_mod(&c, &pivot[j], h, p);
                        row[j] = reduce(&sub(&row[j], &t, p), h, p);
                    }
                }
            }
            rows[r] = pivot;
            r += 1;
        }
        r
    }

    pub fn inv_mod(a: &[u32], h: &[u32], p: u32) -> Option<Vec<u32>> {
        let (mut r0, mut r1) = (h.to_vec(), divrem(a, h, p).1);
        let (mut s0, mut s1) = (Vec::new(), vec![1u32]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = fp::inv(r0[0], p);
        Some(reduce(&s0.iter().map(|&x| fp::mul(x, c, p)).collect::<Vec<_>>(), h, p))
    }
}

/// The surface carrying the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    /// `P^2` with coordinates `x0, x1, x2`.
    Plane,
    /// `P^1 x P^1` as the smooth quadric `x0 x3 - x1 x2` in `P^3`.
    Quadric,
    /// The quadric cone `x1^2 - x0 x2` in `P^3`, vertex `(0:0:0:1)`.
    Cone,
}

impl Ambient {
    pub fn nvars(self) -> usize {
        match self {
            Ambient::Plane => 3,
            _ => 4,
        }
    }

    pub fn ring(self, p: u32) -> Result<Arc<RingSpec>, CurveError> {
        Ok(RingSpec::standard(p, "x", self.nvars())?)
    }

    pub fn surface_form(self, ring: &Arc<RingSpec>) -> Option<Polynomial> {
        let s = match self {
            Ambient::Plane => return None,
            Ambient::Quadric => "x0*x3 - x1*x2",
            Ambient::Cone => "x1^2 - x0*x2",
        };
        Some(Polynomial::parse(ring, s).expect("fixed form"))
    }

    /// Degree of the adjoint forms cutting out the canonical series.
    pub fn adjoint_degree(self, d: u32) -> i64 {
        match self {
            Ambient::Plane => d as i64 - 3,
            _ => d as i64 - 2,
        }
    }

    /// Arithmetic genus of a plane curve of degree `d`, or of the complete
    /// intersection of the surface with a form of degree `d`.
    pub fn arithmetic_genus(self, d: u32) -> i64 {
        let d = d as i64;
        match self {
            Ambient::Plane => (d - 1) * (d - 2) / 2,
            _ => (d - 1) * (d - 1),
        }
    }

    /// Exponents of the pullback of an ambient monomial to the affine chart:
    /// `(x1, x2)` on the plane, `(t, v)` with `x = (1, v, t, tv)` on the
    /// quadric and `(t, w)` with `x = (1, t, t^2, w)` on the cone.
    pub fn chart_exponent(self, m: &Monomial) -> (u32, u32) {
        let e = |i| m.exponent(i);
        match self {
            Ambient::Plane => (e(1), e(2)),
            Ambient::Quadric => (e(2) + e(3), e(1) + e(3)),
            Ambient::Cone => (e(1) + 2 * e(2), e(3)),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Ambient::Plane => "plane",
            Ambient::Quadric => "quadric",
            Ambient::Cone => "cone",
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Ambient {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "plane" => Ok(Ambient::Plane),
            "quadric" => Ok(Ambient::Quadric),
            "cone" => Ok(Ambient::Cone),
            other => Err(CurveError::Rejected(format!("unknown ambient `{other}`"))),
        }
    }
}

/// Galois-stable set of `deg h` points with common multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCluster {
    /// Monic squarefree `h(a)`, constant term first.
    pub modulus: Vec<u32>,
    /// Chart coordinates as residues modulo `h`, each of length `deg h`.
    pub chart: [Vec<u32>; 2],
    pub multiplicity: u32,
}

impl PointCluster {
    /// A single `F_p`-rational point.
    pub fn rational(c1: u32, c2: u32, multiplicity: u32) -> Self {
        PointCluster { modulus: vec![0, 1], chart: [vec![c1], vec![c2]], multiplicity }
    }

    /// Number of geometric points.
    pub fn len(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rational_chart(&self) -> Option<(u32, u32)> {
        (self.len() == 1).then(|| (self.chart[0][0], self.chart[1][0]))
    }

    fn powers(&self, which: usize, max: u32, p: u32) -> Vec<Vec<u32>> {
        let k = self.len();
        let mut one = vec![0u32; k];
        one[0] = 1;
        let mut out = vec![one];
        for _ in 0..max {
            let next = upoly::mul_mod(out.last().unwrap(), &self.chart[which], &self.modulus, p);
            out.push(next);
        }
        out
    }

    /// Ambient coordinates of the points as residues.
    pub fn ambient_point(&self, ambient: Ambient, p: u32) -> Vec<Vec<u32>> {
        let k = self.len();
        let mut one = vec![0u32; k];
        one[0] = 1;
        let [c1, c2] = &self.chart;
        match ambient {
            Ambient::Plane => vec![one, c1.clone(), c2.clone()],
            Ambient::Quadric => vec![one, c2.clone(), c1.clone(), upoly::mul_mod(c1, c2, &self.modulus, p)],
            Ambient::Cone => vec![one, c1.clone(), upoly::mul_mod(c1, c1, &self.modulus, p), c2.clone()],
        }
    }
}

/// Rows stating that `sum_k u_k t^{a_k} v^{b_k}` vanishes to order `order`
/// at every point of the cluster, via Hasse derivatives in the chart.
fn vanishing_rows(exps: &[(u32, u32)], c: &PointCluster, order: u32, p: u32) -> Vec<Vec<u32>> {
    if order == 0 || exps.is_empty() {
        return Vec::new();
    }
    let k = c.len();
    let max1 = exps.iter().map(|e| e.0).max().unwrap_or(0);
    let max2 = exps.iter().map(|e| e.1).max().unwrap_or(0);
    let pw1 = c.powers(0, max1, p);
    let pw2 = c.powers(1, max2, p);
    let mut rows = Vec::new();
    for total in 0..order {
        for a1 in 0..=total {
            let a2 = total - a1;
            let mut block = vec![vec![0u32; exps.len()]; k];
            for (col, &(e1, e2)) in exps.iter().enumerate() {
                if e1 < a1 || e2 < a2 {
                    continue;
                }
                let coef = fp::mul(binom_mod(e1, a1, p), binom_mod(e2, a2, p), p);
                if coef == 0 {
                    continue;
                }
                let v = upoly::mul_mod(&pw1[(e1 - a1) as usize], &pw2[(e2 - a2) as usize], &c.modulus, p);
                for (r, &x) in v.iter().enumerate() {
                    block[r][col] = fp::mul(x, coef, p);
                }
            }
            rows.extend(block);
        }
    }
    rows
}

/// Kernel of the vanishing conditions `(cluster, order)` on the span of the
/// chart monomials `exps`.
fn solve_conditions(exps: &[(u32, u32)], conds: &[(&PointCluster, u32)], p: u32) -> Vec<Vec<u32>> {
    let rows: Vec<Vec<u32>> = conds.iter().flat_map(|&(c, o)| vanishing_rows(exps, c, o, p)).collect();
    fp::kernel(&rows, exps.len(), p)
}

fn condition_count(conds: &[(&PointCluster, u32)]) -> usize {
    conds.iter().map(|&(c, o)| c.len() * (o * (o + 1) / 2) as usize).sum()
}

/// Where the singular points are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    General,
    /// On a twisted cubic `(s^3, s^2 t, s t^2, c(s, t))` of the cone.
    TwistedCubic,
    /// On a curve of bidegree (1,2) of the quadric.
    BidegreeOneTwo,
}

/// Ambient, degree and singular points of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub ambient: Ambient,
    pub degree: u32,
    /// `(count, multiplicity)` pairs.
    pub singularities: Vec<(usize, u32)>,
    pub placement: Placement,
    /// Also pass through the residual base point of the net of quadrics
    /// through the double points.
    pub through_base_point: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Recipe {
    General,
    OneG15,
    TwoG15,
    ThreeG15,
    G72,
    G14,
    G14xG15,
    G62,
    G13,
    Mult2G15,
    Mult3G15,
    Mult2PlusOrdinary,
}

impl Recipe {
    pub const ALL: [Recipe; 12] = [
        Recipe::General,
        Recipe::OneG15,
        Recipe::TwoG15,
        Recipe::ThreeG15,
        Recipe::G72,
        Recipe::G14,
        Recipe::G14xG15,
        Recipe::G62,
        Recipe::G13,
        Recipe::Mult2G15,
        Recipe::Mult3G15,
        Recipe::Mult2PlusOrdinary,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Recipe::General => "general",
            Recipe::OneG15 => "one_g15",
            Recipe::TwoG15 => "two_g15",
            Recipe::ThreeG15 => "three_g15",
            Recipe::G72 => "g72",
            Recipe::G14 => "g14",
            Recipe::G14xG15 => "g14_x_g15",
            Recipe::G62 => "g62",
            Recipe::G13 => "g13",
            Recipe::Mult2G15 => "mult2_g15",
            Recipe::Mult3G15 => "mult3_g15",
            Recipe::Mult2PlusOrdinary => "mult2_plus_ordinary",
        }
    }

    /// Catalog label the canonical curve should classify as.
    pub fn expected_label(self) -> &'static str {
        match self {
            Recipe::Mult2G15 => "two_g15",
            Recipe::Mult3G15 | Recipe::Mult2PlusOrdinary => "three_g15",
            r => r.tag(),
        }
    }

    pub fn spec(self) -> ModelSpec {
        use Ambient::*;
        let s = |ambient, degree, singularities: &[(usize, u32)], placement, through_base_point| ModelSpec {
            ambient,
            degree,
            singularities: singularities.to_vec(),
            placement,
            through_base_point,
        };
        let g = Placement::General;
        match self {
            Recipe::General => s(Plane, 9, &[(3, 3), (10, 2)], g, false),
            Recipe::OneG15 => s(Plane, 8, &[(1, 3), (9, 2)], g, false),
            Recipe::TwoG15 => s(Quadric, 5, &[(7, 2)], g, false),
            Recipe::ThreeG15 => s(Quadric, 5, &[(7, 2)], g, true),
            Recipe::G72 => s(Plane, 7, &[(6, 2)], g, false),
            Recipe::G14 => s(Plane, 8, &[(1, 4), (6, 2)], g, false),
            Recipe::G14xG15 => s(Plane, 7, &[(1, 3), (3, 2)], g, false),
            Recipe::G62 => s(Plane, 6, &[(1, 2)], g, false),
            Recipe::G13 => s(Plane, 7, &[(1, 4)], g, false),
            Recipe::Mult2G15 => s(Cone, 5, &[(7, 2)], g, false),
            Recipe::Mult3G15 => s(Cone, 5, &[(7, 2)], Placement::TwistedCubic, false),
            Recipe::Mult2PlusOrdinary => s(Cone, 5, &[(7, 2)], g, true),
        }
    }

    /// The pencil of degree 5 the recipe is built around, if any.
    pub fn pencil(self) -> Option<Pencil> {
        match self {
            Recipe::OneG15 => Some(Pencil::LinesThrough(0)),
            Recipe::TwoG15 | Recipe::ThreeG15 => Some(Pencil::RulingA),
            Recipe::Mult2G15 | Recipe::Mult3G15 | Recipe::Mult2PlusOrdinary => Some(Pencil::ConeRuling),
            _ => None,
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Recipe {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Recipe::ALL.into_iter().find(|r| r.tag() == s.trim()).ok_or_else(|| CurveError::UnknownRecipe(s.to_string()))
    }
}

/// A curve on one of the three surfaces with its imposed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    pub recipe: Option<Recipe>,
    pub ambient: Ambient,
    pub degree: u32,
    pub ring: Arc<RingSpec>,
    /// The surface form first when there is one, then the curve form.
    pub defining_forms: Vec<Polynomial>,
    pub points: Vec<PointCluster>,
    pub seed: u64,
}

impl CurveModel {
    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn curve_form(&self) -> &Polynomial {
        self.defining_forms.last().expect("curve form")
    }

    pub fn curve_ideal(&self) -> Result<Ideal, CurveError> {
        Ok(Ideal::new(&self.ring, self.defining_forms.clone())?)
    }

    /// Arithmetic genus minus the delta invariants of the ordinary points.
    pub fn genus(&self) -> i64 {
        let delta: i64 = self.points.iter().map(|c| c.len() as i64 * (c.multiplicity as i64 * (c.multiplicity as i64 - 1) / 2)).sum();
        self.ambient.arithmetic_genus(self.degree) - delta
    }

    pub fn point_count(&self) -> usize {
        self.points.iter().map(|c| c.len()).sum()
    }
}

fn rand_residue(k: usize, p: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..k).map(|_| rng.gen_range(0..p)).collect()
}

/// Random monic irreducible `h` of degree `k`, so that a cluster is one
/// Frobenius orbit and `F_p[a]/(h)` is a field.
fn random_irreducible(k: usize, p: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    loop {
        let mut h = rand_residue(k, p, rng);
        h.push(1);
        if upoly::is_irreducible(&h, p) {
            return h;
        }
    }
}

/// True when the chart coordinates separate all geometric points.
fn points_distinct(clusters: &[PointCluster], p: u32) -> bool {
    let total: usize = clusters.iter().map(|c| c.len()).sum();
    let deg = total.saturating_sub(1) as u32;
    let pows: Vec<[Vec<Vec<u32>>; 2]> = clusters.iter().map(|c| [c.powers(0, deg, p), c.powers(1, deg, p)]).collect();
    let mut rows = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            let mut row = Vec::with_capacity(total);
            for (c, pw) in clusters.iter().zip(&pows) {
                row.extend(upoly::mul_mod(&pw[0][i as usize], &pw[1][j as usize], &c.modulus, p));
            }
            rows.push(row);
        }
    }
    fp::rank(rows, total, p) == total
}

/// Extra general-position tests for rational points.
fn rational_general_position(ambient: Ambient, clusters: &[PointCluster], p: u32) -> bool {
    let pts: Vec<(u32, u32)> = clusters.iter().filter_map(|c| c.rational_chart()).collect();
    if pts.len() != clusters.len() {
        return true;
    }
    match ambient {
        Ambient::Plane => {
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    for c in b + 1..pts.len() {
                        let (x1, y1) = pts[a];
                        let (x2, y2) = pts[b];
                        let (x3, y3) = pts[c];
                        let det = fp::sub(
                            fp::mul(fp::sub(x2, x1, p), fp::sub(y3, y1, p), p),
                            fp::mul(fp::sub(x3, x1, p), fp::sub(y2, y1, p), p),
                            p,
                        );
                        if det == 0 {
                            return false;
                        }
                    }
                }
            }
            true
        }
        Ambient::Quadric => {
            let distinct = |f: &dyn Fn(&(u32, u32)) -> u32| {
                let mut v: Vec<u32> = pts.iter().map(f).collect();
                v.sort_unstable();
                v.windows(2).all(|w| w[0] != w[1])
            };
            distinct(&|x| x.0) && distinct(&|x| x.1)
        }
        Ambient::Cone => {
            let mut v: Vec<u32> = pts.iter().map(|x| x.0).collect();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        }
    }
}

/// Shared data of a special placement, drawn once per attempt.
enum PlacementData {
    General,
    Cubic([u32; 4]),
    Graph([u32; 3], [u32; 3]),
}

fn draw_clusters(spec: &ModelSpec, p: u32, rng: &mut ChaCha8Rng) -> Option<Vec<PointCluster>> {
    let rational = p > 200;
    let data = match spec.placement {
        Placement::General => PlacementData::General,
        Placement::TwistedCubic => PlacementData::Cubic(std::array::from_fn(|_| rng.gen_range(0..p))),
        Placement::BidegreeOneTwo => PlacementData::Graph(std::array::from_fn(|_| rng.gen_range(0..p)), std::array::from_fn(|_| rng.gen_range(0..p))),
    };
    let mut clusters = Vec::new();
    for &(count, mult) in &spec.singularities {
        let sizes: Vec<usize> = if rational { vec![1; count] } else { vec![count] };
        for k in sizes {
            let h = if k == 1 { vec![rng.gen_range(0..p), 1] } else { random_irreducible(k, p, rng) };
            let c1 = rand_residue(k, p, rng);
            let c2 = match &data {
                PlacementData::General => rand_residue(k, p, rng),
                PlacementData::Cubic(c) => {
                    let mut acc = vec![0u32; k];
                    for &coef in c.iter().rev() {
                        acc = upoly::mul_mod(&acc, &c1, &h, p);
                        acc[0] = fp::add(acc[0], coef, p);
                    }
                    acc
                }
                PlacementData::Graph(a, b) => {
                    // t = -a(v) / b(v); the first coordinate is t, the second v
                    let v = c1.clone();
                    let eval = |q: &[u32; 3]| {
                        let mut acc = vec![0u32; k];
                        for &coef in q.iter().rev() {
                            acc = upoly::mul_mod(&acc, &v, &h, p);
                            acc[0] = fp::add(acc[0], coef, p);
                        }
                        acc
                    };
                    let inv = upoly::inv_mod(&eval(b), &h, p)?;
                    let t: Vec<u32> = upoly::mul_mod(&eval(a), &inv, &h, p).into_iter().map(|x| fp::neg(x, p)).collect();
                    clusters.push(PointCluster { modulus: h, chart: [t, v], multiplicity: mult });
                    continue;
                }
            };
            let h = if k == 1 { vec![0, 1] } else { h };
            clusters.push(PointCluster { modulus: h, chart: [c1, c2], multiplicity: mult });
        }
    }
    (points_distinct(&clusters, p) && rational_general_position(spec.ambient, &clusters, p)).then_some(clusters)
}

fn chart_exps(ambient: Ambient, basis: &[Monomial]) -> Vec<(u32, u32)> {
    basis.iter().map(|m| ambient.chart_exponent(m)).collect()
}

fn combine(ring: &Arc<RingSpec>, basis: &[Monomial], v: &[u32]) -> Polynomial {
    Polynomial::from_dense(ring, basis, v)
}

/// Base locus of the net of quadrics through the double points of a quadric
/// or cone model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseLocus {
    /// The residual eighth point, in ambient coordinates with `x0 = 1`.
    Point([u32; 4]),
    /// The quadrics share a curve through the points.
    Curve,
}

/// Residual base point of the quadrics through `nodes`. Multiplication by
/// `x_i` on the one-dimensional part of `(S/(net))_4` vanishing at the
/// known points is scalar, and the scalars are the coordinates of the point.
pub fn net_base_locus(ambient: Ambient, ring: &Arc<RingSpec>, nodes: &[&PointCluster]) -> Result<BaseLocus, CurveError> {
    if ambient == Ambient::Plane {
        return Err(CurveError::WrongAmbient("quadric or cone"));
    }
    let p = ring.p();
    let known: usize = nodes.iter().map(|c| c.len()).sum();
    let conds: Vec<(&PointCluster, u32)> = nodes.iter().map(|&c| (c, 1)).collect();
    let s2 = graded_piece_basis(ring, 2);
    let net: Vec<Polynomial> = solve_conditions(&chart_exps(ambient, &s2), &conds, p).iter().map(|v| combine(ring, &s2, v)).collect();
    if net.len() != 10 - known.min(10) || net.len() != 3 {
        return Err(CurveError::Rejected(format!("{} quadrics through {} points", net.len(), known)));
    }
    let (b4, piece4) = ideal_piece(ring, &net, 4);
    if b4.len() - piece4.dim() > known + 1 {
        return Ok(BaseLocus::Curve);
    }
    let s3 = graded_piece_basis(ring, 3);
    let (_, piece3) = ideal_piece(ring, &net, 3);
    let cubic = solve_conditions(&chart_exps(ambient, &s3), &conds, p)
        .into_iter()
        .map(|v| combine(ring, &s3, &v))
        .find(|f| !piece3.contains(&f.to_dense(&monomial_index(&s3), s3.len())))
        .ok_or_else(|| CurveError::Rejected("no cubic separates the residual point".into()))?;
    let idx4 = monomial_index(&b4);
    let images: Vec<Vec<u32>> = (0..4)
        .map(|i| {
            let mut v = cubic.mul_monomial(&Monomial::var(i), 1).to_dense(&idx4, b4.len());
            piece4.reduce(&mut v);
            v
        })
        .collect();
    let Some(j) = images[0].iter().position(|&x| x != 0) else {
        return Err(CurveError::Rejected("residual point off the chart".into()));
    };
    let inv = fp::inv(images[0][j], p);
    let mut q = [1u32; 4];
    for i in 1..4 {
        let lam = fp::mul(images[i][j], inv, p);
        if images[i].iter().zip(&images[0]).any(|(&a, &b)| a != fp::mul(lam, b, p)) {
            return Err(CurveError::Rejected("residual scheme is not a point".into()));
        }
        q[i] = lam;
    }
    let surf = ambient.surface_form(ring).expect("surface");
    if surf.evaluate(&q) != 0 {
        return Err(CurveError::Rejected("residual point off the surface".into()));
    }
    Ok(BaseLocus::Point(q))
}

fn chart_of_ambient(ambient: Ambient, q: &[u32; 4]) -> (u32, u32) {
    match ambient {
        Ambient::Quadric => (q[2], q[1]),
        _ => (q[1], q[3]),
    }
}

/// Draws points per `spec` and a random curve with the prescribed
/// multiplicities there, retrying degenerate draws.
pub fn impose_singularities(spec: &ModelSpec, p: u32, seed: u64) -> Result<CurveModel, CurveError> {
    if p == 2 {
        return Err(CurveError::Characteristic(p));
    }
    FieldSpec::prime(p as u64).map_err(|_| CurveError::Characteristic(p))?;
    let ring = spec.ambient.ring(p)?;
    let basis = graded_piece_basis(&ring, spec.degree);
    let exps = chart_exps(spec.ambient, &basis);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let Some(mut points) = draw_clusters(spec, p, &mut rng) else { continue };
        if spec.through_base_point {
            let nodes: Vec<&PointCluster> = points.iter().filter(|c| c.multiplicity == 2).collect();
            match net_base_locus(spec.ambient, &ring, &nodes) {
                Ok(BaseLocus::Point(q)) => {
                    let (c1, c2) = chart_of_ambient(spec.ambient, &q);
                    points.push(PointCluster::rational(c1, c2, 1));
                    if !points_distinct(&points, p) {
                        continue;
                    }
                }
                _ => continue,
            }
        }
        let conds: Vec<(&PointCluster, u32)> = points.iter().map(|c| (c, c.multiplicity)).collect();
        let kernel = solve_conditions(&exps, &conds, p);
        if kernel.is_empty() {
            if condition_count(&conds) >= basis.len() {
                return Err(CurveError::EmptySystem { degree: spec.degree, conditions: condition_count(&conds) });
            }
            continue;
        }
        let mut coeffs = vec![0u32; basis.len()];
        for v in &kernel {
            fp::axpy(&mut coeffs, v, rng.gen_range(0..p), p);
        }
        let form = combine(&ring, &basis, &coeffs);
        if form.is_zero() {
            continue;
        }
        if spec.ambient == Ambient::Cone {
            let top = Monomial::from_exponents(&[0, 0, 0, spec.degree])?;
            if form.coefficient(&top) == 0 {
                continue;
            }
        }
        let mut defining_forms: Vec<Polynomial> = spec.ambient.surface_form(&ring).into_iter().collect();
        defining_forms.push(form);
        let model = CurveModel { recipe: None, ambient: spec.ambient, degree: spec.degree, ring: ring.clone(), defining_forms, points, seed };
        if validate(&model).is_ok() {
            return Ok(model);
        }
    }
    Err(CurveError::Degenerate(MAX_ATTEMPTS))
}

type ChartPoly = Vec<((u32, u32), u32)>;

fn chart_poly(ambient: Ambient, f: &Polynomial, p: u32) -> ChartPoly {
    let mut acc: std::collections::BTreeMap<(u32, u32), u32> = Default::default();
    for (m, c) in f.terms() {
        let e = acc.entry(ambient.chart_exponent(m)).or_insert(0);
        *e = fp::add(*e, *c, p);
    }
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// Coefficients of `g(c1 + u, c2 + v)` at the local monomials `u^i v^j`
/// with `i + j < n`, as residues modulo the cluster modulus.
fn local_expansion(g: &ChartPoly, c: &PointCluster, n: u32, p: u32) -> Vec<((u32, u32), Vec<u32>)> {
    let k = c.len();
    let max1 = g.iter().map(|e| e.0 .0).max().unwrap_or(0);
    let max2 = g.iter().map(|e| e.0 .1).max().unwrap_or(0);
    let pw1 = c.powers(0, max1, p);
    let pw2 = c.powers(1, max2, p);
    let mut out = Vec::new();
    for total in 0..n {
        for i in 0..=total {
            let j = total - i;
            let mut acc = vec![0u32; k];
            for &((a, b), coef) in g {
                if a < i || b < j {
                    continue;
                }
                let w = fp::mul(coef, fp::mul(binom_mod(a, i, p), binom_mod(b, j, p), p), p);
                if w == 0 {
                    continue;
                }
                let v = upoly::mul_mod(&pw1[(a - i) as usize], &pw2[(b - j) as usize], &c.modulus, p);
                for (x, y) in acc.iter_mut().zip(v) {
                    *x = fp::add(*x, fp::mul(w, y, p), p);
                }
            }
            if acc.iter().any(|&x| x != 0) {
                out.push(((i, j), acc));
            }
        }
    }
    out
}

/// `dim k[[u,v]] / (J + m^n)` at one point of the cluster.
fn truncated_length(gens: &[ChartPoly], c: &PointCluster, n: u32, p: u32) -> usize {
    let monos: Vec<(u32, u32)> = (0..n).flat_map(|t| (0..=t).map(move |i| (i, t - i))).collect();
    let col = |i: u32, j: u32| {
        let t = i + j;
        (t * (t + 1) / 2 + i) as usize
    };
    let zero = vec![0u32; c.len()];
    let mut rows = Vec::new();
    for g in gens {
        let e = local_expansion(g, c, n, p);
        for &(a, b) in &monos {
            let mut row = vec![zero.clone(); monos.len()];
            let mut any = false;
            for ((i, j), v) in &e {
                if i + j + a + b < n {
                    row[col(i + a, j + b)] = v.clone();
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    monos.len() - upoly::rank(rows, monos.len(), &c.modulus, p)
}

/// Length of the local algebra of `gens` at a point of the cluster, or
/// `None` when it does not stabilise (the point is not isolated).
fn local_length(gens: &[ChartPoly], c: &PointCluster, p: u32) -> Option<usize> {
    let mut prev = truncated_length(gens, c, c.multiplicity.max(1), p);
    for n in c.multiplicity.max(1) + 1..=24 {
        let cur = truncated_length(gens, c, n, p);
        if cur == prev {
            return Some(cur);
        }
        prev = cur;
    }
    None
}

/// The point has multiplicity exactly `m` and `m` distinct tangents.
fn ordinary_at(g: &ChartPoly, c: &PointCluster, p: u32) -> bool {
    let m = c.multiplicity;
    let e = local_expansion(g, c, m + 1, p);
    if e.iter().any(|((i, j), _)| i + j < m) {
        return false;
    }
    let zero = vec![0u32; c.len()];
    let mut cone = vec![zero.clone(); m as usize + 1];
    for ((i, j), v) in e {
        if i + j == m {
            cone[i as usize] = v;
        }
    }
    if cone.iter().all(|x| x == &zero) {
        return false;
    }
    // multiples of T, dT/ds, dT/dt in degree 2m - 1 fill the space iff T is squarefree
    let scale = |x: &[u32], k: u32| x.iter().map(|&y| fp::mul(y, k % p, p)).collect::<Vec<_>>();
    let ds: Vec<Vec<u32>> = (1..=m as usize).map(|i| scale(&cone[i], i as u32)).collect();
    let dt: Vec<Vec<u32>> = (0..m as usize).map(|i| scale(&cone[i], m - i as u32)).collect();
    let target = 2 * m as usize;
    let mut rows = Vec::new();
    for f in [&cone, &ds, &dt] {
        let deg = f.len() - 1;
        for shift in 0..target - deg {
            let mut row = vec![zero.clone(); target];
            for (i, x) in f.iter().enumerate() {
                row[i + shift] = x.clone();
            }
            rows.push(row);
        }
    }
    upoly::rank(rows, target, &c.modulus, p) == target
}

/// Generators of the singular scheme of the curve: the form and its
/// partials in the plane, the surface, the form and the 2x2 minors of the
/// Jacobian in `P^3`.
fn singular_scheme_generators(m: &CurveModel) -> Result<Vec<Polynomial>, CurveError> {
    let n = m.ring.nvars();
    let f = m.curve_form();
    let mut gens = m.defining_forms.clone();
    match m.ambient.surface_form(&m.ring) {
        None => gens.extend((0..n).map(|i| f.partial_derivative(i))),
        Some(q) => {
            for i in 0..n {
                for j in i + 1..n {
                    let a = q.partial_derivative(i).mul(&f.partial_derivative(j))?;
                    let b = q.partial_derivative(j).mul(&f.partial_derivative(i))?;
                    gens.push(a.sub(&b)?);
                }
            }
        }
    }
    gens.retain(|g| !g.is_zero());
    Ok(gens)
}

/// Checks that the imposed points are ordinary and that the curve has no
/// further singular points, by comparing the length of the singular scheme
/// with the sum of its local lengths at the imposed points.
pub fn check_singularities(m: &CurveModel) -> Result<(), CurveError> {
    let p = m.p();
    let f = chart_poly(m.ambient, m.curve_form(), p);
    if let Some(c) = m.points.iter().find(|c| !ordinary_at(&f, c, p)) {
        return Err(CurveError::Rejected(format!("point of multiplicity {} is not ordinary", c.multiplicity)));
    }
    let gens = singular_scheme_generators(m)?;
    let local: Vec<ChartPoly> = gens.iter().map(|g| chart_poly(m.ambient, g, p)).collect();
    let mut imposed = 0;
    for c in &m.points {
        let l = local_length(&local, c, p).ok_or_else(|| CurveError::Rejected("non-isolated singularity".into()))?;
        imposed += l * c.len();
    }
    let gb = buchberger(&Ideal::new(&m.ring, gens)?, MonomialOrder::Grevlex);
    let start = gb.leading_monomials().iter().map(|l| l.total_degree()).max().unwrap_or(0);
    let mut prev = gb.standard_monomials(start)?.len();
    for d in start + 1..start + 40 {
        let cur = gb.standard_monomials(d)?.len();
        if cur == prev {
            if cur != imposed {
                return Err(CurveError::Rejected(format!("singular scheme of length {cur}, {imposed} at the imposed points")));
            }
            return Ok(());
        }
        prev = cur;
    }
    Err(CurveError::Rejected("singular locus is not finite".into()))
}

/// Adjoint dimension equals the genus and the canonical image lies on the
/// expected number of quadrics.
fn validate(m: &CurveModel) -> Result<(), CurveError> {
    check_singularities(m)?;
    let adj = adjoint_basis(m)?;
    let gb = buchberger(&m.curve_ideal()?, MonomialOrder::Grevlex);
    let g = adj.forms.len() as i64;
    let quadrics = canonical_piece(m, &adj, &gb, 2)?.len() as i64;
    let expected = g * (g + 1) / 2 - 3 * (g - 1);
    if quadrics != expected {
        return Err(CurveError::Rejected(format!("{quadrics} quadrics, expected {expected}")));
    }
    Ok(())
}

pub fn build_recipe(r: Recipe, p: u32, seed: u64) -> Result<CurveModel, CurveError> {
    let mut m = impose_singularities(&r.spec(), p, seed)?;
    m.recipe = Some(r);
    Ok(m)
}

/// Basis of the adjoint series: forms of the adjoint degree with
/// multiplicity `m - 1` at each imposed point, taken modulo the surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointBasis {
    pub degree: u32,
    pub forms: Vec<Polynomial>,
}

impl AdjointBasis {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }
}

pub fn adjoint_basis(m: &CurveModel) -> Result<AdjointBasis, CurveError> {
    let delta = m.ambient.adjoint_degree(m.degree);
    let genus = m.genus();
    if delta < 0 || genus < 1 {
        return Err(CurveError::Rejected(format!("genus {genus} has no canonical series")));
    }
    let delta = delta as u32;
    let p = m.p();
    let basis = graded_piece_basis(&m.ring, delta);
    let conds: Vec<(&PointCluster, u32)> = m.points.iter().map(|c| (c, c.multiplicity.saturating_sub(1))).collect();
    let kernel = solve_conditions(&chart_exps(m.ambient, &basis), &conds, p);
    let mut forms: Vec<Polynomial> = kernel.iter().map(|v| combine(&m.ring, &basis, v)).collect();
    if let Some(q) = m.ambient.surface_form(&m.ring) {
        let gb = buchberger(&Ideal::new(&m.ring, vec![q])?, MonomialOrder::Grevlex);
        let idx = monomial_index(&basis);
        let mut span = fp::RowSpace::new(basis.len(), p);
        let mut kept = Vec::new();
        for f in forms {
            let r = gb.normal_form(&f)?;
            if span.insert(r.to_dense(&idx, basis.len())) {
                kept.push(r);
            }
        }
        forms = kept;
    }
    if forms.len() as i64 != genus {
        return Err(CurveError::Rejected(format!("adjoint series of dimension {} for genus {genus}", forms.len())));
    }
    Ok(AdjointBasis { degree: delta, forms })
}

fn target_ring(m: &CurveModel, g: usize) -> Result<Arc<RingSpec>, CurveError> {
    Ok(RingSpec::standard(m.p(), "y", g)?)
}

/// Degree-`d` part of the kernel of `k[y] -> S/J`, `y_j -> adj_j`.
fn canonical_piece(m: &CurveModel, adj: &AdjointBasis, gb: &GroebnerBasis, d: u32) -> Result<Vec<Polynomial>, CurveError> {
    let g = adj.forms.len();
    let p = m.p();
    let yring = target_ring(m, g)?;
    let ybasis = graded_piece_basis(&yring, d);
    let std = gb.standard_monomials(d * adj.degree)?;
    let idx = monomial_index(&std);
    let mut images = Vec::with_capacity(ybasis.len());
    for mono in &ybasis {
        let mut prod = Polynomial::constant(&m.ring, 1);
        for (j, f) in adj.forms.iter().enumerate() {
            for _ in 0..mono.exponent(j) {
                prod = prod.mul(f)?;
            }
        }
        images.push(gb.normal_form(&prod)?.to_dense(&idx, std.len()));
    }
    let transposed: Vec<Vec<u32>> = (0..std.len()).map(|c| images.iter().map(|row| row[c]).collect()).collect();
    let kernel = fp::kernel(&transposed, ybasis.len(), p);
    Ok(kernel.iter().map(|v| Polynomial::from_dense(&yring, &ybasis, v)).collect())
}

/// Ideal of the canonical image in `P^{g-1}`, generated in degrees 2 and 3.
/// The Hilbert function `(2d - 1)(g - 1)` is checked in both degrees.
pub fn canonical_ideal(m: &CurveModel) -> Result<Ideal, CurveError> {
    let adj = adjoint_basis(m)?;
    canonical_ideal_from(m, &adj)
}

pub fn canonical_ideal_from(m: &CurveModel, adj: &AdjointBasis) -> Result<Ideal, CurveError> {
    let g = adj.forms.len() as i64;
    let gb = buchberger(&m.curve_ideal()?, MonomialOrder::Grevlex);
    let yring = target_ring(m, g as usize)?;
    let mut gens = Vec::new();
    for d in 2..=3u32 {
        let piece = canonical_piece(m, adj, &gb, d)?;
        let total = graded_piece_basis(&yring, d).len() as i64;
        let h = total - piece.len() as i64;
        if h != (2 * d as i64 - 1) * (g - 1) {
            return Err(CurveError::Rejected(format!("canonical image has h({d}) = {h}")));
        }
        gens.extend(piece);
    }
    Ok(minimal_generators(&Ideal::new(&yring, gens)?))
}

/// The canonical ideal through degree 3 computed by elimination from the
/// graph of the adjoint map.
pub fn canonical_ideal_by_elimination(m: &CurveModel) -> Result<Ideal, CurveError> {
    let adj = adjoint_basis(m)?;
    let yring = target_ring(m, adj.forms.len())?;
    let k = ring_map_kernel(&m.curve_ideal()?, &adj.forms, &yring, Some(3))?;
    let gens = k.generators().iter().filter(|g| g.degree().is_some_and(|d| d <= 3)).cloned().collect();
    Ok(minimal_generators(&Ideal::new(&yring, gens)?))
}

/// Betti table of a canonical curve of genus `g` from its ideal in `g`
/// variables, by cutting down with two random linear forms.
pub fn canonical_betti(ideal: &Ideal, seed: u64) -> Result<BettiTable, CurveError> {
    let g = ideal.ring().nvars();
    let opts = KoszulOptions { max_row: 3, multigraded: true };
    Ok(betti_via_artinian_reduction(ideal, 2, 2 * g - 2, seed, opts)?)
}

/// Outcome of generate, adjoint, canonical ideal and Betti table.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub model: CurveModel,
    pub ideal: Ideal,
    pub table: BettiTable,
    /// Draws rejected before this one.
    pub rejected: usize,
}

/// Runs the pipeline, rejecting and reseeding draws whose canonical image
/// fails the Hilbert or regular-sequence checks.
pub fn run_pipeline(r: Recipe, p: u32, seed: u64) -> Result<PipelineRun, CurveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    for _ in 0..20 {
        let sub: u64 = rng.gen();
        let attempt = (|| {
            let model = build_recipe(r, p, sub)?;
            let ideal = canonical_ideal(&model)?;
            let table = canonical_betti(&ideal, sub ^ 0x9e37_79b9_7f4a_7c15)?;
            Ok::<_, CurveError>(PipelineRun { model, ideal, table, rejected })
        })();
        match attempt {
            Ok(run) => return Ok(run),
            Err(CurveError::Rejected(_)) | Err(CurveError::Degenerate(_)) | Err(CurveError::Betti(BettiError::NoRegularSequence { .. })) => {
                rejected += 1
            }
            Err(e) => return Err(e),
        }
    }
    Err(CurveError::Degenerate(rejected))
}

/// A pencil on the model whose multiples are split off the adjoint series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pencil {
    /// Lines through the rational point of the given cluster (plane).
    LinesThrough(usize),
    /// The ruling of bidegree (1,0) (quadric).
    RulingA,
    /// The ruling of bidegree (0,1) (quadric).
    RulingB,
    /// Lines through the vertex (cone).
    ConeRuling,
}

/// `h^0(K - iD)` for `i = 0, 1, ...` down to 0, computed on the surface as
/// dimensions of adjoint subsystems.
pub fn section_partition(m: &CurveModel, pencil: Pencil) -> Result<SectionPartition, CurveError> {
    let p = m.p();
    let delta = m.ambient.adjoint_degree(m.degree);
    let mut h0 = Vec::new();
    for i in 0.. {
        let dim = section_dim(m, pencil, delta, i, p)?;
        h0.push(dim as u32);
        if dim == 0 {
            break;
        }
        if i > 2 * (delta.max(0) as u32) + 4 {
            return Err(CurveError::Rejected("pencil does not move".into()));
        }
    }
    Ok(SectionPartition::new(h0)?)
}

fn section_dim(m: &CurveModel, pencil: Pencil, delta: i64, i: u32, p: u32) -> Result<usize, CurveError> {
    let i64i = i as i64;
    let adj_order = |c: &PointCluster| c.multiplicity.saturating_sub(1);
    let (exps, conds): (Vec<(u32, u32)>, Vec<(&PointCluster, u32)>) = match (pencil, m.ambient) {
        (Pencil::LinesThrough(k), Ambient::Plane) => {
            let centre = m.points.get(k).filter(|c| c.len() == 1).ok_or(CurveError::WrongAmbient("plane with a rational centre"))?;
            let d = delta - i64i;
            if d < 0 {
                return Ok(0);
            }
            let basis = graded_piece_basis(&m.ring, d as u32);
            let conds = m
                .points
                .iter()
                .enumerate()
                .map(|(j, c)| if j == k { (c, (centre.multiplicity as i64 - 1 - i64i).max(0) as u32) } else { (c, adj_order(c)) })
                .collect();
            (chart_exps(Ambient::Plane, &basis), conds)
        }
        (Pencil::RulingA | Pencil::RulingB, Ambient::Quadric) => {
            let (a, b) = if pencil == Pencil::RulingA { (delta - i64i, delta) } else { (delta, delta - i64i) };
            if a < 0 || b < 0 {
                return Ok(0);
            }
            let exps = (0..=a as u32).flat_map(|x| (0..=b as u32).map(move |y| (x, y))).collect();
            (exps, m.points.iter().map(|c| (c, adj_order(c))).collect())
        }
        (Pencil::ConeRuling, Ambient::Cone) => {
            let mut exps = Vec::new();
            for gamma in 0..=delta.max(0) {
                let top = 2 * (delta - gamma) - i64i;
                for beta in 0..=top.max(-1) {
                    exps.push((beta as u32, gamma as u32));
                }
                if top < 0 {
                    exps.retain(|&(_, g)| g as i64 != gamma);
                }
            }
            (exps, m.points.iter().map(|c| (c, adj_order(c))).collect())
        }
        _ => return Err(CurveError::WrongAmbient("surface matching the pencil")),
    };
    Ok(solve_conditions(&exps, &conds, p).len())
}

/// Ruling of the quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceReport {
    pub base_locus: BaseLocus,
    /// The curve passes through the base locus, so a third pencil exists.
    pub has_third: bool,
    /// The ruling whose products with the pencil of (2,2)-forms through the
    /// nodes are dependent.
    pub coincides_with: Option<Factor>,
}

/// Base-point and product-dependence test on a (5,5) model with seven nodes.
pub fn third_g15_coincidence_test(m: &CurveModel) -> Result<CoincidenceReport, CurveError> {
    if m.ambient != Ambient::Quadric {
        return Err(CurveError::WrongAmbient("quadric"));
    }
    let p = m.p();
    let nodes: Vec<&PointCluster> = m.points.iter().filter(|c| c.multiplicity == 2).collect();
    let base_locus = net_base_locus(Ambient::Quadric, &m.ring, &nodes)?;
    let conds: Vec<(&PointCluster, u32)> = nodes.iter().map(|&c| (c, 1)).collect();
    let grid = |a: u32, b: u32| -> Vec<(u32, u32)> { (0..=a).flat_map(|x| (0..=b).map(move |y| (x, y))).collect() };
    let e22 = grid(2, 2);
    let pencil = solve_conditions(&e22, &conds, p);
    if pencil.len() != 2 {
        return Err(CurveError::Rejected(format!("{} forms of bidegree (2,2) through the nodes", pencil.len())));
    }
    let product_rank = |shift: (u32, u32)| {
        let target = grid(2 + shift.0, 2 + shift.1);
        let rows: Vec<Vec<u32>> = pencil
            .iter()
            .flat_map(|g| {
                [(0, 0), shift].map(|(dx, dy)| {
                    let mut row = vec![0u32; target.len()];
                    for (k, &(x, y)) in e22.iter().enumerate() {
                        let col = target.iter().position(|&e| e == (x + dx, y + dy)).expect("in range");
                        row[col] = g[k];
                    }
                    row
                })
            })
            .collect();
        fp::rank(rows, target.len(), p)
    };
    let coincides_with = if product_rank((1, 0)) < 4 {
        Some(Factor::A)
    } else if product_rank((0, 1)) < 4 {
        Some(Factor::B)
    } else {
        None
    };
    let has_third = match &base_locus {
        BaseLocus::Point(q) => m.curve_form().evaluate(q) == 0,
        BaseLocus::Curve => coincides_with.is_some(),
    };
    Ok(CoincidenceReport { base_locus, has_third, coincides_with })
}

/// The model as a class on the blowup of its surface at the imposed points.
pub fn model_class(m: &CurveModel) -> Result<(SurfaceLattice, DivisorClass), CurveError> {
    let mults: Vec<i64> = m.points.iter().flat_map(|c| std::iter::repeat_n(c.multiplicity as i64, c.len())).collect();
    let d = m.degree as i64;
    let (surface, base) = match m.ambient {
        Ambient::Plane => (Surface::P2, vec![d]),
        Ambient::Quadric => (Surface::P1xP1, vec![d, d]),
        Ambient::Cone => (Surface::F2, vec![d, 0]),
    };
    let lattice = SurfaceLattice::new(surface, mults.len(), vec![])?;
    let class = lattice.class(&base, &mults);
    Ok((lattice, class))
}
