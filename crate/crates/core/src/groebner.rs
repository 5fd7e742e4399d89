//! Gröbner bases of homogeneous ideals: a degree-by-degree Buchberger engine
//! with the Gebauer–Möller pair update, normal forms, graded quotient
//! dimensions and kernels of ring maps by elimination.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::exactalg::fp;
use crate::polyring::{graded_piece_basis, Monomial, MonomialOrder, OrderKey, PolyError, Polynomial, RingSpec, MAX_VARS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("degree {degree} lies beyond the truncation degree {bound}")]
    BeyondTruncation { degree: u32, bound: u32 },
    #[error("ring map forms must share one degree")]
    UnequalDegrees,
    #[error("a ring map needs at least two forms and one per target variable")]
    FormCount,
    #[error("target ring must be standard graded over the same field")]
    BadTarget,
    #[error("graph ring would need {0} variables")]
    TooManyVariables(usize),
}

/// A homogeneous ideal given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<RingSpec>,
    generators: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped; all others must be homogeneous.
    pub fn new(ring: &Arc<RingSpec>, generators: Vec<Polynomial>) -> Result<Self, GroebnerError> {
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if g.ring() != ring {
                return Err(GroebnerError::RingMismatch);
            }
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(GroebnerError::NotHomogeneous(i));
            }
            gens.push(g);
        }
        Ok(Ideal { ring: ring.clone(), generators: gens })
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Ideal { ring: ring.clone(), generators: Vec::new() }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of generators of each degree.
    pub fn degree_counts(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for g in &self.generators {
            *m.entry(g.degree().unwrap_or(0)).or_insert(0) += 1;
        }
        m
    }
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    degree: u32,
}

/// A reduced Gröbner basis, optionally only valid through a degree bound.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ideal: Ideal,
    order: MonomialOrder,
    elements: Vec<Polynomial>,
    leading: Vec<Monomial>,
    truncated_at: Option<u32>,
}

impl GroebnerBasis {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }
    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ideal.ring
    }
    pub fn order(&self) -> MonomialOrder {
        self.order
    }
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }
    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }
    /// `Some(D)` when pairs or generators above degree `D` were skipped.
    pub fn truncated_at(&self) -> Option<u32> {
        self.truncated_at
    }

    fn check_degree(&self, d: u32) -> Result<(), GroebnerError> {
        match self.truncated_at {
            Some(bound) if d > bound => Err(GroebnerError::BeyondTruncation { degree: d, bound }),
            _ => Ok(()),
        }
    }

    fn reducer_for(&self, m: &Monomial) -> Option<usize> {
        self.leading.iter().position(|l| l.divides(m))
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.reducer_for(m).is_none()
    }

    /// Fully reduced remainder of `f`.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial, GroebnerError> {
        let ring = self.ring();
        if f.ring() != ring {
            return Err(GroebnerError::RingMismatch);
        }
        if let Some(d) = f.degree() {
            self.check_degree(d)?;
        }
        let p = ring.p();
        let mut work: BTreeMap<OrderKey, (Monomial, u32)> =
            f.terms().iter().map(|&(m, c)| (ring.key(self.order, &m), (m, c))).collect();
        let mut rest = Vec::new();
        while let Some((_, (m, c))) = work.pop_last() {
            match self.reducer_for(&m) {
                None => rest.push((m, c)),
                Some(g) => {
                    let q = self.leading[g].quotient_of(&m).expect("divides");
                    let factor = fp::neg(c, p);
                    for &(t, a) in self.elements[g].terms() {
                        let tm = t.mul(&q);
                        if tm == m {
                            continue;
                        }
                        let key = ring.key(self.order, &tm);
                        let e = work.entry(key).or_insert((tm, 0));
                        e.1 = fp::add(e.1, fp::mul(a, factor, p), p);
                        if e.1 == 0 {
                            work.remove(&key);
                        }
                    }
                }
            }
        }
        Ok(Polynomial::from_terms(ring, rest))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Degree-`d` monomials outside the leading-term ideal, in descending
    /// grevlex order; they form a basis of `(S/I)_d`.
    pub fn standard_monomials(&self, d: u32) -> Result<Vec<Monomial>, GroebnerError> {
        self.check_degree(d)?;
        Ok(graded_piece_basis(self.ring(), d).into_iter().filter(|m| self.is_standard(m)).collect())
    }

    /// `dim_k (S/I)_d`.
    pub fn quotient_piece_dim(&self, d: u32) -> Result<usize, GroebnerError> {
        Ok(self.standard_monomials(d)?.len())
    }
}

fn sparse_key_sorted(ring: &RingSpec, order: MonomialOrder, monos: impl IntoIterator<Item = Monomial>) -> Vec<Monomial> {
    let mut v: Vec<(OrderKey, Monomial)> = monos.into_iter().map(|m| (ring.key(order, &m), m)).collect();
    v.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
    v.into_iter().map(|x| x.1).collect()
}

/// Reduced Gröbner basis.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    buchberger_truncated(ideal, order, None)
}

/// Reduced Gröbner basis through degree `max_degree` (all degrees when
/// `None`). Pairs are processed by ascending degree, ties by pair index;
/// each degree is reduced at once by dense elimination over the monomials
/// involved.
pub fn buchberger_truncated(ideal: &Ideal, order: MonomialOrder, max_degree: Option<u32>) -> GroebnerBasis {
    let ring = ideal.ring.clone();
    let p = ring.p();
    let mut pending: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
    for g in &ideal.generators {
        pending.entry(g.degree().unwrap_or(0)).or_default().push(g.clone());
    }
    let mut elements: Vec<Polynomial> = Vec::new();
    let mut leading: Vec<Monomial> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut truncated = false;

    loop {
        let pd = pairs.iter().map(|q| q.degree).min();
        let gd = pending.keys().next().copied();
        let d = match (pd, gd) {
            (None, None) => break,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        if max_degree.is_some_and(|bound| d > bound) {
            truncated = true;
            break;
        }
        let mut batch: Vec<Pair> = Vec::new();
        pairs.retain(|q| {
            if q.degree == d {
                batch.push(q.clone());
                false
            } else {
                true
            }
        });
        batch.sort_by_key(|q| (q.i, q.j));
        let gens = pending.remove(&d).unwrap_or_default();

        // Symbolic preprocessing.
        let mut rows: Vec<Vec<(Monomial, u32)>> = Vec::new();
        let mut covered: HashSet<Monomial> = HashSet::new();
        let mut seen: HashSet<Monomial> = HashSet::new();
        let mut queue: Vec<Monomial> = Vec::new();
        let push_row = |row: Vec<(Monomial, u32)>, seen: &mut HashSet<Monomial>, queue: &mut Vec<Monomial>, rows: &mut Vec<_>| {
            for &(m, _) in &row {
                if seen.insert(m) {
                    queue.push(m);
                }
            }
            rows.push(row);
        };
        for q in &batch {
            for (k, &g) in [q.i, q.j].iter().enumerate() {
                let u = leading[g].quotient_of(&q.lcm).expect("lcm");
                let row = elements[g].mul_monomial(&u, 1).terms().to_vec();
                if k == 0 {
                    covered.insert(q.lcm);
                }
                push_row(row, &mut seen, &mut queue, &mut rows);
            }
        }
        for g in gens {
            push_row(g.terms().to_vec(), &mut seen, &mut queue, &mut rows);
        }
        while let Some(m) = queue.pop() {
            if covered.contains(&m) {
                continue;
            }
            if let Some(g) = leading.iter().position(|l| l.divides(&m)) {
                covered.insert(m);
                let u = leading[g].quotient_of(&m).expect("divides");
                let row = elements[g].mul_monomial(&u, 1).terms().to_vec();
                push_row(row, &mut seen, &mut queue, &mut rows);
            }
        }
        if rows.is_empty() {
            continue;
        }

        // Dense elimination with columns in descending order.
        let cols = sparse_key_sorted(&ring, order, seen.iter().copied());
        let index: HashMap<Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut dense: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![0u32; cols.len()];
                for &(m, c) in r {
                    v[index[&m]] = c;
                }
                v
            })
            .collect();
        let pivots = fp::echelon(&mut dense, cols.len(), p, true, fp::Pivoting::FirstNonzero);
        for (row, &pc) in dense.iter().zip(&pivots) {
            if covered.contains(&cols[pc]) {
                continue;
            }
            let poly = Polynomial::from_dense(&ring, &cols, row);
            let h = elements.len();
            elements.push(poly);
            leading.push(cols[pc]);
            gm_update(&mut pairs, &leading, &mut active, h, ring.weights());
        }
    }

    let mut out: Vec<(Polynomial, Monomial)> = active.iter().map(|&i| (elements[i].clone(), leading[i])).collect();
    out.sort_by(|a, b| {
        let (ka, kb) = (ring.key(order, &a.1), ring.key(order, &b.1));
        ka.cmp(&kb)
    });
    let (elements, leading) = out.into_iter().unzip();
    GroebnerBasis {
        ideal: ideal.clone(),
        order,
        elements,
        leading,
        truncated_at: if truncated { max_degree } else { None },
    }
}

fn gm_update(pairs: &mut Vec<Pair>, lts: &[Monomial], active: &mut Vec<usize>, h: usize, weights: &[u32]) {
    let lh = lts[h];
    let cands: Vec<(usize, Monomial)> = active.iter().map(|&g| (g, lh.lcm(&lts[g]))).collect();
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for (idx, &(g1, l1)) in cands.iter().enumerate() {
        let coprime = lh.is_coprime(&lts[g1]);
        let dominated = cands[idx + 1..].iter().any(|(_, l2)| l2.divides(&l1)) || kept.iter().any(|(_, l2, _)| l2.divides(&l1));
        if coprime || !dominated {
            kept.push((g1, l1, coprime));
        }
    }
    pairs.retain(|q| !(lh.divides(&q.lcm) && lh.lcm(&lts[q.i]) != q.lcm && lh.lcm(&lts[q.j]) != q.lcm));
    for (g, l, coprime) in kept {
        if !coprime {
            pairs.push(Pair { i: g, j: h, lcm: l, degree: l.weighted_degree(weights) });
        }
    }
    active.retain(|&g| !lh.divides(&lts[g]));
    active.push(h);
}

/// Minimal homogeneous generators of the ideal, chosen greedily in degree
/// order from the given generators.
pub fn minimal_generators(ideal: &Ideal) -> Ideal {
    let ring = ideal.ring();
    let p = ring.p();
    let mut by_deg: BTreeMap<u32, Vec<&Polynomial>> = BTreeMap::new();
    for g in ideal.generators() {
        by_deg.entry(g.degree().unwrap_or(0)).or_default().push(g);
    }
    let mut chosen: Vec<Polynomial> = Vec::new();
    for (&d, gens) in &by_deg {
        let basis = graded_piece_basis(ring, d);
        let index = crate::polyring::monomial_index(&basis);
        let mut span = fp::RowSpace::new(basis.len(), p);
        for c in &chosen {
            let e = d - c.degree().unwrap_or(0);
            for m in graded_piece_basis(ring, e) {
                span.insert(c.mul_monomial(&m, 1).to_dense(&index, basis.len()));
            }
        }
        for g in gens {
            if span.insert(g.to_dense(&index, basis.len())) {
                chosen.push((*g).clone());
            }
        }
    }
    Ideal { ring: ring.clone(), generators: chosen }
}

/// Degree-`d` piece of the ideal generated by `gens` as a row space over
/// the monomial basis of `S_d`.
pub fn ideal_piece(ring: &Arc<RingSpec>, gens: &[Polynomial], d: u32) -> (Vec<Monomial>, fp::RowSpace) {
    let basis = graded_piece_basis(ring, d);
    let index = crate::polyring::monomial_index(&basis);
    let mut span = fp::RowSpace::new(basis.len(), ring.p());
    for g in gens {
        let Some(e) = g.degree() else { continue };
        if e > d {
            continue;
        }
        for m in graded_piece_basis(ring, d - e) {
            span.insert(g.mul_monomial(&m, 1).to_dense(&index, basis.len()));
        }
    }
    (basis, span)
}

/// Relations among `forms` modulo `source`: the kernel of
/// `k[y_0..y_m] -> S/source`, `y_j -> forms[j]`, computed from the graph
/// ideal with `y`-weights equal to the form degree under a block
/// elimination order. With `max_target_degree` only relations through that
/// degree are computed.
pub fn ring_map_kernel(
    source: &Ideal,
    forms: &[Polynomial],
    target: &Arc<RingSpec>,
    max_target_degree: Option<u32>,
) -> Result<Ideal, GroebnerError> {
    let sring = source.ring();
    if forms.len() < 2 || forms.len() != target.nvars() {
        return Err(GroebnerError::FormCount);
    }
    if !target.is_standard_graded() || target.p() != sring.p() {
        return Err(GroebnerError::BadTarget);
    }
    let delta = forms[0].degree().ok_or(GroebnerError::UnequalDegrees)?;
    for f in forms {
        if f.ring() != sring {
            return Err(GroebnerError::RingMismatch);
        }
        if !f.is_homogeneous() || f.degree() != Some(delta) {
            return Err(GroebnerError::UnequalDegrees);
        }
    }
    let nx = sring.nvars();
    let ny = target.nvars();
    if nx + ny > MAX_VARS {
        return Err(GroebnerError::TooManyVariables(nx + ny));
    }
    let mut names: Vec<String> = sring.names().to_vec();
    for (j, n) in target.names().iter().enumerate() {
        let name = if names.contains(n) { format!("_y{j}") } else { n.clone() };
        names.push(name);
    }
    let mut weights = sring.weights().to_vec();
    weights.extend(std::iter::repeat_n(delta, ny));
    let graph = RingSpec::new(sring.field(), names, Some(weights))?;
    let p = sring.p();
    let mut gens = Vec::new();
    for g in source.generators() {
        gens.push(g.reinterpret(&graph)?);
    }
    for (j, f) in forms.iter().enumerate() {
        let mut terms: Vec<(Monomial, u32)> = f.terms().iter().map(|&(m, c)| (m, fp::neg(c, p))).collect();
        terms.push((Monomial::var(nx + j), 1));
        gens.push(Polynomial::from_terms(&graph, terms));
    }
    let gideal = Ideal::new(&graph, gens)?;
    let gb = buchberger_truncated(&gideal, MonomialOrder::BlockElim(nx), max_target_degree.map(|d| d * delta));
    let mut out = Vec::new();
    for (g, lt) in gb.elements().iter().zip(gb.leading_monomials()) {
        if (0..nx).any(|i| lt.exponent(i) > 0) {
            continue;
        }
        let terms = g
            .terms()
            .iter()
            .map(|&(m, c)| {
                let mut e = [0u8; MAX_VARS];
                e[..ny].copy_from_slice(&m.0[nx..nx + ny]);
                (Monomial(e), c)
            })
            .collect();
        out.push(Polynomial::from_terms(target, terms));
    }
    Ideal::new(target, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let r = RingSpec::standard(10007, "x", 3).unwrap();
        let f = Polynomial::parse(&r, "x0^2 - x1*x2").unwrap();
        let gb = buchberger(&Ideal::new(&r, vec![f.clone()]).unwrap(), MonomialOrder::Grevlex);
        assert_eq!(gb.elements().len(), 1);
        assert_eq!(gb.quotient_piece_dim(2).unwrap(), 5);
    }

    #[test]
    fn twisted_cubic_kernel() {
        let r = RingSpec::standard(10007, "s", 2).unwrap();
        let t = RingSpec::standard(10007, "y", 4).unwrap();
        let forms: Vec<_> = ["s0^3", "s0^2*s1", "s0*s1^2", "s1^3"].iter().map(|f| Polynomial::parse(&r, f).unwrap()).collect();
        let k = ring_map_kernel(&Ideal::zero(&r), &forms, &t, None).unwrap();
        assert_eq!(k.degree_counts().into_iter().collect::<Vec<_>>(), vec![(2, 3)]);
    }
}
