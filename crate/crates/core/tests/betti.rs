mod common;

use common::ideals::{corpus, ideal, scroll, two_quadrics};
use syzygy::betti::*;
use syzygy::exactalg::FieldSpec;
use syzygy::groebner::{buchberger, Ideal};
use syzygy::polyring::{MonomialOrder, Polynomial, RingSpec};
use syzygy::scroll::eagon_northcott_betti;

fn maximal(n: usize) -> Ideal {
    let gens: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
    ideal(n, &refs)
}

#[test]
fn koszul_resolution_of_the_residue_field() {
    for n in 0..=8usize {
        let t = betti_via_koszul(&maximal(n + 1)).unwrap();
        for i in 0..=n + 1 {
            assert_eq!(t.get(i, i as u32) as i64, binomial(n as i64 + 1, i as i64), "n = {n}, i = {i}");
        }
        assert_eq!(t.entries().count(), n + 2);
    }
    let inv = invariants(&betti_via_koszul(&maximal(9)).unwrap());
    assert_eq!((inv.regularity, inv.projective_dimension, inv.depth), (0, 9, 0));
}

#[test]
fn complete_intersection_table() {
    let t = betti_via_koszul(&two_quadrics()).unwrap();
    assert_eq!(t, BettiTable::from_triples(4, &[(0, 0, 1), (1, 2, 2), (2, 4, 1)]));
    let inv = invariants(&t);
    assert_eq!((inv.regularity, inv.projective_dimension), (2, 2));
    assert!(inv.is_gorenstein_symmetric);
    let gb = buchberger(&two_quadrics(), MonomialOrder::Grevlex);
    assert_eq!(hilbert_from_betti(&t, 3, 3), 12);
    for d in 0..=6 {
        assert_eq!(hilbert_from_betti(&t, 3, d), gb.quotient_piece_dim(d).unwrap() as i64);
    }
}

#[test]
fn eagon_northcott_for_scrolls() {
    for e in ["2,1,1,1", "1,1,1", "2,2,1,0", "3,1,1,0", "1,1", "2,1", "3"] {
        let i = scroll(e);
        let f = i.generators().len();
        let t = betti_via_koszul(&i).unwrap();
        let cols = (1..).find(|c| c * (c - 1) / 2 == f).unwrap();
        assert_eq!(t, eagon_northcott_betti(cols), "S({e})");
        for k in 1..cols {
            assert_eq!(t.get(k, k as u32 + 1) as i64, k as i64 * binomial(cols as i64, k as i64 + 1));
        }
    }
}

#[test]
fn zero_ideal_hilbert_function() {
    let r = RingSpec::standard(10007, "x", 4).unwrap();
    let t = betti_via_koszul(&Ideal::new(&r, vec![]).unwrap()).unwrap();
    assert_eq!(t, BettiTable::from_triples(4, &[(0, 0, 1)]));
    for d in 0..6 {
        assert_eq!(hilbert_from_betti(&t, 3, d), binomial(3 + d as i64, 3));
    }
}

#[test]
fn canonical_table_invariants() {
    let t = BettiTable::from_rows(9, &[(0, 0, &[1]), (1, 1, &[21, 64, 70, 24]), (2, 3, &[24, 70, 64, 21]), (3, 7, &[1])]);
    let inv = invariants(&t);
    assert_eq!((inv.regularity, inv.projective_dimension, inv.depth), (3, 7, 2));
    assert!(inv.is_gorenstein_symmetric);
    let h: Vec<i64> = (0..6).map(|d| hilbert_from_betti(&t, 8, d)).collect();
    assert_eq!(h, vec![1, 9, 24, 40, 56, 72]);
}

#[test]
fn triples_round_trip_and_grid() {
    let t = betti_via_koszul(&scroll("2,1")).unwrap();
    assert_eq!(BettiTable::parse_triples(5, &t.to_triples()).unwrap(), t);
    assert_eq!(t.to_triples(), "0 0 1\n1 2 3\n2 3 2\n");
    let grid = t.to_string();
    assert!(grid.contains("1: - 3 2"), "{grid}");
    assert!(BettiTable::parse_triples(5, "1 2").is_err());
}

#[test]
fn resolution_of_small_ideals() {
    let c = free_resolution(&ideal(3, &["x0^2 + x1*x2"]), ResolutionLimits::default()).unwrap();
    assert_eq!(c.len(), 1);
    let c = free_resolution(&ideal(2, &["x0", "x1"]), ResolutionLimits::default()).unwrap();
    assert_eq!(c.betti_table(), BettiTable::from_triples(2, &[(0, 0, 1), (1, 1, 2), (2, 2, 1)]));
    let c = free_resolution(&ideal(6, &["x0*x4 - x1*x3", "x0*x5 - x2*x3", "x1*x5 - x2*x4"]), ResolutionLimits::default()).unwrap();
    let (_, t) = minimalize(&c);
    assert_eq!(t, BettiTable::from_triples(6, &[(0, 0, 1), (1, 2, 3), (2, 3, 2)]));
}

#[test]
fn refused_when_limits_are_hit() {
    let limits = ResolutionLimits { max_len: 8, max_deg: 3, max_piece: 20_000 };
    assert!(matches!(free_resolution(&scroll("2,2,1,0"), limits), Err(BettiError::ResourceCeiling(_))));
}

#[test]
fn single_cancellation() {
    let r = RingSpec::standard(10007, "x", 1).unwrap();
    let x = Polynomial::var(&r, 0);
    let one = Polynomial::constant(&r, 1);
    let c = FreeComplex::new(&r, vec![vec![0], vec![1, 1], vec![1]], vec![vec![vec![x.clone(), x.clone()]], vec![vec![one.clone()], vec![one.neg()]]]);
    assert!(c.is_complex());
    let (m, t) = minimalize(&c);
    assert!(m.is_complex());
    assert_eq!((m.rank(1), m.rank(2)), (1, 0));
    assert_eq!(t, BettiTable::from_triples(1, &[(0, 0, 1), (1, 1, 1)]));
    let (again, t2) = minimalize(&m);
    assert_eq!(again.betti_table(), m.betti_table());
    assert_eq!(t2, t);
}

#[test]
fn minimalized_resolutions_match_koszul() {
    for (name, i) in corpus() {
        let k = betti_via_koszul_with(&i, KoszulOptions { max_row: 6, multigraded: true }).unwrap();
        let c = free_resolution(&i, ResolutionLimits::default()).unwrap();
        assert!(c.is_complex(), "{name}");
        let (m, t) = minimalize(&c);
        assert!(m.is_complex(), "{name}");
        assert_eq!(t, k, "{name}");
    }
}

#[test]
fn multigrading_does_not_change_ranks() {
    for (name, i) in corpus() {
        let a = betti_via_koszul_with(&i, KoszulOptions { max_row: 4, multigraded: true }).unwrap();
        let b = betti_via_koszul_with(&i, KoszulOptions { max_row: 4, multigraded: false }).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn artinian_reduction_preserves_the_table() {
    let i = scroll("2,1,1,1");
    let direct = betti_via_koszul(&i).unwrap();
    // the scroll is a 4-fold of degree 5, its affine cone has dimension 5
    let reduced = betti_via_artinian_reduction(&i, 5, 5, 3, KoszulOptions::default()).unwrap();
    assert_eq!(reduced.entries().collect::<Vec<_>>(), direct.entries().collect::<Vec<_>>());
    assert!(matches!(betti_via_artinian_reduction(&i, 5, 6, 3, KoszulOptions::default()), Err(BettiError::NoRegularSequence { .. })));
}

#[test]
fn weighted_rings_are_refused() {
    let r = RingSpec::new(FieldSpec::Prime(101), vec!["a".into(), "b".into()], Some(vec![1, 2])).unwrap();
    let i = Ideal::new(&r, vec![Polynomial::parse(&r, "a^2 - b").unwrap()]).unwrap();
    assert!(matches!(betti_via_koszul(&i), Err(BettiError::NotStandardGraded)));
}
