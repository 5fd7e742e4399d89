use proptest::prelude::*;
use syzygy::picard::*;

fn p2(s: usize, near: Vec<(usize, usize)>) -> SurfaceLattice {
    SurfaceLattice::new(Surface::P2, s, near).unwrap()
}
fn quadric(s: usize, near: Vec<(usize, usize)>) -> SurfaceLattice {
    SurfaceLattice::new(Surface::P1xP1, s, near).unwrap()
}
fn cone(s: usize, near: Vec<(usize, usize)>) -> SurfaceLattice {
    SurfaceLattice::new(Surface::F2, s, near).unwrap()
}

#[test]
fn intersection_fixtures() {
    let l = p2(6, vec![]);
    assert_eq!(l.self_intersection(&l.uniform(&[4], 1)).unwrap(), 10);
    let q = quadric(7, vec![]);
    assert_eq!(q.self_intersection(&q.uniform(&[3, 3], 1)).unwrap(), 11);
    let c = l.uniform(&[7], 2);
    let e = l.exceptional(3);
    assert_eq!(l.intersect(&e, &c.sub(&e)).unwrap(), 3);
    let f = cone(7, vec![]);
    assert_eq!(f.self_intersection(&f.uniform(&[5, 0], 2)).unwrap(), 22);
    assert_eq!(f.self_intersection(&f.parse_class("H-2R").unwrap()).unwrap(), -2);
}

#[test]
fn canonical_adjoints() {
    let l = p2(6, vec![]);
    assert_eq!(l.uniform(&[7], 2).add(&l.canonical_class()), l.uniform(&[4], 1));
    let q = quadric(7, vec![]);
    assert_eq!(q.uniform(&[5, 5], 2).add(&q.canonical_class()), q.uniform(&[3, 3], 1));
    let f = cone(7, vec![]);
    assert_eq!(f.uniform(&[5, 0], 2).add(&f.canonical_class()), f.uniform(&[3, 0], 1));
}

#[test]
fn genera() {
    let q = quadric(7, vec![]);
    assert_eq!(q.arithmetic_genus(&q.uniform(&[3, 3], 1)).unwrap(), 4);
    assert_eq!(q.arithmetic_genus(&q.uniform(&[5, 5], 2)).unwrap(), 9);
    let l = p2(6, vec![]);
    assert_eq!(l.arithmetic_genus(&l.uniform(&[4], 1)).unwrap(), 3);
    assert_eq!(l.arithmetic_genus(&l.uniform(&[7], 2)).unwrap(), 9);
    let f = cone(7, vec![]);
    assert_eq!(f.arithmetic_genus(&f.uniform(&[5, 0], 2)).unwrap(), 9);
    assert_eq!(f.arithmetic_genus(&f.uniform(&[3, 0], 1)).unwrap(), 4);
}

#[test]
fn castelnuovo_section_has_genus_two() {
    let l = p2(4, vec![]);
    let g = l.class(&[4], &[2, 1, 1, 1]);
    assert_eq!(l.self_intersection(&g).unwrap(), 9);
    assert_eq!(l.arithmetic_genus(&g).unwrap(), 2);
}

#[test]
fn genus_of_rational_classes() {
    let l = p2(1, vec![]);
    let d = l.parse_class("H").unwrap();
    assert_eq!(l.arithmetic_genus(&d).unwrap(), 0);
    let q = quadric(0, vec![]);
    assert_eq!(q.arithmetic_genus(&q.parse_class("(1,0)").unwrap()).unwrap(), 0);
    let f = cone(0, vec![]);
    // R.(R+K) = R.(R-2H) = -2
    assert_eq!(f.arithmetic_genus(&f.parse_class("R").unwrap()).unwrap(), 0);
}

#[test]
fn septic_generic_is_very_ample() {
    let l = p2(6, vec![]);
    let c = l.uniform(&[7], 2);
    assert!(l.critical_divisors(&c, 0).unwrap().is_empty());
    assert!(l.critical_divisors(&c, 1).unwrap().is_empty());
    assert_eq!(l.ampleness_verdict(&c, 1).unwrap().verdict, Verdict::Holds);
}

#[test]
fn septic_near_pair_is_one_critical() {
    let l = p2(6, vec![(2, 3)]);
    let c = l.uniform(&[7], 2);
    assert!(l.critical_divisors(&c, 0).unwrap().is_empty());
    let crit = l.critical_divisors(&c, 1).unwrap();
    let expected = l.exceptional(2).sub(&l.exceptional(3));
    assert_eq!(crit, vec![(expected.clone(), 2)]);
    assert_eq!(l.ampleness_verdict(&c, 1).unwrap().verdict, Verdict::HoldsOutside(vec![expected]));
}

#[test]
fn quadric_cases() {
    let q = quadric(7, vec![]);
    let c = q.uniform(&[5, 5], 2);
    assert!(q.critical_divisors(&c, 0).unwrap().is_empty());
    assert!(q.critical_divisors(&c, 1).unwrap().is_empty());
    let q = quadric(7, vec![(4, 5)]);
    let crit: Vec<_> = q.critical_divisors(&c, 1).unwrap().into_iter().map(|x| x.0).collect();
    assert_eq!(crit, vec![q.exceptional(4).sub(&q.exceptional(5))]);
}

#[test]
fn cone_exceptional_section() {
    let f = cone(7, vec![]);
    let c = f.uniform(&[5, 0], 2);
    assert!(f.critical_divisors(&c, 0).unwrap().is_empty());
    let crit: Vec<_> = f.critical_divisors(&c, 1).unwrap().into_iter().map(|x| x.0).collect();
    assert_eq!(crit, vec![f.parse_class("H-2R").unwrap()]);
    let f = cone(7, vec![(1, 2), (5, 6)]);
    let crit: Vec<_> = f.critical_divisors(&c, 1).unwrap().into_iter().map(|x| x.0).collect();
    let mut expected = vec![f.parse_class("H-2R").unwrap(), f.parse_class("E1-E2").unwrap(), f.parse_class("E5-E6").unwrap()];
    expected.sort_by(|a, b| (&a.base, &a.exc).cmp(&(&b.base, &b.exc)));
    assert_eq!(crit, expected);
}

#[test]
fn reider_inapplicable() {
    let l = p2(0, vec![]);
    let c = l.parse_class("2H").unwrap();
    assert!(matches!(l.critical_divisors(&c, 0), Err(PicardError::ReiderInapplicable { .. })));
    assert!(!l.ampleness_verdict(&c, 1).unwrap().applicable);
}

#[test]
fn adjoint_polynomials() {
    let l = p2(6, vec![]);
    assert_eq!(l.adjoint_hilbert_poly(&l.uniform(&[7], 2)).unwrap(), (10, 3, 1));
    let l = p2(1, vec![]);
    assert_eq!(l.adjoint_hilbert_poly(&l.uniform(&[6], 2)).unwrap(), (8, 4, 1));
    let l = p2(7, vec![]);
    assert_eq!(l.adjoint_hilbert_poly(&l.class(&[8], &[4, 2, 2, 2, 2, 2, 2])).unwrap(), (10, 3, 1));
}

#[test]
fn brill_noether() {
    assert_eq!(brill_noether_rho(9, 2, 8), 0);
    assert_eq!(brill_noether_rho(9, 2, 7), -3);
    assert_eq!(brill_noether_rho(9, 0, 0), 0);
    assert_eq!(brill_noether_rho(9, 1, 5), -1);
}

#[test]
fn class_parser_and_display_round_trip() {
    let l = p2(6, vec![]);
    let d = l.parse_class("7H-2E{1-6}").unwrap();
    assert_eq!(l.display(&d), "7H-2E1-2E2-2E3-2E4-2E5-2E6");
    assert_eq!(l.parse_class(&l.display(&d)).unwrap(), d);
    let q = quadric(7, vec![]);
    assert_eq!(q.parse_class("5A+5B-2E{1-7}").unwrap(), q.parse_class("(5,5)-2E{1-7}").unwrap());
    let e = q.exceptional(4).sub(&q.exceptional(5));
    assert_eq!(q.display(&e), "E4-E5");
    assert_eq!(q.parse_class(&q.display(&e)).unwrap(), e);
    assert!(l.parse_class("7Q").is_err());
    assert!(l.parse_class("H-E9").is_err());
}

fn class_strategy(s: usize) -> impl Strategy<Value = DivisorClass> {
    (proptest::collection::vec(-6i64..=6, 2), proptest::collection::vec(-3i64..=3, s)).prop_map(|(base, exc)| DivisorClass { base, exc })
}

proptest! {
    #[test]
    fn intersection_is_symmetric_bilinear(a in class_strategy(5), b in class_strategy(5), c in class_strategy(5), k in -3i64..=3) {
        for base in [Surface::P1xP1, Surface::F2] {
            let l = SurfaceLattice::new(base, 5, vec![]).unwrap();
            prop_assert_eq!(l.intersect(&a, &b).unwrap(), l.intersect(&b, &a).unwrap());
            let lhs = l.intersect(&a.add(&c.scale(k)), &b).unwrap();
            prop_assert_eq!(lhs, l.intersect(&a, &b).unwrap() + k * l.intersect(&c, &b).unwrap());
        }
    }

    #[test]
    fn zero_critical_within_one_critical(base in 0usize..3, near in proptest::option::of(1usize..6)) {
        let (surface, c) = match base {
            0 => (Surface::P2, (vec![7], 6)),
            1 => (Surface::P1xP1, (vec![5, 5], 7)),
            _ => (Surface::F2, (vec![5, 0], 7)),
        };
        let l = SurfaceLattice::new(surface, c.1, near.map(|k| vec![(k, k + 1)]).unwrap_or_default()).unwrap();
        let cls = l.uniform(&c.0, 2);
        let z = l.critical_divisors(&cls, 0).unwrap();
        let o = l.critical_divisors(&cls, 1).unwrap();
        prop_assert!(z.iter().all(|x| o.contains(x)));
    }

    #[test]
    fn added_near_pair_becomes_critical(k in 1usize..6) {
        let l = p2(6, vec![]);
        let c = l.uniform(&[7], 2);
        prop_assert_eq!(l.ampleness_verdict(&c, 1).unwrap().verdict, Verdict::Holds);
        let n = l.with_near_pair(k).unwrap();
        let crit: Vec<_> = n.critical_divisors(&c, 1).unwrap().into_iter().map(|x| x.0).collect();
        prop_assert!(crit.contains(&n.exceptional(k).sub(&n.exceptional(k + 1))));
    }
}
