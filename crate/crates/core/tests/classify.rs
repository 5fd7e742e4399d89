use proptest::prelude::*;
use syzygy::betti::{invariants, BettiTable};
use syzygy::classify::*;
use syzygy::scroll::{ScrollType, SectionPartition};

fn s(e: &[u32]) -> ScrollType {
    ScrollType::new(e.to_vec()).unwrap()
}

#[test]
fn catalog_shape() {
    let c = catalog();
    assert_eq!(c.len(), 12);
    assert_eq!(c.iter().filter(|e| e.constraint == CharConstraint::Char3).count(), 3);
    for e in &c {
        let inv = invariants(&e.table);
        assert!(inv.is_gorenstein_symmetric, "{}", e.label);
        assert_eq!((inv.regularity, inv.projective_dimension), (3, 7));
        assert_eq!(e.table.get(1, 2), 21);
        assert_eq!(e.table.get(7, 10), 1);
    }
}

#[test]
fn catalog_tables_have_genus_nine_hilbert_function() {
    use syzygy::betti::hilbert_from_betti;
    for e in catalog() {
        let h: Vec<i64> = (0..6).map(|d| hilbert_from_betti(&e.table, 8, d)).collect();
        assert_eq!(h, vec![1, 9, 24, 40, 56, 72], "{}", e.label);
    }
}

#[test]
fn round_trip_every_entry() {
    for e in catalog() {
        for ch in [3u32, 10007] {
            if e.constraint.admits(ch) {
                let t = expected_table(e.label, ch).unwrap();
                assert_eq!(classify(&t, ch).unwrap().label, e.label);
            }
        }
    }
}

#[test]
fn labelled_examples() {
    let r = classify(&expected_table("general", 10007).unwrap(), 10007).unwrap();
    assert_eq!((r.label.as_str(), r.clifford_index, r.k_g15), ("general", 4, None));
    let r = classify(&expected_table("g72", 10007).unwrap(), 10007).unwrap();
    assert_eq!((r.label.as_str(), r.clifford_index, r.k_g15), ("g72", 3, None));
    let r = classify(&expected_table("g13", 10007).unwrap(), 10007).unwrap();
    assert_eq!((r.label.as_str(), r.clifford_index), ("g13", 1));
    for (l, k) in [("one_g15", 1), ("two_g15", 2), ("three_g15", 3)] {
        let r = classify(&expected_table(l, 10007).unwrap(), 10007).unwrap();
        assert_eq!(r.k_g15, Some(k));
        assert_eq!(r.clifford_index, 3);
    }
}

#[test]
fn clifford_readings() {
    let c = |l| clifford_from_betti(&expected_table(l, 10007).unwrap());
    assert_eq!(c("g62"), 2);
    assert_eq!(c("g14"), 2);
    assert_eq!(c("g14_x_g15"), 2);
    assert_eq!(c("one_g15"), 3);
    assert_eq!(c("g13"), 1);
    assert_eq!(c("general"), 4);
    assert_eq!(expected_table("g62", 10007).unwrap().get(2, 4), 20);
    assert_eq!(expected_table("g14", 10007).unwrap().get(2, 4), 5);
}

#[test]
fn characteristic_three_tables() {
    let b45 = |l, ch| expected_table(l, ch).unwrap().get(4, 5);
    assert_eq!(b45("one_g15", 10007), 4);
    assert_eq!(b45("one_g15", 3), 6);
    assert_eq!(b45("two_g15", 3), 10);
    assert_eq!(b45("general", 3), 4);
    let r = classify(&expected_table("one_g15", 3).unwrap(), 3).unwrap();
    assert_eq!((r.label.as_str(), r.k_g15), ("one_g15", None));
}

#[test]
fn characteristic_constraints_refused() {
    // beta_45 = 4 is one_g15 away from 3 and general in characteristic 3
    let t = expected_table("one_g15", 10007).unwrap();
    assert_eq!(classify(&t, 3).unwrap().label, "general");
    let t = expected_table("two_g15", 10007).unwrap();
    assert_eq!(classify(&t, 3).unwrap().label, "unrecognized");
    let t = expected_table("two_g15", 3).unwrap();
    let r = classify(&t, 10007).unwrap();
    assert_eq!(r.label, "unrecognized");
    assert!(!r.recognized());
}

#[test]
fn unrecognized_reports_nearest() {
    let mut t = expected_table("g72", 10007).unwrap();
    t.set(4, 5, 20);
    t.set(3, 5, 20);
    let r = classify(&t, 10007).unwrap();
    assert_eq!(r.label, "unrecognized");
    assert_eq!(r.nearest, Some(NearestEntry { label: "g72".into(), distance: 8 }));
}

#[test]
fn malformed_rejected() {
    let t = BettiTable::from_triples(9, &[(0, 0, 1), (1, 2, 21)]);
    assert!(matches!(classify(&t, 10007), Err(ClassifyError::Malformed(_))));
    let t = BettiTable::from_triples(9, &[(1, 2, 21), (7, 10, 1)]);
    assert!(classify(&t, 10007).is_err());
    assert!(expected_table("g15", 10007).is_err());
}

#[test]
fn consistency_examples() {
    let two = expected_table("two_g15", 10007).unwrap();
    assert!(consistency_report(&two, &AuxData { rank_alpha: Some(36), ..Default::default() }).consistent);
    let one = expected_table("one_g15", 10007).unwrap();
    assert!(consistency_report(&one, &AuxData { scroll_type: Some(s(&[2, 1, 1, 1])), ..Default::default() }).consistent);
    let g72 = expected_table("g72", 10007).unwrap();
    let r = consistency_report(&g72, &AuxData { rank_alpha: Some(40), ..Default::default() });
    assert!(!r.consistent);
    assert!(!r.notes.is_empty());
}

#[test]
fn consistency_with_partitions() {
    let one = expected_table("one_g15", 10007).unwrap();
    let p = SectionPartition::new(vec![9, 5, 1, 0]).unwrap();
    assert!(consistency_report(&one, &AuxData { partition: Some(p.clone()), ..Default::default() }).consistent);
    let r = consistency_report(&one, &AuxData { partition: Some(p), scroll_type: Some(s(&[2, 2, 1, 0])), rank_alpha: None });
    assert!(!r.consistent);
    let three = expected_table("three_g15", 10007).unwrap();
    let p = SectionPartition::new(vec![9, 5, 2, 1, 0]).unwrap();
    assert!(consistency_report(&three, &AuxData { partition: Some(p), rank_alpha: Some(32), ..Default::default() }).consistent);
    assert!(!consistency_report(&one, &AuxData { scroll_type: Some(s(&[3, 1, 1, 0])), ..Default::default() }).consistent);
    assert!(!consistency_report(&g72(), &AuxData { scroll_type: Some(s(&[2, 1, 1, 1])), ..Default::default() }).consistent);
}

fn g72() -> BettiTable {
    expected_table("g72", 10007).unwrap()
}

#[test]
fn scroll_multiplicities() {
    assert_eq!(multiplicity_of_scroll(&s(&[2, 1, 1, 1])), Some(1));
    assert_eq!(multiplicity_of_scroll(&s(&[2, 2, 1, 0])), Some(2));
    assert_eq!(multiplicity_of_scroll(&s(&[3, 1, 1, 0])), Some(3));
    assert_eq!(multiplicity_of_scroll(&s(&[1, 1])), None);
}

proptest! {
    #[test]
    fn perturbed_tables_are_unrecognized_or_other(idx in 0usize..12, i in 1usize..7, delta in 1u64..5) {
        let e = &catalog()[idx];
        let ch = if e.constraint == CharConstraint::Char3 { 3 } else { 10007 };
        let mut t = e.table.clone();
        let j = i as u32 + 1;
        t.set(i, j, t.get(i, j) + delta);
        let r = classify(&t, ch).unwrap();
        prop_assert_eq!(r.label.as_str(), "unrecognized");
        prop_assert!(r.nearest.unwrap().distance <= delta);
    }
}
