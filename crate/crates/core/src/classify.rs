//! Catalog of genus-9 canonical Betti tables, matching of computed tables
//! against it, and cross-checks with exterior ranks and scroll types.

use std::fmt;

use thiserror::Error;

use crate::betti::{invariants, BettiTable};
use crate::scroll::{type_from_partition, ScrollType, SectionPartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("not a genus-9 canonical table: {0}")]
    Malformed(String),
    #[error("no catalog entry `{label}` in characteristic {characteristic}")]
    UnknownLabel { label: String, characteristic: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharConstraint {
    Any,
    Char3,
    NotChar3,
}

impl CharConstraint {
    pub fn admits(self, characteristic: u32) -> bool {
        match self {
            CharConstraint::Any => true,
            CharConstraint::Char3 => characteristic == 3,
            CharConstraint::NotChar3 => characteristic != 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub description: &'static str,
    pub table: BettiTable,
    pub constraint: CharConstraint,
}

/// Labels of the special strata, in catalog order.
pub const LABELS: [&str; 9] = ["general", "one_g15", "two_g15", "three_g15", "g72", "g14", "g14_x_g15", "g62", "g13"];

fn canonical(r1: &[u64], r1_start: usize, r2: &[u64], r2_start: usize) -> BettiTable {
    BettiTable::from_rows(9, &[(0, 0, &[1]), (1, r1_start, r1), (2, r2_start, r2), (3, 7, &[1])])
}

fn frame(b: u64) -> BettiTable {
    canonical(&[21, 64, 70, b], 1, &[b, 70, 64, 21], 3)
}

/// The nine tables of the classification together with the three tables
/// that differ in characteristic 3.
pub fn catalog() -> Vec<CatalogEntry> {
    use CharConstraint::*;
    let e = |label, description, table, constraint| CatalogEntry { label, description, table, constraint };
    vec![
        e("general", "Clifford index 4", frame(0), NotChar3),
        e("one_g15", "exactly one g^1_5", frame(4), NotChar3),
        e("two_g15", "two g^1_5, counted with multiplicity", frame(8), NotChar3),
        e("three_g15", "three g^1_5, counted with multiplicity", frame(12), Any),
        e("g72", "a g^2_7", frame(24), Any),
        e("g14", "a g^1_4 and no g^1_5 beyond", canonical(&[21, 64, 75, 24, 5], 1, &[5, 24, 75, 64, 21], 2), Any),
        e("g14_x_g15", "a g^1_4 and a g^1_5", canonical(&[21, 64, 75, 44, 5], 1, &[5, 44, 75, 64, 21], 2), Any),
        e("g62", "a g^2_6", canonical(&[21, 64, 90, 64, 20], 1, &[20, 64, 90, 64, 21], 2), Any),
        e("g13", "trigonal", canonical(&[21, 70, 105, 84, 35, 6], 1, &[6, 35, 84, 105, 70, 21], 1), Any),
        e("general", "Clifford index 4, characteristic 3", frame(4), Char3),
        e("one_g15", "exactly one g^1_5, characteristic 3", frame(6), Char3),
        e("two_g15", "two g^1_5, characteristic 3", frame(10), Char3),
    ]
}

/// Catalog table for `label` in the given characteristic.
pub fn expected_table(label: &str, characteristic: u32) -> Result<BettiTable, ClassifyError> {
    catalog()
        .into_iter()
        .find(|e| e.label == label && e.constraint.admits(characteristic))
        .map(|e| e.table)
        .ok_or_else(|| ClassifyError::UnknownLabel { label: label.to_string(), characteristic })
}

/// Least `p` with `beta_{p,p+2} != 0`, or 4 when that row is empty up to 3.
pub fn clifford_from_betti(t: &BettiTable) -> u32 {
    (1..=3).find(|&p| t.get(p, p as u32 + 2) != 0).map(|p| p as u32).unwrap_or(4)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestEntry {
    pub label: String,
    pub distance: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    /// Catalog label, or `unrecognized`.
    pub label: String,
    pub clifford_index: u32,
    pub k_g15: Option<u32>,
    pub nearest: Option<NearestEntry>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn recognized(&self) -> bool {
        self.nearest.is_none()
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "label: {}", self.label)?;
        writeln!(f, "clifford index: {}", self.clifford_index)?;
        match self.k_g15 {
            Some(k) => writeln!(f, "g^1_5 count: {k}")?,
            None => writeln!(f, "g^1_5 count: -")?,
        }
        if let Some(n) = &self.nearest {
            writeln!(f, "nearest: {} (L1 distance {})", n.label, n.distance)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn check_shape(t: &BettiTable) -> Result<(), ClassifyError> {
    if t.get(0, 0) != 1 {
        return Err(ClassifyError::Malformed(format!("beta_00 = {}", t.get(0, 0))));
    }
    let reg = invariants(t).regularity;
    if reg != 3 {
        return Err(ClassifyError::Malformed(format!("regularity {reg}")));
    }
    Ok(())
}

/// Matches `t` against the catalog entries admissible in `characteristic`.
pub fn classify(t: &BettiTable, characteristic: u32) -> Result<ClassificationReport, ClassifyError> {
    check_shape(t)?;
    let entries: Vec<CatalogEntry> = catalog().into_iter().filter(|e| e.constraint.admits(characteristic)).collect();
    let clifford_index = clifford_from_betti(t);
    let mut notes = Vec::new();
    if !invariants(t).is_gorenstein_symmetric {
        notes.push("table is not self-dual".to_string());
    }
    if let Some(e) = entries.iter().find(|e| e.table == *t) {
        let b45 = t.get(4, 5);
        let k_g15 = (characteristic != 3 && matches!(e.label, "one_g15" | "two_g15" | "three_g15")).then_some((b45 / 4) as u32);
        notes.push(e.description.to_string());
        return Ok(ClassificationReport { label: e.label.to_string(), clifford_index, k_g15, nearest: None, notes });
    }
    let best = entries.iter().map(|e| (e.table.l1_distance(t), e.label)).min().expect("catalog is nonempty");
    notes.push(format!("beta_45 = {}", t.get(4, 5)));
    Ok(ClassificationReport {
        label: "unrecognized".to_string(),
        clifford_index,
        k_g15: None,
        nearest: Some(NearestEntry { label: best.1.to_string(), distance: best.0 }),
        notes,
    })
}

/// Auxiliary data computed alongside a Betti table.
#[derive(Debug, Clone, Default)]
pub struct AuxData {
    pub rank_alpha: Option<usize>,
    pub scroll_type: Option<ScrollType>,
    pub partition: Option<SectionPartition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub notes: Vec<String>,
}

/// Multiplicity of a `g^1_5` read off the scroll it sweeps out.
pub fn multiplicity_of_scroll(s: &ScrollType) -> Option<u32> {
    match s.e() {
        [2, 1, 1, 1] => Some(1),
        [2, 2, 1, 0] => Some(2),
        [3, 1, 1, 0] => Some(3),
        _ => None,
    }
}

/// Cross-checks `beta_45` against `44 - rank alpha` and the scroll type
/// against the number of pencils the table counts.
pub fn consistency_report(t: &BettiTable, aux: &AuxData) -> ConsistencyReport {
    let b45 = t.get(4, 5);
    let mut notes = Vec::new();
    let mut consistent = true;
    if let Some(r) = aux.rank_alpha {
        let predicted = 44i64 - r as i64;
        if predicted == b45 as i64 {
            notes.push(format!("beta_45 = 44 - rank alpha = {b45}"));
        } else {
            consistent = false;
            notes.push(format!("rank alpha {r} predicts beta_45 = {predicted}, table has {b45}"));
        }
    }
    let mut scroll = aux.scroll_type.clone();
    if let Some(p) = &aux.partition {
        match type_from_partition(p) {
            Ok(s) => {
                if let Some(given) = &scroll {
                    if *given != s {
                        consistent = false;
                        notes.push(format!("partition {:?} gives {s}, not {given}", p.h0()));
                    }
                }
                scroll.get_or_insert(s);
            }
            Err(e) => {
                consistent = false;
                notes.push(format!("partition {:?}: {e}", p.h0()));
            }
        }
    }
    if let Some(s) = &scroll {
        match multiplicity_of_scroll(s) {
            None => {
                consistent = false;
                notes.push(format!("{s} is not swept out by a g^1_5 on a genus-9 curve"));
            }
            Some(m) if !matches!(b45, 4 | 6 | 8 | 10 | 12) => {
                consistent = false;
                notes.push(format!("{s} needs a g^1_5 of multiplicity {m}, table has beta_45 = {b45}"));
            }
            Some(m) if b45 < 4 * m as u64 && b45.is_multiple_of(4) => {
                consistent = false;
                notes.push(format!("a g^1_5 of multiplicity {m} forces beta_45 >= {}, table has {b45}", 4 * m));
            }
            Some(m) => notes.push(format!("{s} matches a g^1_5 of multiplicity {m}")),
        }
    }
    ConsistencyReport { consistent, notes }
}
