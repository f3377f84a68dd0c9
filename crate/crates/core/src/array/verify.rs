use std::collections::BTreeMap;
use std::fmt;

use super::{Cell, CodedArray, SenderMap};
use crate::scheme::SchemeMetrics;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Same star count in every column.
    C1,
    /// Every integer in `1..=S` occurs.
    C2,
    /// Equal integers lie in distinct rows and columns.
    C3a,
    /// Equal integers at `(j1,k1)`, `(j2,k2)` force stars at `(j1,k2)` and `(j2,k1)`.
    C3b,
    /// The sender holds a star in every row of its integer.
    C4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Columns whose star count differs from the majority count.
    Columns(Vec<usize>),
    /// A missing integer.
    Missing(u32),
    /// Offending cells, 0-based `(row, col)`.
    Cells(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub label: Option<u32>,
    pub witness: Witness,
}

impl Violation {
    pub fn involves(&self, row: usize, col: usize) -> bool {
        match &self.witness {
            Witness::Columns(cs) => cs.contains(&col),
            Witness::Missing(_) => false,
            Witness::Cells(cells) => cells.contains(&(row, col)),
        }
    }

    fn sort_key(&self) -> (Condition, usize, usize) {
        match &self.witness {
            Witness::Columns(cs) => (self.condition, 0, cs.first().copied().unwrap_or(0)),
            Witness::Missing(s) => (self.condition, *s as usize, 0),
            Witness::Cells(cells) => {
                let (r, c) = cells.first().copied().unwrap_or((0, 0));
                (self.condition, r, c)
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.condition)?;
        if let Some(s) = self.label {
            write!(f, " s{s}")?;
        }
        match &self.witness {
            Witness::Columns(cs) => {
                let cs: Vec<String> = cs.iter().map(|c| (c + 1).to_string()).collect();
                write!(f, " columns {}", cs.join(","))
            }
            Witness::Missing(s) => write!(f, " integer {s} missing"),
            Witness::Cells(cells) => {
                let cs: Vec<String> = cells.iter().map(|(r, c)| format!("({},{})", r + 1, c + 1)).collect();
                write!(f, " cells {}", cs.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdaParams {
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
}

impl fmt::Display for PdaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.f, self.z, self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    Regular(usize),
    Irregular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdaReport {
    pub params: PdaParams,
    pub regularity: Regularity,
    pub violations: Vec<Violation>,
}

impl PdaReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks C1–C3; violations are listed by condition, then row-major by their first cell.
pub fn verify_pda(arr: &CodedArray) -> PdaReport {
    let mut violations = Vec::new();

    let counts: Vec<usize> = (0..arr.cols()).map(|c| arr.star_count(c)).collect();
    let mut freq: BTreeMap<usize, usize> = BTreeMap::new();
    for &n in &counts {
        *freq.entry(n).or_insert(0) += 1;
    }
    let z = freq.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map_or(0, |(&z, _)| z);
    let off: Vec<usize> = (0..arr.cols()).filter(|&c| counts[c] != z).collect();
    if !off.is_empty() {
        violations.push(Violation { condition: Condition::C1, label: None, witness: Witness::Columns(off) });
    }

    let cells = arr.label_cells();
    let s = cells.len();
    if s == 0 {
        violations.push(Violation { condition: Condition::C2, label: None, witness: Witness::Missing(1) });
    }
    for (i, group) in cells.iter().enumerate() {
        let label = i as u32 + 1;
        if group.is_empty() {
            violations.push(Violation {
                condition: Condition::C2,
                label: Some(label),
                witness: Witness::Missing(label),
            });
            continue;
        }
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let (j1, k1) = group[a];
                let (j2, k2) = group[b];
                if j1 == j2 || k1 == k2 {
                    violations.push(Violation {
                        condition: Condition::C3a,
                        label: Some(label),
                        witness: Witness::Cells(vec![(j1, k1), (j2, k2)]),
                    });
                    continue;
                }
                let mut missing = Vec::new();
                if !arr.get(j1, k2).is_star() {
                    missing.push((j1, k2));
                }
                if !arr.get(j2, k1).is_star() {
                    missing.push((j2, k1));
                }
                if !missing.is_empty() {
                    let mut w = vec![(j1, k1), (j2, k2)];
                    w.extend(missing);
                    violations.push(Violation { condition: Condition::C3b, label: Some(label), witness: Witness::Cells(w) });
                }
            }
        }
    }
    violations.sort_by_key(Violation::sort_key);

    let sizes: Vec<usize> = cells.iter().map(Vec::len).collect();
    let regularity = match sizes.first() {
        Some(&g) if g > 0 && sizes.iter().all(|&n| n == g) => Regularity::Regular(g),
        _ => Regularity::Irregular,
    };
    PdaReport { params: PdaParams { k: arr.cols(), f: arr.rows(), z, s }, regularity, violations }
}

/// C1–C3 plus C4 for the given sender map.
pub fn verify_dpda(arr: &CodedArray, phi: &SenderMap) -> PdaReport {
    let mut report = verify_pda(arr);
    let cells = arr.label_cells();
    let mut extra = Vec::new();
    if phi.len() != cells.len() {
        extra.push(Violation {
            condition: Condition::C4,
            label: None,
            witness: Witness::Missing(phi.len().min(cells.len()) as u32 + 1),
        });
    }
    for (i, group) in cells.iter().enumerate() {
        let label = i as u32 + 1;
        let Some(sender) = phi.sender(label) else { continue };
        if sender >= arr.cols() {
            extra.push(Violation { condition: Condition::C4, label: Some(label), witness: Witness::Columns(vec![sender]) });
            continue;
        }
        let bad: Vec<(usize, usize)> =
            group.iter().filter(|&&(r, _)| !arr.get(r, sender).is_star()).map(|&(r, _)| (r, sender)).collect();
        if !bad.is_empty() {
            extra.push(Violation { condition: Condition::C4, label: Some(label), witness: Witness::Cells(bad) });
        }
    }
    report.violations.extend(extra);
    report.violations.sort_by_key(Violation::sort_key);
    report
}

/// Columns with a star in every row where `label` occurs.
pub fn phi_candidates(arr: &CodedArray, label: u32) -> Vec<usize> {
    let rows: Vec<usize> = (0..arr.rows()).filter(|&r| arr.row(r).contains(&Cell::Label(label))).collect();
    (0..arr.cols()).filter(|&c| rows.iter().all(|&r| arr.get(r, c).is_star())).collect()
}

/// Smallest qualifying sender per integer, or `None` if some integer has no candidate.
pub fn find_phi(arr: &CodedArray) -> Option<SenderMap> {
    let cells = arr.label_cells();
    let mut phi = Vec::with_capacity(cells.len());
    for group in &cells {
        let mut rows: Vec<usize> = group.iter().map(|&(r, _)| r).collect();
        rows.dedup();
        let c = (0..arr.cols()).find(|&c| rows.iter().all(|&r| arr.get(r, c).is_star()))?;
        phi.push(c);
    }
    Some(SenderMap::new(phi))
}

/// D2D metrics of a valid DPDA: `M/N = Z/F`, `R = S/F`.
pub fn scheme_metrics_from_dpda(arr: &CodedArray, phi: &SenderMap) -> Result<SchemeMetrics> {
    let report = verify_dpda(arr, phi);
    if let Some(v) = report.violations.first() {
        return Err(Error::PreconditionFailed(format!("not a valid DPDA: {v}")));
    }
    let p = report.params;
    Ok(SchemeMetrics::dedicated(p.k as u64, p.f as u64, p.z as u64, p.s as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::math::Ratio;

    #[test]
    fn four_user_array_is_valid() {
        let (arr, phi) = fixtures::four_user_dpda();
        let rep = verify_dpda(&arr, &phi);
        assert!(rep.is_valid(), "{:?}", rep.violations);
        assert_eq!(rep.params, PdaParams { k: 4, f: 4, z: 2, s: 4 });
        assert_eq!(rep.regularity, Regularity::Regular(2));
        assert_eq!(find_phi(&arr), Some(SenderMap::new(vec![0, 1, 2, 3])));
        let m = scheme_metrics_from_dpda(&arr, &phi).unwrap();
        assert_eq!(m.memory_ratio, Ratio::new(1, 2));
        assert_eq!(m.load, Ratio::from_integer(1));
    }

    #[test]
    fn all_star_fails_c2() {
        let arr = CodedArray::new(2, 2, vec![Cell::Star; 4]).unwrap();
        let rep = verify_pda(&arr);
        assert!(rep.violations.iter().any(|v| v.condition == Condition::C2));
    }

    #[test]
    fn broken_pair_is_localized() {
        let (mut arr, _) = fixtures::four_user_dpda();
        arr.set(0, 3, Cell::Label(3));
        let rep = verify_pda(&arr);
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| matches!(v.condition, Condition::C3a | Condition::C3b) && v.involves(0, 3)));
    }

    #[test]
    fn no_sender_candidate() {
        // A valid PDA, but no column is starred in both rows of integer 1.
        let arr = CodedArray::new(2, 2, vec![Cell::Star, Cell::Label(1), Cell::Label(1), Cell::Star]).unwrap();
        assert!(verify_pda(&arr).is_valid());
        assert_eq!(find_phi(&arr), None);
    }

    #[test]
    fn c4_violation_reported() {
        let (arr, _) = fixtures::four_user_dpda();
        let rep = verify_dpda(&arr, &SenderMap::new(vec![1, 1, 2, 3]));
        assert!(rep.violations.iter().any(|v| v.condition == Condition::C4 && v.label == Some(1)));
        assert!(scheme_metrics_from_dpda(&arr, &SenderMap::new(vec![1, 1, 2, 3])).is_err());
    }
}
