use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pg::Subspace;
use crate::span::{DeterminationEngine, PointSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HierarchyViolation {
    /// A determined k-subspace in no determined (k+1)-subspace.
    NoDeterminedExtension { subspace: Subspace },
    /// A determined k-subspace in no determined (n-2)-subspace.
    NoDeterminedHyperplane { subspace: Subspace },
    /// An undetermined (n-2)-subspace all of whose k-subspaces are determined.
    AllSubspacesDetermined { hyperplane: Subspace, k: usize },
    /// A determined direction on no (n-2)-subspace of determined directions.
    UncoveredDirection { point: Subspace },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub n: usize,
    pub q: u32,
    /// Determined subspace counts for k = 0..=n-2.
    pub determined: Vec<usize>,
    pub undetermined: Vec<usize>,
    /// Comparisons made by each of the four checks.
    pub checks: [usize; 4],
    pub violations: Vec<HierarchyViolation>,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the nesting of determined subspaces for a q^(n-1)-set:
/// (i) determined S_k ⊂ determined S_{k+1}; (ii) determined S_k ⊂ determined
/// S_{n-2}; (iii) an undetermined S_{n-2} has an undetermined k-subspace for
/// each k ≤ n-3; (iv) determined directions form a union of (n-2)-subspaces.
pub fn hierarchy_check(u: &PointSet) -> Result<HierarchyReport> {
    let n = u.n();
    let q = u.q();
    if n < 3 {
        return Err(Error::Unsupported("hierarchy checks need n >= 3".into()));
    }
    let expected = (q as usize).pow(n as u32 - 1);
    if u.len() != expected {
        return Err(Error::WrongSize { got: u.len(), expected });
    }
    let field = u.field();
    let top = n - 2;
    let engines: Vec<DeterminationEngine> = (0..=top)
        .map(|k| DeterminationEngine::new(field.clone(), n, k as isize))
        .collect::<Result<_>>()?;
    let flags: Vec<Vec<bool>> = engines.iter().map(|e| e.determined_flags(u)).collect::<Result<_>>()?;
    let pick = |k: usize, want: bool| -> Vec<&Subspace> {
        engines[k]
            .directions()
            .iter()
            .zip(&flags[k])
            .filter(|(_, &f)| f == want)
            .map(|(s, _)| s)
            .collect()
    };
    let determined: Vec<Vec<&Subspace>> = (0..=top).map(|k| pick(k, true)).collect();
    let undetermined: Vec<Vec<&Subspace>> = (0..=top).map(|k| pick(k, false)).collect();

    let mut report = HierarchyReport {
        n,
        q,
        determined: determined.iter().map(Vec::len).collect(),
        undetermined: undetermined.iter().map(Vec::len).collect(),
        ..Default::default()
    };

    for k in 0..top {
        for s in &determined[k] {
            report.checks[0] += 1;
            if !determined[k + 1].iter().any(|t| t.contains(field, s)) {
                report.violations.push(HierarchyViolation::NoDeterminedExtension { subspace: (*s).clone() });
            }
            report.checks[1] += 1;
            if !determined[top].iter().any(|t| t.contains(field, s)) {
                report.violations.push(HierarchyViolation::NoDeterminedHyperplane { subspace: (*s).clone() });
            }
        }
    }

    for v in &undetermined[top] {
        for (k, below) in undetermined[..top].iter().enumerate() {
            report.checks[2] += 1;
            if !below.iter().any(|s| v.contains(field, s)) {
                report.violations.push(HierarchyViolation::AllSubspacesDetermined {
                    hyperplane: (*v).clone(),
                    k,
                });
            }
        }
    }

    // hyperplanes of H∞ whose points are all determined directions
    let full: Vec<&Subspace> = engines[top]
        .directions()
        .iter()
        .filter(|t| {
            t.points(field).iter().all(|p| {
                let s = Subspace::point(field, p.coords()).expect("nonzero point");
                engines[0].index_of(&s).is_some_and(|i| flags[0][i])
            })
        })
        .collect();
    for p in &determined[0] {
        report.checks[3] += 1;
        if !full.iter().any(|t| t.contains(field, p)) {
            report.violations.push(HierarchyViolation::UncoveredDirection { point: (*p).clone() });
        }
    }
    Ok(report)
}
