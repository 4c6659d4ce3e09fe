use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::pg::{aff_point_count, aff_unrank, meet, project_from, Subspace};
use crate::span::{DeterminationEngine, PointSet};

/// A cylinder over a base set, with its vertex at infinity.
#[derive(Clone, Debug)]
pub struct Cone {
    pub set: PointSet,
    pub vertex: Subspace,
    /// Dimension `m` of the base space AG(m,q).
    pub base_n: usize,
}

/// Vertex of the cone from AG(m,q) into AG(n,q): the span of the ideal
/// points of the last `n - m` coordinate axes.
pub fn cone_vertex(m: usize, n: usize) -> Subspace {
    Subspace::coordinate(n, m + 1..=n)
}

/// `{(u, a) : u ∈ base, a ∈ GF(q)^(n-m)}`: the union of the affine
/// (n-m)-flats joining each base point to the vertex.
pub fn cone(base: &PointSet, n: usize) -> Result<Cone> {
    let m = base.n();
    if m < 2 || n <= m {
        return Err(Error::Unsupported(format!("cone needs n > m >= 2 (got m={m}, n={n})")));
    }
    let field = base.field().clone();
    let q = field.q();
    let extra = n - m;
    let fibre: Vec<Vec<Elem>> = (0..aff_point_count(q, extra)).map(|r| aff_unrank(q, extra, r)).collect();
    let points = base.points().into_iter().flat_map(|u| {
        fibre.iter().map(move |a| {
            let mut p = u.clone();
            p.extend_from_slice(a);
            p
        })
    });
    let set = PointSet::from_points(Arc::clone(&field), n, points)?;
    Ok(Cone {
        set,
        vertex: cone_vertex(m, n),
        base_n: m,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub w: Subspace,
    pub projected: Subspace,
    pub cone_undetermined: bool,
    pub base_undetermined: bool,
}

/// Outcome of comparing undetermined r-subspaces of a cone with undetermined
/// projected subspaces of its base.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub r: usize,
    /// W compared (projected dimension in `0..=m-2`).
    pub checked: usize,
    pub agreed: usize,
    /// Undetermined W among the checked ones.
    pub undetermined: usize,
    pub disagreements: Vec<Disagreement>,
    /// W contained in the vertex: projection is empty, not compared.
    pub inside_vertex: usize,
    /// W whose projection has dimension outside `0..=m-2`, keyed by that
    /// dimension; recorded, not compared.
    pub out_of_range: BTreeMap<isize, usize>,
    /// W where the projected dimension differs from `r - dim(W ∩ V) - 1`.
    pub dimension_mismatches: Vec<Subspace>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.dimension_mismatches.is_empty()
    }
}

enum Outcome {
    InsideVertex,
    OutOfRange(isize),
    Checked { agree: Option<Disagreement>, undetermined: bool, dim_ok: bool, w: Subspace },
}

/// For every r-subspace W of H∞ not inside the vertex V, compares "W is
/// undetermined by the cone" with "the projection of W from V onto the base
/// space is undetermined by the base".
pub fn cone_correspondence_check(base: &PointSet, n: usize, r: usize) -> Result<CorrespondenceReport> {
    let m = base.n();
    let field = base.field().clone();
    let q = field.q() as usize;
    let expected = q.pow(m as u32 - 1);
    if base.len() != expected {
        return Err(Error::WrongSize { got: base.len(), expected });
    }
    if r + 2 > n {
        return Err(Error::DimensionOutOfRange { k: r as isize, min: 0, max: n as isize - 2 });
    }
    let cone = cone(base, n)?;
    let vertex = &cone.vertex;
    let base_space = Subspace::coordinate(n, 0..=m);
    let cone_engine = DeterminationEngine::new(field.clone(), n, r as isize)?;
    let base_engines: Vec<DeterminationEngine> = (0..=m as isize - 2)
        .map(|k| DeterminationEngine::new(field.clone(), m, k))
        .collect::<Result<_>>()?;

    let outcomes: Vec<Outcome> = (0..cone_engine.directions().len())
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let w = &cone_engine.directions()[i];
            let s = meet(&field, w, vertex)?.dim();
            if s == r as isize {
                return Ok(Outcome::InsideVertex);
            }
            let projected = project_from(&field, vertex, w, &base_space)?;
            let r0 = projected.dim();
            let dim_ok = r0 == r as isize - s - 1;
            if r0 < 0 || r0 > m as isize - 2 {
                return Ok(Outcome::OutOfRange(r0));
            }
            let local = projected.truncate(&field, m);
            let engine = &base_engines[r0 as usize];
            let base_und = !engine.is_determined(base, &local)?;
            let cone_und = !cone_engine.is_determined_at(&cone.set, i);
            let agree = (base_und != cone_und).then(|| Disagreement {
                w: w.clone(),
                projected: local,
                cone_undetermined: cone_und,
                base_undetermined: base_und,
            });
            Ok(Outcome::Checked { agree, undetermined: cone_und, dim_ok, w: w.clone() })
        })
        .collect::<Result<_>>()?;

    let mut report = CorrespondenceReport { r, ..Default::default() };
    for o in outcomes {
        match o {
            Outcome::InsideVertex => report.inside_vertex += 1,
            Outcome::OutOfRange(r0) => *report.out_of_range.entry(r0).or_default() += 1,
            Outcome::Checked { agree, undetermined, dim_ok, w } => {
                report.checked += 1;
                report.undetermined += undetermined as usize;
                if !dim_ok {
                    report.dimension_mismatches.push(w);
                }
                match agree {
                    None => report.agreed += 1,
                    Some(d) => report.disagreements.push(d),
                }
            }
        }
    }
    Ok(report)
}
