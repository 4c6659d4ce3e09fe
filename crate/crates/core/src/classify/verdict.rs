use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fit::{fit_quadric3, QuadricFit};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{AffineFlat, Subspace};
use crate::span::{affine_span_dim, DeterminationEngine, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictTag {
    AllDetermined,
    OneUndetermined,
    TwoUndeterminedQuadric,
    TwoUndeterminedCylinder,
    ManyUndeterminedCylinder,
    Planar,
}

impl VerdictTag {
    pub const ALL: [VerdictTag; 6] = [
        VerdictTag::AllDetermined,
        VerdictTag::OneUndetermined,
        VerdictTag::TwoUndeterminedQuadric,
        VerdictTag::TwoUndeterminedCylinder,
        VerdictTag::ManyUndeterminedCylinder,
        VerdictTag::Planar,
    ];
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Structure backing a verdict; each variant can be re-checked on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    None,
    /// The planes through the undetermined line each meet `U` in one full line.
    ParallelPlanes { line: Subspace, lines: Vec<AffineFlat> },
    /// `U` plus the two undetermined lines is a hyperbolic quadric.
    Quadric { lines: (Subspace, Subspace), fit: QuadricFit },
    /// `U` is a union of q parallel lines with this ideal point.
    Cylinder { vertex: Subspace },
    /// `U` is an affine plane; its ideal line is the only determined line.
    Planar { plane: AffineFlat },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict3D {
    pub tag: VerdictTag,
    /// Undetermined lines of H∞ in enumeration order.
    pub undetermined: Vec<Subspace>,
    pub witness: Witness,
    /// Smallest-rank cylinder direction, whatever the tag.
    pub cylinder: Option<Subspace>,
}

impl Verdict3D {
    /// Re-validates the witness against `u` using direct predicates only
    /// (translation closure, form evaluation, point membership).
    pub fn check_witness(&self, field: &Field, u: &PointSet) -> std::result::Result<(), String> {
        let q = field.q() as usize;
        let pts = u.points();
        match &self.witness {
            Witness::None => {
                if !self.undetermined.is_empty() {
                    return Err("no witness but undetermined lines present".into());
                }
            }
            Witness::Cylinder { vertex } => {
                if !translation_closed(field, u, vertex) {
                    return Err("set is not closed under the vertex translation".into());
                }
                if !self.undetermined.iter().all(|l| l.contains(field, vertex)) {
                    return Err("an undetermined line misses the vertex".into());
                }
            }
            Witness::Quadric { lines, fit } => {
                let form = &fit.form;
                let on_affine = pts.iter().all(|p| {
                    let mut h = vec![1];
                    h.extend_from_slice(p);
                    form.eval(field, &h) == 0
                });
                if !on_affine || !form.vanishes_on(field, &lines.0) || !form.vanishes_on(field, &lines.1) {
                    return Err("fitted form does not vanish on the set and lines".into());
                }
                if form.point_count(field) != ((q + 1) * (q + 1)) as u64 {
                    return Err("fitted quadric has the wrong number of points".into());
                }
                if !form.vanishes_on(field, &fit.disjoint_lines.0) || !form.vanishes_on(field, &fit.disjoint_lines.1) {
                    return Err("recorded disjoint lines are not on the quadric".into());
                }
            }
            Witness::ParallelPlanes { line, lines } => {
                if lines.len() != q {
                    return Err(format!("{} lines instead of {q}", lines.len()));
                }
                let mut covered = 0;
                let mut planes = Vec::with_capacity(q);
                for l in lines {
                    if l.dim() != 1 || !line.contains(field, l.direction()) {
                        return Err("witness line has no ideal point on the undetermined line".into());
                    }
                    if !l.points(field).iter().all(|p| u.contains(p)) {
                        return Err("witness line is not inside the set".into());
                    }
                    let plane = AffineFlat::new(field, line.clone(), l.rep().clone()).map_err(|e| e.to_string())?;
                    if planes.contains(&plane) {
                        return Err("two witness lines share a plane".into());
                    }
                    planes.push(plane);
                    covered += q;
                }
                if covered != u.len() {
                    return Err("witness lines do not cover the set".into());
                }
            }
            Witness::Planar { plane } => {
                if plane.dim() != 2 || !pts.iter().all(|p| plane.contains(field, p)) {
                    return Err("set is not inside the witness plane".into());
                }
                if self.undetermined.len() != q * q + q || self.undetermined.contains(plane.direction()) {
                    return Err("planar set must determine exactly its own ideal line".into());
                }
            }
        }
        if let Some(m) = &self.cylinder {
            if !translation_closed(field, u, m) {
                return Err("reported cylinder direction is not a translation symmetry".into());
            }
        }
        Ok(())
    }
}

fn translation_closed(field: &Field, u: &PointSet, point: &Subspace) -> bool {
    let d = point.direction_vectors();
    let pts = u.points();
    field.elements().all(|t| {
        pts.iter().all(|p| {
            let moved: Vec<Elem> = p.iter().zip(&d).map(|(&a, &b)| field.add(a, field.mul(t, b))).collect();
            u.contains(&moved)
        })
    })
}

/// Reusable tables for classifying q²-subsets of AG(3,q).
pub struct Classifier3D {
    field: Arc<Field>,
    lines: DeterminationEngine,
    points: DeterminationEngine,
}

impl Classifier3D {
    pub fn new(field: Arc<Field>) -> Result<Self> {
        Ok(Classifier3D {
            lines: DeterminationEngine::new(field.clone(), 3, 1)?,
            points: DeterminationEngine::new(field.clone(), 3, 0)?,
            field,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    /// Engine over the lines of H∞.
    pub fn line_engine(&self) -> &DeterminationEngine {
        &self.lines
    }

    /// Engine over the points of H∞.
    pub fn point_engine(&self) -> &DeterminationEngine {
        &self.points
    }

    /// Index (into the point engine) of the first ideal point M such that
    /// every line with direction M meets `u` in nothing or everything.
    pub fn cylinder_index(&self, u: &PointSet) -> Option<usize> {
        let q = self.field.q() as usize;
        (0..self.points.directions().len()).find(|&i| {
            self.points.flat_masks(i).all(|m| {
                let c = u.count_in(m);
                c == 0 || c == q
            })
        })
    }

    fn check_size(&self, u: &PointSet) -> Result<()> {
        let q = self.field.q() as usize;
        if u.n() != 3 {
            return Err(Error::AmbientMismatch(3, u.n()));
        }
        if u.len() != q * q {
            return Err(Error::WrongSize { got: u.len(), expected: q * q });
        }
        Ok(())
    }

    pub fn is_cylinder(&self, u: &PointSet) -> Result<Option<Subspace>> {
        self.check_size(u)?;
        Ok(self.cylinder_index(u).map(|i| self.points.directions()[i].clone()))
    }

    /// Classifies a q²-subset of AG(3,q). A structure the theorem promises but
    /// that cannot be found is reported as [`Error::TheoremViolation`].
    pub fn classify(&self, u: &PointSet) -> Result<Verdict3D> {
        self.check_size(u)?;
        let field = &self.field;
        let q = field.q() as usize;
        let und_idx = self.lines.undetermined_indices(u)?;
        let undetermined: Vec<Subspace> = und_idx.iter().map(|&i| self.lines.directions()[i].clone()).collect();
        let cylinder = self.cylinder_index(u).map(|i| self.points.directions()[i].clone());
        let violation = |msg: String| Err(Error::TheoremViolation(msg));

        let pts = u.points();
        let refs: Vec<&[Elem]> = pts.iter().map(Vec::as_slice).collect();
        if affine_span_dim(field, &refs) <= 2 {
            let plane = AffineFlat::through_points(field, 3, &refs)?;
            if undetermined.len() != q * q + q {
                return violation(format!(
                    "planar set leaves {} lines undetermined, expected {}",
                    undetermined.len(),
                    q * q + q
                ));
            }
            return Ok(Verdict3D {
                tag: VerdictTag::Planar,
                undetermined,
                witness: Witness::Planar { plane },
                cylinder,
            });
        }

        let (tag, witness) = match und_idx.len() {
            0 => (VerdictTag::AllDetermined, Witness::None),
            1 => {
                let profile = self.lines.profile_at(u, und_idx[0]);
                if !profile.all_complete() {
                    return violation("undetermined line without a full line in every plane".into());
                }
                let mut lines = Vec::with_capacity(q);
                for rec in &profile.records {
                    let inside: Vec<&[Elem]> = refs.iter().copied().filter(|p| rec.flat.contains(field, p)).collect();
                    lines.push(AffineFlat::through_points(field, 3, &inside)?);
                }
                (
                    VerdictTag::OneUndetermined,
                    Witness::ParallelPlanes {
                        line: undetermined[0].clone(),
                        lines,
                    },
                )
            }
            2 => {
                let fit = self.fit_with_lines(&pts, &undetermined);
                match (fit, &cylinder) {
                    (Some(_), Some(_)) => return violation("set is both a quadric and a cylinder".into()),
                    (Some(fit), None) => (
                        VerdictTag::TwoUndeterminedQuadric,
                        Witness::Quadric {
                            lines: (undetermined[0].clone(), undetermined[1].clone()),
                            fit,
                        },
                    ),
                    (None, Some(m)) => {
                        self.check_concurrent(&undetermined, m)?;
                        (VerdictTag::TwoUndeterminedCylinder, Witness::Cylinder { vertex: m.clone() })
                    }
                    (None, None) => return violation("two undetermined lines but neither quadric nor cylinder".into()),
                }
            }
            count => {
                let Some(m) = &cylinder else {
                    return violation(format!("{count} undetermined lines but not a cylinder"));
                };
                self.check_concurrent(&undetermined, m)?;
                (VerdictTag::ManyUndeterminedCylinder, Witness::Cylinder { vertex: m.clone() })
            }
        };
        Ok(Verdict3D {
            tag,
            undetermined,
            witness,
            cylinder,
        })
    }

    fn check_concurrent(&self, lines: &[Subspace], m: &Subspace) -> Result<()> {
        if lines.iter().all(|l| l.contains(&self.field, m)) {
            Ok(())
        } else {
            Err(Error::TheoremViolation("undetermined lines miss the cylinder vertex".into()))
        }
    }

    fn fit_with_lines(&self, pts: &[Vec<Elem>], lines: &[Subspace]) -> Option<QuadricFit> {
        let field = &self.field;
        let mut all: Vec<Vec<Elem>> = pts
            .iter()
            .map(|p| {
                let mut h = vec![1];
                h.extend_from_slice(p);
                h
            })
            .collect();
        for l in lines {
            for p in l.points(field) {
                if !all.iter().any(|x| x == p.coords()) {
                    all.push(p.coords().to_vec());
                }
            }
        }
        let refs: Vec<&[Elem]> = all.iter().map(Vec::as_slice).collect();
        let fit = fit_quadric3(field, &refs)?;
        // the fitted quadric has (q+1)^2 points; they must be exactly ours
        let q = field.q() as usize;
        (all.len() == (q + 1) * (q + 1)).then_some(fit)
    }
}

/// One-off classification; builds the tables each call.
pub fn classify_3d(u: &PointSet) -> Result<Verdict3D> {
    Classifier3D::new(u.field().clone())?.classify(u)
}

/// One-off cylinder test for a q^(n-1)-subset of AG(n,q): the smallest-rank
/// ideal point M such that `u` is a union of full lines with direction M.
pub fn is_cylinder(u: &PointSet) -> Result<Option<Subspace>> {
    let q = u.q() as usize;
    let expected = q.pow(u.n() as u32 - 1);
    if u.len() != expected {
        return Err(Error::WrongSize { got: u.len(), expected });
    }
    let engine = DeterminationEngine::new(u.field().clone(), u.n(), 0)?;
    let found = (0..engine.directions().len()).find(|&i| {
        engine.flat_masks(i).all(|m| {
            let c = u.count_in(m);
            c == 0 || c == q
        })
    });
    Ok(found.map(|i| engine.directions()[i].clone()))
}
