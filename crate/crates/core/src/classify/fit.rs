use serde::{Deserialize, Serialize};

use crate::construct::QuadForm;
use crate::gf::{Elem, Field};
use crate::linalg;
use crate::pg::{meet, Subspace, SubspaceIter};

/// A hyperbolic quadric of PG(3,q) through a given point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricFit {
    /// Coefficients in monomial order `X0X0, X0X1, ..., X3X3`, scaled so the
    /// first nonzero coefficient is 1.
    pub form: QuadForm,
    /// Two disjoint lines on the quadric.
    pub disjoint_lines: (Subspace, Subspace),
}

/// Fits a quaternary quadratic form through the given points of PG(3,q).
///
/// Succeeds only when the forms vanishing on all points form a single
/// projective point (unique up to scalar), the form is nonsingular, it has
/// exactly `(q+1)^2` points, and it contains two disjoint lines. Character is
/// decided from the count and the line search rather than from the form
/// itself, which keeps even characteristic straightforward.
pub fn fit_quadric3(field: &Field, points: &[&[Elem]]) -> Option<QuadricFit> {
    const VARS: usize = 4;
    const MONOMIALS: usize = 10;
    let mut rows = Vec::with_capacity(points.len() * MONOMIALS);
    for p in points {
        debug_assert_eq!(p.len(), VARS);
        for i in 0..VARS {
            for j in i..VARS {
                rows.push(field.mul(p[i], p[j]));
            }
        }
    }
    let kernel = linalg::nullspace(field, &rows, MONOMIALS);
    if kernel.len() != MONOMIALS {
        return None;
    }
    let mut coeffs = kernel;
    crate::pg::normalize(field, &mut coeffs);
    let form = QuadForm::from_coeffs(VARS, coeffs).expect("ten coefficients");
    if !form.is_nonsingular(field) {
        return None;
    }
    let q = field.q() as u64;
    if form.point_count(field) != (q + 1) * (q + 1) {
        return None;
    }
    let lines: Vec<Subspace> = SubspaceIter::projective(field, 3, 1)
        .expect("lines of PG(3,q)")
        .filter(|l| form.vanishes_on(field, l))
        .collect();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if meet(field, a, b).expect("same ambient").is_empty() {
                return Some(QuadricFit {
                    form,
                    disjoint_lines: (a.clone(), b.clone()),
                });
            }
        }
    }
    None
}
