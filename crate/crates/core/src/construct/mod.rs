//! Builders for the special extremal point sets: cylinders over a base set
//! and affine parts of quadrics tangent to the hyperplane at infinity.

mod cone;
mod quadric;

pub use cone::{cone, cone_correspondence_check, cone_vertex, Cone, CorrespondenceReport, Disagreement};
pub use quadric::{
    count_generators_through, elliptic_pair, generators_at_infinity, generators_through, is_exceptional, make_quadric,
    quadric_affine_part, quadric_determination, rho, subspaces_on_quadric, Character, QuadForm, QuadricDetermination,
    QuadricSpec,
};

use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::span::PointSet;

/// The graph `{(x, f(x))}` of a polynomial in AG(2,q); `coeffs` low to high.
pub fn graph(field: Arc<Field>, coeffs: &[Elem]) -> Result<PointSet> {
    let pts: Vec<[Elem; 2]> = field
        .elements()
        .map(|x| {
            let y = coeffs.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c));
            [x, y]
        })
        .collect();
    PointSet::from_points(field, 2, pts)
}

/// A uniformly random `size`-subset of AG(n,q).
pub fn random_set<R: Rng + ?Sized>(field: Arc<Field>, n: usize, size: usize, rng: &mut R) -> Result<PointSet> {
    let universe = PointSet::empty(field.clone(), n)?.universe();
    if size as u64 > universe {
        return Err(Error::WrongSize {
            got: size,
            expected: universe as usize,
        });
    }
    let ranks = sample(rng, universe as usize, size).into_iter().map(|r| r as u64);
    PointSet::from_ranks(field, n, ranks)
}
