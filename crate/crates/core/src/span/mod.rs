//! Which k-subspaces of H∞ a point set determines.
//!
//! `S` (a k-subspace of H∞, `0 <= k <= n-2`) is determined by `U` when one of
//! the q^(n-k-1) affine (k+1)-flats with ideal hyperplane `S` is spanned by
//! the points of `U` it contains. Conventions at the edges: the empty set
//! determines nothing, and k outside `0..=n-2` is an error.
//!
//! [`DeterminationEngine`] precomputes one bit mask per flat for a fixed
//! `(q, n, k)` so each flat test is an AND plus popcount; points are only
//! materialized when the count alone cannot decide. The free functions
//! answer one-off questions without building the tables.

mod engine;
mod pointset;

pub use engine::DeterminationEngine;
pub use pointset::{PointSet, MAX_UNIVERSE};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg;
use crate::pg::{parallel_flats, AffineFlat, Subspace};

/// One flat of a [`FlatProfile`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatRecord {
    pub flat: AffineFlat,
    /// `|U ∩ flat|`.
    pub size: usize,
    /// Dimension of the affine span of `U ∩ flat` (-1 when empty).
    pub span_dim: isize,
    /// `U ∩ flat` is exactly one complete affine k-flat.
    pub complete: bool,
}

/// Per-flat accounting of `U` against the flats through one direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatProfile {
    pub direction: Subspace,
    pub records: Vec<FlatRecord>,
}

impl FlatProfile {
    /// The direction is determined iff some flat is spanned.
    pub fn is_determined(&self) -> bool {
        let full = self.direction.dim() + 1;
        self.records.iter().any(|r| r.span_dim == full)
    }

    pub fn total(&self) -> usize {
        self.records.iter().map(|r| r.size).sum()
    }

    /// Every flat meets `U` in one complete k-flat.
    pub fn all_complete(&self) -> bool {
        self.records.iter().all(|r| r.complete)
    }
}

/// Dimension of the affine span of a list of affine points (-1 when empty).
pub fn affine_span_dim(field: &Field, points: &[&[Elem]]) -> isize {
    let Some(base) = points.first() else {
        return -1;
    };
    let n = base.len();
    let mut diffs = Vec::with_capacity((points.len() - 1) * n);
    for p in &points[1..] {
        diffs.extend(p.iter().zip(base.iter()).map(|(&a, &b)| field.sub(a, b)));
    }
    linalg::rank(field, &diffs, n) as isize
}

/// True iff the points (all inside `flat`) affinely span the whole flat.
pub fn spans_flat(field: &Field, points: &[&[Elem]], flat: &AffineFlat) -> Result<bool> {
    for p in points {
        if p.len() != flat.direction().n() || !flat.contains(field, p) {
            return Err(Error::PointOutsideFlat);
        }
    }
    Ok(affine_span_dim(field, points) == flat.dim())
}

pub(crate) fn check_direction(u: &PointSet, s: &Subspace) -> Result<()> {
    if s.n() != u.n() {
        return Err(Error::AmbientMismatch(u.n(), s.n()));
    }
    if !s.is_at_infinity() {
        return Err(Error::NotAtInfinity);
    }
    check_k(u.n(), s.dim())
}

pub(crate) fn check_k(n: usize, k: isize) -> Result<()> {
    let max = n as isize - 2;
    if k < 0 || k > max {
        return Err(Error::DimensionOutOfRange { k, min: 0, max });
    }
    Ok(())
}

/// Full per-flat profile of `u` with respect to the direction `s`.
pub fn flat_profile(u: &PointSet, s: &Subspace) -> Result<FlatProfile> {
    check_direction(u, s)?;
    let field = u.field();
    let k = s.dim();
    let qk = (field.q() as usize).pow(k as u32);
    let records = parallel_flats(field, s)?
        .into_iter()
        .map(|flat| {
            let inside: Vec<Vec<Elem>> = flat
                .points(field)
                .into_iter()
                .filter(|p| u.contains(p))
                .collect();
            let refs: Vec<&[Elem]> = inside.iter().map(Vec::as_slice).collect();
            let span_dim = affine_span_dim(field, &refs);
            FlatRecord {
                flat,
                size: inside.len(),
                span_dim,
                complete: inside.len() == qk && span_dim == k,
            }
        })
        .collect();
    Ok(FlatProfile {
        direction: s.clone(),
        records,
    })
}

/// Whether `u` determines the k-subspace `s` of H∞.
pub fn is_determined(u: &PointSet, s: &Subspace) -> Result<bool> {
    Ok(flat_profile(u, s)?.is_determined())
}

/// All undetermined k-subspaces of H∞, in enumeration order.
pub fn undetermined_set(u: &PointSet, k: isize) -> Result<Vec<Subspace>> {
    let engine = DeterminationEngine::new(u.field().clone(), u.n(), k)?;
    engine.undetermined(u)
}
