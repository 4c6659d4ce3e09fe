use serde::{Deserialize, Serialize};

use super::{aff_point_count, aff_rank, aff_unrank, check_len, meet, span, AffPoint, Subspace};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg;

/// An affine flat of AG(n,q): a direction subspace of H∞ (its ideal
/// hyperplane, projective dimension k) through a representative point. The
/// flat itself has affine dimension k+1 and q^(k+1) points.
///
/// The representative is canonical: it is reduced against the direction's
/// RREF basis, which makes it the smallest-rank point of the flat.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineFlat {
    direction: Subspace,
    rep: AffPoint,
}

impl AffineFlat {
    pub fn new(field: &Field, direction: Subspace, rep: AffPoint) -> Result<Self> {
        let n = direction.n();
        check_len(rep.coords(), n)?;
        if !direction.is_at_infinity() {
            return Err(Error::NotAtInfinity);
        }
        let mut v = Vec::with_capacity(n + 1);
        v.push(0);
        v.extend_from_slice(rep.coords());
        linalg::reduce(field, direction.basis(), &direction.pivots(), &mut v);
        Ok(AffineFlat {
            direction,
            rep: AffPoint::new(v[1..].to_vec()),
        })
    }

    /// The affine flat spanned by the given affine points (at least one).
    pub fn through_points(field: &Field, n: usize, points: &[&[Elem]]) -> Result<Self> {
        let Some(base) = points.first() else {
            return Err(Error::Unsupported("flat through no points".into()));
        };
        let mut rows = Vec::new();
        for p in &points[1..] {
            check_len(p, n)?;
            rows.push(0);
            rows.extend(p.iter().zip(base.iter()).map(|(&a, &b)| field.sub(a, b)));
        }
        let direction = Subspace::from_flat(field, n, rows);
        Self::new(field, direction, AffPoint::new(base.to_vec()))
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn rep(&self) -> &AffPoint {
        &self.rep
    }

    /// Affine dimension (one more than the direction's projective dimension).
    pub fn dim(&self) -> isize {
        self.direction.dim() + 1
    }

    /// Projective closure: the span of the direction and the representative.
    pub fn closure(&self, field: &Field) -> Subspace {
        let mut rows = self.direction.basis().to_vec();
        rows.push(1);
        rows.extend_from_slice(self.rep.coords());
        Subspace::from_flat(field, self.direction.n(), rows)
    }

    pub fn contains(&self, field: &Field, point: &[Elem]) -> bool {
        let mut v = Vec::with_capacity(point.len() + 1);
        v.push(0);
        v.extend(point.iter().zip(self.rep.coords()).map(|(&a, &b)| field.sub(a, b)));
        self.direction.contains_vector(field, &v)
    }

    /// All q^(k+1) affine points, in odometer order of the direction coefficients.
    pub fn points(&self, field: &Field) -> Vec<Vec<Elem>> {
        let n = self.direction.n();
        let dirs = self.direction.direction_vectors();
        let r = self.direction.rank();
        let q = field.q();
        let total = aff_point_count(q, r);
        let mut out = Vec::with_capacity(total as usize);
        for t in 0..total {
            let coeffs = aff_unrank(q, r, t);
            let mut p = self.rep.coords().to_vec();
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    p[j] = field.add(p[j], field.mul(c, dirs[i * n + j]));
                }
            }
            out.push(p);
        }
        out
    }

    pub fn point_ranks(&self, field: &Field) -> Vec<u64> {
        let mut r: Vec<u64> = self.points(field).iter().map(|p| aff_rank(field.q(), p)).collect();
        r.sort_unstable();
        r
    }
}

/// The q^(n-k-1) pairwise disjoint affine (k+1)-flats whose ideal hyperplane
/// is `direction`, ordered by their smallest point.
pub fn parallel_flats(field: &Field, direction: &Subspace) -> Result<Vec<AffineFlat>> {
    if !direction.is_at_infinity() {
        return Err(Error::NotAtInfinity);
    }
    let n = direction.n();
    let q = field.q();
    let total = aff_point_count(q, n);
    let mut covered = vec![false; total as usize];
    let mut out = Vec::new();
    for r in 0..total {
        if covered[r as usize] {
            continue;
        }
        let flat = AffineFlat::new(field, direction.clone(), AffPoint::unrank(q, n, r))?;
        for p in flat.points(field) {
            covered[aff_rank(q, &p) as usize] = true;
        }
        out.push(flat);
    }
    Ok(out)
}

/// Projects `w` from the centre `centre` onto `target`: `target ∩ ⟨centre, w⟩`.
pub fn project_from(field: &Field, centre: &Subspace, w: &Subspace, target: &Subspace) -> Result<Subspace> {
    if !meet(field, centre, target)?.is_empty() {
        return Err(Error::CentreMeetsTarget);
    }
    let joined = span(field, &[centre, w])?;
    meet(field, target, &joined)
}
