//! Points, subspaces and affine flats of PG(n,q) = AG(n,q) ∪ H∞.
//!
//! Homogeneous coordinates are `(X0, X1, ..., Xn)`. The hyperplane at
//! infinity is fixed as `X0 = 0` and the affine point `(x1, ..., xn)` embeds
//! as `(1, x1, ..., xn)`.
//!
//! Ranks: a projective point is normalized so its first nonzero coordinate
//! is 1, and points are ranked first by the position of that leading 1, then
//! by the remaining coordinates read as a base-q number (last coordinate least
//! significant). Affine points come first in this order, so the rank of an
//! affine point equals the base-q value of `(x1, ..., xn)`.

mod enumerate;
mod flat;
mod subspace;

pub use enumerate::{gaussian_binomial, subspace_count, SubspaceIter};
pub use flat::{parallel_flats, project_from, AffineFlat};
pub use subspace::{meet, span, Subspace};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// A point of PG(n,q) in normalized homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    /// Normalizes `coords` so the first nonzero entry is 1.
    pub fn new(field: &Field, coords: Vec<Elem>) -> Option<Self> {
        let mut coords = coords;
        normalize(field, &mut coords).then_some(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords[0] == 0
    }

    pub fn rank(&self, q: u32) -> u64 {
        proj_rank(q, &self.coords)
    }

    pub fn unrank(q: u32, n: usize, rank: u64) -> Option<Self> {
        proj_unrank(q, n, rank).map(|coords| ProjPoint { coords })
    }

    /// The affine point this represents, if it is not at infinity.
    pub fn to_affine(&self) -> Option<AffPoint> {
        (self.coords[0] == 1).then(|| AffPoint {
            coords: self.coords[1..].to_vec(),
        })
    }
}

/// A point of AG(n,q).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffPoint {
    coords: Vec<Elem>,
}

impl AffPoint {
    pub fn new(coords: Vec<Elem>) -> Self {
        AffPoint { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn rank(&self, q: u32) -> u64 {
        aff_rank(q, &self.coords)
    }

    pub fn unrank(q: u32, n: usize, rank: u64) -> Self {
        AffPoint {
            coords: aff_unrank(q, n, rank),
        }
    }

    pub fn to_projective(&self) -> ProjPoint {
        let mut coords = Vec::with_capacity(self.coords.len() + 1);
        coords.push(1);
        coords.extend_from_slice(&self.coords);
        ProjPoint { coords }
    }
}

/// Scales `v` so its first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize(field: &Field, v: &mut [Elem]) -> bool {
    let Some(lead) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    let inv = field.inv_nz(v[lead]);
    if inv != 1 {
        for x in &mut v[lead..] {
            *x = field.mul(*x, inv);
        }
    }
    true
}

/// `(q^(n+1) - 1) / (q - 1)`.
pub fn proj_point_count(q: u32, n: usize) -> u64 {
    (0..=n).map(|i| (q as u64).pow(i as u32)).sum()
}

/// `q^n`.
pub fn aff_point_count(q: u32, n: usize) -> u64 {
    (q as u64).pow(n as u32)
}

/// Base-q value of the coordinates, first coordinate most significant.
pub fn aff_rank(q: u32, coords: &[Elem]) -> u64 {
    coords.iter().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

pub fn aff_unrank(q: u32, n: usize, mut rank: u64) -> Vec<Elem> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = (rank % q as u64) as Elem;
        rank /= q as u64;
    }
    out
}

/// Rank of a normalized projective point (length n+1).
pub fn proj_rank(q: u32, coords: &[Elem]) -> u64 {
    let n = coords.len() - 1;
    let lead = coords
        .iter()
        .position(|&x| x != 0)
        .expect("projective point is nonzero");
    let offset: u64 = (0..lead).map(|j| aff_point_count(q, n - j)).sum();
    offset + aff_rank(q, &coords[lead + 1..])
}

pub fn proj_unrank(q: u32, n: usize, mut rank: u64) -> Option<Vec<Elem>> {
    for lead in 0..=n {
        let block = aff_point_count(q, n - lead);
        if rank < block {
            let mut coords = vec![0; n + 1];
            coords[lead] = 1;
            coords[lead + 1..].copy_from_slice(&aff_unrank(q, n - lead, rank));
            return Some(coords);
        }
        rank -= block;
    }
    None
}

pub(crate) fn check_len(v: &[Elem], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::BadLength {
            got: v.len(),
            expected,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_bijective_on_small_spaces() {
        for (q, n) in [(2u32, 3usize), (3, 2), (4, 2)] {
            let total = proj_point_count(q, n);
            for r in 0..total {
                let c = proj_unrank(q, n, r).unwrap();
                assert_eq!(proj_rank(q, &c), r);
            }
            assert!(proj_unrank(q, n, total).is_none());
        }
    }

    #[test]
    fn affine_rank_agrees_with_projective_rank() {
        let q = 3;
        for r in 0..aff_point_count(q, 3) {
            let a = AffPoint::unrank(q, 3, r);
            assert_eq!(a.to_projective().rank(q), r);
        }
    }

    #[test]
    fn normalization_is_unique() {
        let f = Field::new(5, 1).unwrap();
        let a = ProjPoint::new(&f, vec![0, 2, 4]).unwrap();
        let b = ProjPoint::new(&f, vec![0, 3, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coords(), &[0, 1, 2]);
        assert!(ProjPoint::new(&f, vec![0, 0]).is_none());
    }

    #[test]
    fn point_counts() {
        assert_eq!(proj_point_count(3, 2), 13);
        assert_eq!(proj_point_count(2, 3), 15);
        assert_eq!(aff_point_count(4, 3), 64);
    }
}
