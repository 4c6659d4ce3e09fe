use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::{affine_span_dim, check_direction, check_k, FlatProfile, FlatRecord, PointSet};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{aff_point_count, aff_rank, aff_unrank, parallel_flats, AffineFlat, Subspace, SubspaceIter};

// Below this many directions the rayon fan-out costs more than it saves.
const PAR_THRESHOLD: usize = 64;

struct FlatMask {
    flat: AffineFlat,
    mask: Vec<u64>,
}

/// Precomputed flat masks for every k-subspace of H∞ in AG(n,q).
pub struct DeterminationEngine {
    field: Arc<Field>,
    n: usize,
    k: usize,
    /// `q^k`: more points than this in a (k+1)-flat cannot sit in a k-flat.
    qk: usize,
    directions: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    flats: Vec<Vec<FlatMask>>,
    coords: Vec<Elem>,
}

impl DeterminationEngine {
    pub fn new(field: Arc<Field>, n: usize, k: isize) -> Result<Self> {
        check_k(n, k)?;
        let q = field.q();
        let universe = aff_point_count(q, n);
        if universe > super::MAX_UNIVERSE {
            return Err(Error::SpaceTooLarge { n, q });
        }
        let words = universe.div_ceil(64) as usize;
        let directions: Vec<Subspace> = SubspaceIter::at_infinity(&field, n, k)?.collect();
        let flats = directions
            .par_iter()
            .map(|s| {
                parallel_flats(&field, s)
                    .expect("enumerated subspaces lie at infinity")
                    .into_iter()
                    .map(|flat| {
                        let mut mask = vec![0u64; words];
                        for p in flat.points(&field) {
                            let r = aff_rank(q, &p);
                            mask[(r / 64) as usize] |= 1 << (r % 64);
                        }
                        FlatMask { flat, mask }
                    })
                    .collect()
            })
            .collect();
        let index = directions.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let coords = (0..universe).flat_map(|r| aff_unrank(q, n, r)).collect();
        Ok(DeterminationEngine {
            qk: (q as usize).pow(k as u32),
            field,
            n,
            k: k as usize,
            directions,
            index,
            flats,
            coords,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// All k-subspaces of H∞ in enumeration order.
    pub fn directions(&self) -> &[Subspace] {
        &self.directions
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Flat masks through the direction with the given index.
    pub fn flat_masks(&self, idx: usize) -> impl Iterator<Item = &[u64]> + '_ {
        self.flats[idx].iter().map(|f| f.mask.as_slice())
    }

    pub fn flats(&self, idx: usize) -> impl Iterator<Item = &AffineFlat> + '_ {
        self.flats[idx].iter().map(|f| &f.flat)
    }

    fn check_set(&self, u: &PointSet) -> Result<()> {
        if u.n() != self.n {
            return Err(Error::AmbientMismatch(self.n, u.n()));
        }
        if **u.field() != *self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn point(&self, r: u64) -> &[Elem] {
        let start = r as usize * self.n;
        &self.coords[start..start + self.n]
    }

    fn members(&self, u: &PointSet, mask: &[u64]) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, (&a, &b)) in u.words().iter().zip(mask).enumerate() {
            let mut w = a & b;
            while w != 0 {
                out.push(i as u64 * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }

    fn span_dim_in(&self, u: &PointSet, mask: &[u64]) -> (usize, isize) {
        let ranks = self.members(u, mask);
        let pts: Vec<&[Elem]> = ranks.iter().map(|&r| self.point(r)).collect();
        (ranks.len(), affine_span_dim(&self.field, &pts))
    }

    fn spans(&self, u: &PointSet, mask: &[u64]) -> bool {
        let c = u.count_in(mask);
        if c < self.k + 2 {
            return false;
        }
        if c > self.qk {
            return true;
        }
        self.span_dim_in(u, mask).1 == self.k as isize + 1
    }

    /// Determination test for the direction with index `idx`. `u` must live in
    /// the engine's AG(n,q).
    pub fn is_determined_at(&self, u: &PointSet, idx: usize) -> bool {
        self.flats[idx].iter().any(|f| self.spans(u, &f.mask))
    }

    pub fn is_determined(&self, u: &PointSet, s: &Subspace) -> Result<bool> {
        self.check_set(u)?;
        check_direction(u, s)?;
        if s.dim() as usize != self.k {
            return Err(Error::DimensionOutOfRange {
                k: s.dim(),
                min: self.k as isize,
                max: self.k as isize,
            });
        }
        let idx = self.index_of(s).expect("every k-subspace of H∞ is indexed");
        Ok(self.is_determined_at(u, idx))
    }

    /// One flag per direction, in enumeration order.
    pub fn determined_flags(&self, u: &PointSet) -> Result<Vec<bool>> {
        self.check_set(u)?;
        let idx = 0..self.directions.len();
        Ok(if self.directions.len() >= PAR_THRESHOLD {
            idx.into_par_iter().map(|i| self.is_determined_at(u, i)).collect()
        } else {
            idx.map(|i| self.is_determined_at(u, i)).collect()
        })
    }

    pub fn undetermined_indices(&self, u: &PointSet) -> Result<Vec<usize>> {
        Ok(self
            .determined_flags(u)?
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| (!d).then_some(i))
            .collect())
    }

    pub fn undetermined(&self, u: &PointSet) -> Result<Vec<Subspace>> {
        Ok(self
            .undetermined_indices(u)?
            .into_iter()
            .map(|i| self.directions[i].clone())
            .collect())
    }

    pub fn determined(&self, u: &PointSet) -> Result<Vec<Subspace>> {
        Ok(self
            .determined_flags(u)?
            .into_iter()
            .zip(&self.directions)
            .filter(|&(d, _)| d)
            .map(|(_, s)| s.clone())
            .collect())
    }

    pub fn profile_at(&self, u: &PointSet, idx: usize) -> FlatProfile {
        let k = self.k as isize;
        let records = self.flats[idx]
            .iter()
            .map(|f| {
                let (size, span_dim) = self.span_dim_in(u, &f.mask);
                FlatRecord {
                    flat: f.flat.clone(),
                    size,
                    span_dim,
                    complete: size == self.qk && span_dim == k,
                }
            })
            .collect();
        FlatProfile {
            direction: self.directions[idx].clone(),
            records,
        }
    }

    pub fn profile(&self, u: &PointSet, s: &Subspace) -> Result<FlatProfile> {
        self.check_set(u)?;
        check_direction(u, s)?;
        let idx = self
            .index_of(s)
            .ok_or(Error::DimensionOutOfRange { k: s.dim(), min: self.k as isize, max: self.k as isize })?;
        Ok(self.profile_at(u, idx))
    }
}
