use super::Subspace;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg;

/// Gaussian binomial `[n choose k]_q`: the number of k-dimensional vector
/// subspaces of GF(q)^n. Zero when `k > n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    // [n,k] = [n-1,k-1] + q^k [n-1,k]
    let q = q as u128;
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = row[j - 1] + q.pow(j as u32) * row[j];
        }
    }
    row[k]
}

/// Number of projective k-subspaces of a projective d-space.
pub fn subspace_count(q: u32, d: isize, k: isize) -> u128 {
    if k < -1 || k > d {
        return 0;
    }
    gaussian_binomial((d + 1) as usize, (k + 1) as usize, q)
}

/// Every projective k-subspace of an ambient subspace, each exactly once.
///
/// Order: subspaces are generated as RREF matrices in the ambient's own
/// coordinates. Pivot-column patterns run in lexicographic order; within a
/// pattern the free entries (row-major) advance like an odometer with the
/// last entry fastest. Each local matrix is mapped through the ambient basis
/// and re-canonicalized. For the whole space or for H∞ the local order is the
/// global order.
pub struct SubspaceIter<'f> {
    field: &'f Field,
    n: usize,
    ambient: Option<Vec<Elem>>,
    d: usize,
    r: usize,
    pivots: Vec<usize>,
    free: Vec<usize>,
    odometer: Vec<Elem>,
    done: bool,
}

impl<'f> SubspaceIter<'f> {
    pub fn new(field: &'f Field, ambient: &Subspace, k: isize) -> Result<Self> {
        let dim = ambient.dim();
        if k < -1 || k > dim {
            return Err(Error::DimensionOutOfRange { k, min: -1, max: dim });
        }
        let d = ambient.rank();
        let r = (k + 1) as usize;
        let ambient_basis = (*ambient != Subspace::whole(ambient.n())).then(|| ambient.basis().to_vec());
        let mut it = SubspaceIter {
            field,
            n: ambient.n(),
            ambient: ambient_basis,
            d,
            r,
            pivots: (0..r).collect(),
            free: Vec::new(),
            odometer: Vec::new(),
            done: false,
        };
        it.reset_pattern();
        Ok(it)
    }

    /// All k-subspaces of PG(n,q).
    pub fn projective(field: &'f Field, n: usize, k: isize) -> Result<Self> {
        Self::new(field, &Subspace::whole(n), k)
    }

    /// All k-subspaces of the hyperplane at infinity of PG(n,q).
    pub fn at_infinity(field: &'f Field, n: usize, k: isize) -> Result<Self> {
        Self::new(field, &Subspace::at_infinity(n), k)
    }

    fn reset_pattern(&mut self) {
        self.free.clear();
        for (i, &pc) in self.pivots.iter().enumerate() {
            for c in pc + 1..self.d {
                if !self.pivots.contains(&c) {
                    self.free.push(i * self.d + c);
                }
            }
        }
        self.odometer = vec![0; self.free.len()];
    }

    fn advance_pattern(&mut self) -> bool {
        let (r, d) = (self.r, self.d);
        let Some(i) = (0..r).rev().find(|&i| self.pivots[i] < d - r + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..r {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        self.reset_pattern();
        true
    }

    fn advance(&mut self) {
        let q = self.field.q();
        for slot in self.odometer.iter_mut().rev() {
            *slot += 1;
            if *slot < q {
                return;
            }
            *slot = 0;
        }
        if !self.advance_pattern() {
            self.done = true;
        }
    }

    fn current(&self) -> Subspace {
        let (r, d) = (self.r, self.d);
        let mut local = vec![0; r * d];
        for (i, &pc) in self.pivots.iter().enumerate() {
            local[i * d + pc] = 1;
        }
        for (&pos, &v) in self.free.iter().zip(&self.odometer) {
            local[pos] = v;
        }
        match &self.ambient {
            None => Subspace::from_rref_unchecked(self.n, local),
            Some(basis) => {
                let global = linalg::mat_mul(self.field, &local, d, basis, self.n + 1);
                Subspace::from_flat(self.field, self.n, global)
            }
        }
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(3, 1, 3), 13);
        assert_eq!(gaussian_binomial(4, 0, 5), 1);
        assert_eq!(gaussian_binomial(2, 3, 5), 0);
    }

    #[test]
    fn lines_of_small_planes_and_spaces() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(SubspaceIter::projective(&f2, 2, 1).unwrap().count(), 7);
        assert_eq!(SubspaceIter::projective(&f2, 3, 1).unwrap().count(), 35);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(SubspaceIter::projective(&f3, 2, 0).unwrap().count(), 13);
    }

    #[test]
    fn extreme_dimensions() {
        let f = Field::new(3, 1).unwrap();
        let empty: Vec<_> = SubspaceIter::projective(&f, 2, -1).unwrap().collect();
        assert_eq!(empty, vec![Subspace::empty(2)]);
        let whole: Vec<_> = SubspaceIter::projective(&f, 2, 2).unwrap().collect();
        assert_eq!(whole, vec![Subspace::whole(2)]);
        assert!(SubspaceIter::projective(&f, 2, 3).is_err());
        assert!(SubspaceIter::projective(&f, 2, -2).is_err());
    }

    #[test]
    fn points_come_out_in_rank_order() {
        let f = Field::new(3, 1).unwrap();
        let ranks: Vec<u64> = SubspaceIter::projective(&f, 2, 0)
            .unwrap()
            .map(|s| super::super::proj_rank(3, s.row(0)))
            .collect();
        assert_eq!(ranks, (0..13).collect::<Vec<_>>());
    }

    #[test]
    fn subspaces_of_infinity_stay_at_infinity() {
        let f = Field::new(2, 1).unwrap();
        let lines: Vec<_> = SubspaceIter::at_infinity(&f, 3, 1).unwrap().collect();
        assert_eq!(lines.len(), 7);
        assert!(lines.iter().all(Subspace::is_at_infinity));
        assert_eq!(lines[0], Subspace::coordinate(3, [1, 2]));
    }
}
