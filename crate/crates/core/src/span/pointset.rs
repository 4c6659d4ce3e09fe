use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{aff_point_count, aff_rank, aff_unrank, check_len};

/// Largest affine space a point set may live in (number of points).
pub const MAX_UNIVERSE: u64 = 1 << 26;

/// A set of affine points of AG(n,q), bit-packed over affine ranks.
#[derive(Clone)]
pub struct PointSet {
    field: Arc<Field>,
    n: usize,
    bits: Vec<u64>,
    size: usize,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet(AG({},{}), {} points)", self.n, self.field.q(), self.size)
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.bits == other.bits
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn empty(field: Arc<Field>, n: usize) -> Result<Self> {
        let total = universe(&field, n)?;
        Ok(PointSet {
            field,
            n,
            bits: vec![0; total.div_ceil(64) as usize],
            size: 0,
        })
    }

    /// Every point of AG(n,q).
    pub fn full(field: Arc<Field>, n: usize) -> Result<Self> {
        let total = universe(&field, n)?;
        Self::from_ranks(field, n, 0..total)
    }

    pub fn from_ranks(field: Arc<Field>, n: usize, ranks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set = Self::empty(field, n)?;
        let total = set.universe();
        for r in ranks {
            if r >= total {
                return Err(Error::Unsupported(format!("affine rank {r} out of range")));
            }
            set.insert_rank(r);
        }
        Ok(set)
    }

    pub fn from_points<P: AsRef<[Elem]>>(field: Arc<Field>, n: usize, points: impl IntoIterator<Item = P>) -> Result<Self> {
        let mut set = Self::empty(field, n)?;
        let q = set.field.q();
        for p in points {
            let p = p.as_ref();
            check_len(p, n)?;
            if let Some(&bad) = p.iter().find(|&&x| x >= q) {
                return Err(Error::ElementOutOfRange { enc: bad, q });
            }
            set.insert_rank(aff_rank(q, p));
        }
        Ok(set)
    }

    /// Builds a set from raw words; bits beyond the universe must be clear.
    pub fn from_words(field: Arc<Field>, n: usize, words: Vec<u64>) -> Result<Self> {
        let total = universe(&field, n)?;
        if words.len() != total.div_ceil(64) as usize {
            return Err(Error::Unsupported("word count does not match the universe".into()));
        }
        if total % 64 != 0 && words.last().is_some_and(|&w| w >> (total % 64) != 0) {
            return Err(Error::Unsupported("bits set beyond the universe".into()));
        }
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(PointSet { field, n, bits: words, size })
    }

    fn insert_rank(&mut self, r: u64) {
        let (w, b) = ((r / 64) as usize, r % 64);
        if self.bits[w] & (1 << b) == 0 {
            self.bits[w] |= 1 << b;
            self.size += 1;
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Number of points of the ambient AG(n,q).
    pub fn universe(&self) -> u64 {
        aff_point_count(self.field.q(), self.n)
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn contains_rank(&self, r: u64) -> bool {
        r < self.universe() && self.bits[(r / 64) as usize] & (1 << (r % 64)) != 0
    }

    pub fn contains(&self, point: &[Elem]) -> bool {
        point.len() == self.n && point.iter().all(|&x| x < self.q()) && self.contains_rank(aff_rank(self.q(), point))
    }

    /// Member ranks in increasing order.
    pub fn ranks(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + b)
            })
        })
    }

    /// Member coordinates in rank order.
    pub fn points(&self) -> Vec<Vec<Elem>> {
        self.ranks().map(|r| aff_unrank(self.q(), self.n, r)).collect()
    }

    /// Popcount of the intersection with a mask over the same universe.
    pub fn count_in(&self, mask: &[u64]) -> usize {
        self.bits
            .iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Image under `x -> f(x)`; `f` must map AG(n,q) into itself.
    pub fn map(&self, f: impl Fn(&[Elem]) -> Vec<Elem>) -> Result<Self> {
        Self::from_points(self.field.clone(), self.n, self.points().iter().map(|p| f(p)))
    }
}

fn universe(field: &Field, n: usize) -> Result<u64> {
    let q = field.q();
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(q as u64);
        if total > MAX_UNIVERSE {
            return Err(Error::SpaceTooLarge { n, q });
        }
    }
    Ok(total)
}
