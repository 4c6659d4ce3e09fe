use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_len, normalize, ProjPoint};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg;

/// A projective subspace of PG(n,q), stored as the canonical RREF basis of
/// its homogeneous span. Equality is equality of the basis matrices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    n: usize,
    rows: Vec<Elem>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, dim={}, rows=[", self.n, self.dim())?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, "])")
    }
}

impl Subspace {
    /// Span of the given coordinate vectors (each of length n+1).
    pub fn from_rows<R: AsRef<[Elem]>>(field: &Field, n: usize, rows: &[R]) -> Result<Self> {
        let mut flat = Vec::with_capacity(rows.len() * (n + 1));
        for r in rows {
            let r = r.as_ref();
            check_len(r, n + 1)?;
            for &x in r {
                if x >= field.q() {
                    return Err(Error::ElementOutOfRange { enc: x, q: field.q() });
                }
            }
            flat.extend_from_slice(r);
        }
        Ok(Self::from_flat(field, n, flat))
    }

    /// Span of a row-major matrix with `n + 1` columns.
    pub fn from_flat(field: &Field, n: usize, mut flat: Vec<Elem>) -> Self {
        debug_assert_eq!(flat.len() % (n + 1), 0);
        linalg::rref_in_place(field, &mut flat, n + 1);
        Subspace { n, rows: flat }
    }

    /// Wraps a matrix the caller guarantees is already in RREF.
    pub(crate) fn from_rref_unchecked(n: usize, rows: Vec<Elem>) -> Self {
        Subspace { n, rows }
    }

    pub fn empty(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    /// PG(n,q) itself.
    pub fn whole(n: usize) -> Self {
        Self::coordinate(n, 0..=n)
    }

    /// The hyperplane at infinity `X0 = 0`.
    pub fn at_infinity(n: usize) -> Self {
        Self::coordinate(n, 1..=n)
    }

    /// Span of the unit vectors `e_i` for the given coordinate indices (ascending).
    pub fn coordinate(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut rows = Vec::new();
        for i in indices {
            let start = rows.len();
            rows.resize(start + n + 1, 0);
            rows[start + i] = 1;
        }
        Subspace { n, rows }
    }

    pub fn point(field: &Field, coords: &[Elem]) -> Result<Self> {
        Self::from_rows(field, coords.len().saturating_sub(1), &[coords])
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vector-space dimension of the homogeneous span.
    pub fn rank(&self) -> usize {
        self.rows.len() / (self.n + 1)
    }

    /// Projective dimension; the empty subspace has dimension -1.
    pub fn dim(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Elem] {
        &self.rows
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.rows.chunks(self.n + 1)
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.rows[i * (self.n + 1)..(i + 1) * (self.n + 1)]
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows()
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    pub fn is_at_infinity(&self) -> bool {
        self.rows().all(|r| r[0] == 0)
    }

    /// For a subspace of H∞: the direction vectors, i.e. the basis rows with
    /// the `X0` column dropped (each of length n).
    pub fn direction_vectors(&self) -> Vec<Elem> {
        self.rows().flat_map(|r| r[1..].iter().copied()).collect()
    }

    pub fn contains_vector(&self, field: &Field, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.n + 1);
        let mut w = v.to_vec();
        linalg::reduce(field, &self.rows, &self.pivots(), &mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, field: &Field, other: &Subspace) -> bool {
        let pivots = self.pivots();
        other.rows().all(|r| {
            let mut w = r.to_vec();
            linalg::reduce(field, &self.rows, &pivots, &mut w);
            w.iter().all(|&x| x == 0)
        })
    }

    /// All projective points of the subspace, sorted by rank.
    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        let r = self.rank();
        let q = field.q();
        let mut out = Vec::new();
        let mut coeffs = vec![0; r];
        for lead in 0..r {
            let tail = r - lead - 1;
            let count = (q as u64).pow(tail as u32);
            for t in 0..count {
                coeffs.iter_mut().for_each(|c| *c = 0);
                coeffs[lead] = 1;
                let mut rest = t;
                for slot in coeffs[lead + 1..].iter_mut().rev() {
                    *slot = (rest % q as u64) as Elem;
                    rest /= q as u64;
                }
                let mut v = linalg::mat_mul(field, &coeffs, r, &self.rows, self.n + 1);
                normalize(field, &mut v);
                out.push(ProjPoint::new(field, v).expect("nonzero combination"));
            }
        }
        out.sort_by_key(|p| p.rank(q));
        out
    }

    pub fn point_ranks(&self, field: &Field) -> Vec<u64> {
        self.points(field).iter().map(|p| p.rank(field.q())).collect()
    }

    /// `{y : x·y = 0 for all x in self}` as a subspace of the same PG(n,q).
    pub fn annihilator(&self, field: &Field) -> Subspace {
        let ns = linalg::nullspace(field, &self.rows, self.n + 1);
        Self::from_flat(field, self.n, ns)
    }

    /// Restricts to the first `m + 1` coordinates. Only meaningful when the
    /// remaining coordinates vanish on the subspace.
    pub fn truncate(&self, field: &Field, m: usize) -> Subspace {
        let rows: Vec<Elem> = self.rows().flat_map(|r| r[..=m].iter().copied()).collect();
        Self::from_flat(field, m, rows)
    }

    /// Pads with zero coordinates to live in PG(n,q), n ≥ current ambient.
    pub fn embed(&self, n: usize) -> Subspace {
        assert!(n >= self.n);
        let mut rows = Vec::with_capacity(self.rank() * (n + 1));
        for r in self.rows() {
            rows.extend_from_slice(r);
            rows.resize(rows.len() + n - self.n, 0);
        }
        Subspace { n, rows }
    }
}

/// Smallest subspace containing all the given subspaces.
pub fn span(field: &Field, parts: &[&Subspace]) -> Result<Subspace> {
    let Some(first) = parts.first() else {
        return Err(Error::Unsupported("span of nothing".into()));
    };
    let n = first.n;
    let mut flat = Vec::new();
    for s in parts {
        if s.n != n {
            return Err(Error::AmbientMismatch(n, s.n));
        }
        flat.extend_from_slice(&s.rows);
    }
    Ok(Subspace::from_flat(field, n, flat))
}

/// Largest subspace contained in both.
pub fn meet(field: &Field, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.n != b.n {
        return Err(Error::AmbientMismatch(a.n, b.n));
    }
    let dual = span(field, &[&a.annihilator(field), &b.annihilator(field)])?;
    Ok(dual.annihilator(field))
}
