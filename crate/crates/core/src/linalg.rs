//! Dense linear algebra over GF(q) on row-major flattened matrices.

use crate::gf::{Elem, Field};

/// Reduces `m` (rows of length `cols`) to reduced row echelon form in place,
/// dropping zero rows. Returns the pivot column of each remaining row.
pub fn rref_in_place(field: &Field, m: &mut Vec<Elem>, cols: usize) -> Vec<usize> {
    if cols == 0 {
        m.clear();
        return Vec::new();
    }
    let rows = m.len() / cols;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
            continue;
        };
        if sel != r {
            for j in 0..cols {
                m.swap(sel * cols + j, r * cols + j);
            }
        }
        let inv = field.inv_nz(m[r * cols + c]);
        if inv != 1 {
            for j in c..cols {
                m[r * cols + j] = field.mul(m[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i * cols + c];
            if factor == 0 {
                continue;
            }
            let neg = field.neg(factor);
            for j in c..cols {
                let v = m[r * cols + j];
                if v != 0 {
                    m[i * cols + j] = field.add(m[i * cols + j], field.mul(neg, v));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r * cols);
    pivots
}

pub fn rank(field: &Field, rows: &[Elem], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref_in_place(field, &mut m, cols).len()
}

/// Basis (flattened, each vector of length `cols`) of `{x : M x = 0}`.
pub fn nullspace(field: &Field, rows: &[Elem], cols: usize) -> Vec<Elem> {
    let mut m = rows.to_vec();
    let pivots = rref_in_place(field, &mut m, cols);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let start = out.len();
        out.resize(start + cols, 0);
        out[start + free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            out[start + pc] = field.neg(m[i * cols + free]);
        }
    }
    out
}

/// Reduces `v` against an RREF basis with known pivots; zero iff `v` is in the span.
pub fn reduce(field: &Field, basis: &[Elem], pivots: &[usize], v: &mut [Elem]) {
    let cols = v.len();
    for (i, &pc) in pivots.iter().enumerate() {
        let c = v[pc];
        if c == 0 {
            continue;
        }
        let neg = field.neg(c);
        for j in pc..cols {
            let b = basis[i * cols + j];
            if b != 0 {
                v[j] = field.add(v[j], field.mul(neg, b));
            }
        }
    }
}

/// Dot product of two equal-length vectors.
pub fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// `coeffs` (r x k) times `basis` (k x cols).
pub fn mat_mul(field: &Field, coeffs: &[Elem], k: usize, basis: &[Elem], cols: usize) -> Vec<Elem> {
    let r = coeffs.len().checked_div(k).unwrap_or(0);
    let mut out = vec![0; r * cols];
    for i in 0..r {
        for t in 0..k {
            let c = coeffs[i * k + t];
            if c == 0 {
                continue;
            }
            for j in 0..cols {
                let b = basis[t * cols + j];
                if b != 0 {
                    out[i * cols + j] = field.add(out[i * cols + j], field.mul(c, b));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_drops_duplicate_rows() {
        let f = Field::new(2, 1).unwrap();
        let mut m = vec![1, 1, 1, 1];
        let piv = rref_in_place(&f, &mut m, 2);
        assert_eq!(piv, vec![0]);
        assert_eq!(m, vec![1, 1]);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = Field::new(3, 1).unwrap();
        let m = vec![1, 2, 0, 1, 0, 1, 1, 1];
        let ns = nullspace(&f, &m, 4);
        assert_eq!(ns.len() / 4, 4 - rank(&f, &m, 4));
        for v in ns.chunks(4) {
            for row in m.chunks(4) {
                assert_eq!(dot(&f, row, v), 0);
            }
        }
    }
}
