//! Reference implementations used as test oracles. Nothing here calls into
//! the library's arithmetic or linear algebra.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashSet};

/// GF(p^h) as polynomials over GF(p) reduced by an explicit monic modulus.
#[derive(Clone, Debug)]
pub struct NaiveField {
    pub p: u32,
    pub h: u32,
    pub q: u32,
    /// Monic modulus, low to high, length h + 1.
    pub modulus: Vec<u32>,
}

fn digits(mut x: u64, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (x % p as u64) as u32;
            x /= p as u64;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u64 {
    d.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

/// Remainder of `a` modulo a monic `m` over GF(p), both low to high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
        r.pop();
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        for enc in 0..(p as u64).pow(d as u32) {
            let mut f = digits(enc, p, d);
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl NaiveField {
    /// Minimal-encoding monic irreducible modulus, found by exhaustive search.
    pub fn new(p: u32, h: u32) -> Self {
        let base = (p as u64).pow(h);
        let modulus = (base..2 * base)
            .map(|enc| digits(enc, p, h as usize + 1))
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist");
        NaiveField { p, h, q: base as u32, modulus }
    }

    pub fn modulus_encoding(&self) -> u64 {
        undigits(&self.modulus, self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (digits(a as u64, self.p, self.h as usize), digits(b as u64, self.p, self.h as usize));
        let s: Vec<u32> = x.iter().zip(&y).map(|(&u, &v)| (u + v) % self.p).collect();
        undigits(&s, self.p) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        let x = digits(a as u64, self.p, self.h as usize);
        let s: Vec<u32> = x.iter().map(|&u| (self.p - u) % self.p).collect();
        undigits(&s, self.p) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let h = self.h as usize;
        let (x, y) = (digits(a as u64, self.p, h), digits(b as u64, self.p, h));
        let mut prod = vec![0u32; 2 * h - 1];
        for i in 0..h {
            for j in 0..h {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(h, 0);
        undigits(&r, self.p) as u32
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (1..self.q).find(|&c| self.mul(a, c) == 1)
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b).expect("nonzero divisor"))
    }
}

/// Rank by Gaussian elimination over the naive field.
pub fn rank(f: &NaiveField, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let lead = m[r][c];
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = f.div(m[i][c], lead);
                for j in 0..cols {
                    let t = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by cofactor expansion along the first row.
pub fn det(f: &NaiveField, m: &[Vec<u32>]) -> u32 {
    if m.is_empty() {
        return 1;
    }
    let mut acc = 0;
    for j in 0..m.len() {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<u32>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let t = f.mul(m[0][j], det(f, &minor));
        acc = if j % 2 == 0 { f.add(acc, t) } else { f.sub(acc, t) };
    }
    acc
}

/// Rank as the size of the largest nonsingular square minor.
pub fn rank_by_minors(f: &NaiveField, m: &[Vec<u32>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for r in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, r) {
            for cs in subsets(cols, r) {
                let sub: Vec<Vec<u32>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                if det(f, &sub) != 0 {
                    return r;
                }
            }
        }
    }
    0
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// All q^n vectors of length n, last coordinate fastest.
pub fn all_vectors(q: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// The vector space spanned by `basis`, as a set of vectors.
pub fn linear_span(f: &NaiveField, n: usize, basis: &[Vec<u32>]) -> HashSet<Vec<u32>> {
    let mut out = HashSet::new();
    for coeffs in all_vectors(f.q, basis.len()) {
        let mut v = vec![0; n];
        for (c, b) in coeffs.iter().zip(basis) {
            for i in 0..n {
                v[i] = f.add(v[i], f.mul(*c, b[i]));
            }
        }
        out.insert(v);
    }
    out
}

/// Affine dimension spanned by a point list (-1 when empty).
pub fn affine_dim(f: &NaiveField, pts: &[Vec<u32>]) -> isize {
    let Some(base) = pts.first() else { return -1 };
    let diffs: Vec<Vec<u32>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(&a, &b)| f.sub(a, b)).collect())
        .collect();
    if diffs.is_empty() {
        0
    } else {
        rank(f, &diffs) as isize
    }
}

/// Whether the direction with the given vector-space basis (vectors of
/// length n, i.e. without the X0 coordinate) is determined by `u`.
pub fn naive_determined(f: &NaiveField, n: usize, u: &[Vec<u32>], direction: &[Vec<u32>]) -> bool {
    let k1 = direction.len() as isize;
    let span = linear_span(f, n, direction);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for p in all_vectors(f.q, n) {
        if seen.contains(&p) {
            continue;
        }
        let flat: HashSet<Vec<u32>> = span
            .iter()
            .map(|d| p.iter().zip(d).map(|(&a, &b)| f.add(a, b)).collect())
            .collect();
        let inside: Vec<Vec<u32>> = u.iter().filter(|x| flat.contains(*x)).cloned().collect();
        if affine_dim(f, &inside) == k1 {
            return true;
        }
        seen.extend(flat);
    }
    false
}

/// Gaussian binomial by the product formula.
pub fn gaussian_product(n: u32, k: u32, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Undetermined ideal lines of a subset of AG(3,q), each as the set of its
/// q+1 normalized direction vectors.
pub fn naive_undetermined_lines(f: &NaiveField, u: &[Vec<u32>]) -> BTreeSet<BTreeSet<Vec<u32>>> {
    let mut out = BTreeSet::new();
    let dirs = normalized_directions(f, 3);
    for (i, a) in dirs.iter().enumerate() {
        for b in &dirs[i + 1..] {
            let line = ideal_line(f, a, b);
            if out.contains(&line) {
                continue;
            }
            if !naive_determined(f, 3, u, &[a.clone(), b.clone()]) {
                out.insert(line);
            }
        }
    }
    out
}

pub fn normalized_directions(f: &NaiveField, n: usize) -> Vec<Vec<u32>> {
    all_vectors(f.q, n)
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

pub fn normalize(f: &NaiveField, v: &[u32]) -> Vec<u32> {
    let lead = *v.iter().find(|&&x| x != 0).expect("nonzero");
    let inv = f.inv(lead).unwrap();
    v.iter().map(|&x| f.mul(x, inv)).collect()
}

pub fn ideal_line(f: &NaiveField, a: &[u32], b: &[u32]) -> BTreeSet<Vec<u32>> {
    linear_span(f, a.len(), &[a.to_vec(), b.to_vec()])
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0))
        .map(|v| normalize(f, &v))
        .collect()
}

/// Direction vectors d with u + t·d = u for every t.
pub fn translation_directions(f: &NaiveField, u: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let set: HashSet<&Vec<u32>> = u.iter().collect();
    let n = u.first().map_or(0, Vec::len);
    normalized_directions(f, n)
        .into_iter()
        .filter(|d| {
            u.iter().all(|p| {
                (0..f.q).all(|t| {
                    let m: Vec<u32> = p.iter().zip(d).map(|(&a, &b)| f.add(a, f.mul(t, b))).collect();
                    set.contains(&m)
                })
            })
        })
        .collect()
}

/// Basis of the right nullspace of `m` (rows of length `cols`).
pub fn nullspace(f: &NaiveField, m: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]).unwrap();
        for j in 0..cols {
            m[r][j] = f.mul(m[r][j], inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let t = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[row][free]);
            }
            v
        })
        .collect()
}
