use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::pg::{aff_point_count, aff_unrank, proj_point_count, proj_unrank, span, Subspace, SubspaceIter};
use crate::span::{undetermined_set, PointSet};

/// Character of a nonsingular quadric, numbered 0/1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Character {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Character {
    pub fn w(self) -> u32 {
        match self {
            Character::Elliptic => 0,
            Character::Parabolic => 1,
            Character::Hyperbolic => 2,
        }
    }

    /// Whether a tangent-at-infinity quadric of this character exists in PG(n,q).
    pub fn fits(self, n: usize) -> bool {
        match self {
            Character::Parabolic => n >= 2 && n.is_multiple_of(2),
            Character::Elliptic | Character::Hyperbolic => n >= 3 && n % 2 == 1,
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Character::Elliptic => "elliptic",
            Character::Parabolic => "parabolic",
            Character::Hyperbolic => "hyperbolic",
        })
    }
}

impl FromStr for Character {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elliptic" | "0" => Ok(Character::Elliptic),
            "parabolic" | "1" => Ok(Character::Parabolic),
            "hyperbolic" | "2" => Ok(Character::Hyperbolic),
            other => Err(Error::BadQuadric(format!("unknown character {other:?}"))),
        }
    }
}

/// A quadratic form `sum_{i<=j} c_ij x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm {
    vars: usize,
    /// Upper-triangular coefficients, row-major over `i <= j`.
    coeffs: Vec<Elem>,
}

impl QuadForm {
    pub fn zero(vars: usize) -> Self {
        QuadForm {
            vars,
            coeffs: vec![0; vars * (vars + 1) / 2],
        }
    }

    /// From coefficients listed in monomial order `x0x0, x0x1, ..., x1x1, ...`.
    pub fn from_coeffs(vars: usize, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != vars * (vars + 1) / 2 {
            return Err(Error::BadLength {
                got: coeffs.len(),
                expected: vars * (vars + 1) / 2,
            });
        }
        Ok(QuadForm { vars, coeffs })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.vars - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.coeffs[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Elem) {
        let k = self.idx(i, j);
        self.coeffs[k] = c;
    }

    pub fn eval(&self, field: &Field, x: &[Elem]) -> Elem {
        debug_assert_eq!(x.len(), self.vars);
        let mut acc = 0;
        let mut k = 0;
        for i in 0..self.vars {
            for j in i..self.vars {
                let c = self.coeffs[k];
                k += 1;
                if c != 0 && x[i] != 0 && x[j] != 0 {
                    acc = field.add(acc, field.mul(c, field.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    /// Gram matrix of the polar form `B(x,y) = Q(x+y) - Q(x) - Q(y)`.
    pub fn polar_matrix(&self, field: &Field) -> Vec<Elem> {
        let v = self.vars;
        let mut m = vec![0; v * v];
        for i in 0..v {
            for j in i..v {
                let c = self.get(i, j);
                if i == j {
                    m[i * v + i] = field.add(c, c);
                } else {
                    m[i * v + j] = c;
                    m[j * v + i] = c;
                }
            }
        }
        m
    }

    /// Radical of the polar form, as a projective subspace of PG(vars-1, q).
    pub fn radical(&self, field: &Field) -> Subspace {
        Subspace::from_flat(field, self.vars - 1, self.polar_matrix(field)).annihilator(field)
    }

    /// Nonsingular: no point of the polar radical lies on the quadric. In odd
    /// characteristic this is the same as a trivial radical.
    pub fn is_nonsingular(&self, field: &Field) -> bool {
        let radical = self.radical(field);
        radical
            .points(field)
            .iter()
            .all(|p| self.eval(field, p.coords()) != 0)
    }

    /// Every point of the subspace lies on the quadric.
    pub fn vanishes_on(&self, field: &Field, s: &Subspace) -> bool {
        s.points(field).iter().all(|p| self.eval(field, p.coords()) == 0)
    }

    /// Number of projective points on the quadric (scans PG(vars-1, q)).
    pub fn point_count(&self, field: &Field) -> u64 {
        let n = self.vars - 1;
        (0..proj_point_count(field.q(), n))
            .filter(|&r| {
                let p = proj_unrank(field.q(), n, r).expect("rank in range");
                self.eval(field, &p) == 0
            })
            .count() as u64
    }
}

/// The tangent-at-infinity quadric `X0 Xn = phi(X1, ..., X(n-1))` of PG(n,q).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricSpec {
    pub n: usize,
    pub character: Character,
    /// Form on `X1..X(n-1)`; variable `i` of `phi` is coordinate `X(i+1)`.
    pub phi: QuadForm,
    /// Projective index: dimension of the generators.
    pub g: usize,
}

impl QuadricSpec {
    /// The full homogeneous form `X0 Xn - phi` on `X0..Xn`.
    pub fn full_form(&self, field: &Field) -> QuadForm {
        let n = self.n;
        let mut form = QuadForm::zero(n + 1);
        form.set(0, n, 1);
        for i in 0..n - 1 {
            for j in i..n - 1 {
                form.set(i + 1, j + 1, field.neg(self.phi.get(i, j)));
            }
        }
        form
    }

    /// Whether a projective point (length n+1) lies on the quadric.
    pub fn contains(&self, field: &Field, coords: &[Elem]) -> bool {
        let n = self.n;
        let lhs = field.mul(coords[0], coords[n]);
        lhs == self.phi.eval(field, &coords[1..n])
    }

    pub fn vanishes_on(&self, field: &Field, s: &Subspace) -> bool {
        s.points(field).iter().all(|p| self.contains(field, p.coords()))
    }
}

/// Builds the standard tangent-at-infinity quadric of the given character.
///
/// `phi` is `X1X2 + X3X4 + ...` (hyperbolic), `X1^2 + X2X3 + ...`
/// (parabolic), or `X1^2 + b X1X2 + c X2^2 + X3X4 + ...` (elliptic, with
/// `(b, c)` the first pair in encoding order whose binary form is irreducible).
pub fn make_quadric(field: &Field, n: usize, character: Character) -> Result<QuadricSpec> {
    if !character.fits(n) {
        return Err(Error::BadQuadric(format!("no {character} tangent quadric in PG({n},q)")));
    }
    let vars = n - 1;
    let mut phi = QuadForm::zero(vars);
    let paired_from = match character {
        Character::Hyperbolic => 0,
        Character::Parabolic => {
            phi.set(0, 0, 1);
            1
        }
        Character::Elliptic => {
            let (b, c) = elliptic_pair(field);
            phi.set(0, 0, 1);
            phi.set(0, 1, b);
            phi.set(1, 1, c);
            2
        }
    };
    for i in (paired_from..vars).step_by(2) {
        phi.set(i, i + 1, 1);
    }
    let spec = QuadricSpec {
        n,
        character,
        phi,
        g: (n + character.w() as usize - 3) / 2,
    };
    if !spec.full_form(field).is_nonsingular(field) {
        return Err(Error::BadQuadric("constructed form is singular".into()));
    }
    Ok(spec)
}

/// Smallest `(b, c)` (b major) with `x^2 + b x y + c y^2` irreducible.
pub fn elliptic_pair(field: &Field) -> (Elem, Elem) {
    field
        .elements()
        .flat_map(|b| field.elements().map(move |c| (b, c)))
        .find(|&(b, c)| field.quadratic_has_no_root(b, c))
        .expect("an irreducible quadratic exists over every finite field")
}

/// The q^(n-1) affine points `(x1, ..., x(n-1), phi(x))`.
pub fn quadric_affine_part(field: Arc<Field>, spec: &QuadricSpec) -> Result<PointSet> {
    let q = field.q();
    let m = spec.n - 1;
    let points: Vec<Vec<Elem>> = (0..aff_point_count(q, m))
        .map(|r| {
            let mut x = aff_unrank(q, m, r);
            x.push(spec.phi.eval(&field, &x));
            x
        })
        .collect();
    PointSet::from_points(field, spec.n, points)
}

/// All g-subspaces of H∞ contained in the quadric, in enumeration order.
pub fn generators_at_infinity(field: &Field, spec: &QuadricSpec) -> Result<Vec<Subspace>> {
    let candidates: Vec<Subspace> = SubspaceIter::at_infinity(field, spec.n, spec.g as isize)?.collect();
    Ok(candidates
        .into_par_iter()
        .filter(|s| spec.vanishes_on(field, s))
        .collect())
}

/// The generator-count product for the number of generators through a fixed
/// (g-1)-subspace: `(q^(2-w) + 1)(q^(3-w) + 1)...(q^((n-2g+1-w)/2) + 1)`.
pub fn rho(q: u32, n: usize, character: Character) -> Result<u64> {
    if !character.fits(n) {
        return Err(Error::BadQuadric(format!("no {character} quadric in PG({n},q)")));
    }
    let w = character.w() as i64;
    let g = (n as i64 + w - 3) / 2;
    let top = (n as i64 - 2 * g + 1 - w) / 2;
    Ok(((2 - w)..=top).map(|e| (q as u64).pow(e as u32) + 1).product())
}

/// Generators of the quadric (in all of PG(n,q)) containing `f`.
pub fn generators_through(field: &Field, spec: &QuadricSpec, f: &Subspace) -> Result<Vec<Subspace>> {
    if f.n() != spec.n {
        return Err(Error::AmbientMismatch(spec.n, f.n()));
    }
    let want = spec.g as isize - 1;
    if f.dim() != want {
        return Err(Error::DimensionOutOfRange { k: f.dim(), min: want, max: want });
    }
    if !spec.vanishes_on(field, f) {
        return Err(Error::NotInQuadric);
    }
    let q = field.q();
    let mut found = HashSet::new();
    let mut out = Vec::new();
    for r in 0..proj_point_count(q, spec.n) {
        let p = proj_unrank(q, spec.n, r).expect("rank in range");
        if !spec.contains(field, &p) || f.contains_vector(field, &p) {
            continue;
        }
        let g = span(field, &[f, &Subspace::point(field, &p)?])?;
        if found.contains(&g) {
            continue;
        }
        if spec.vanishes_on(field, &g) {
            found.insert(g.clone());
            out.push(g);
        }
    }
    out.sort();
    Ok(out)
}

pub fn count_generators_through(field: &Field, spec: &QuadricSpec, f: &Subspace) -> Result<u64> {
    Ok(generators_through(field, spec, f)?.len() as u64)
}

/// Orders and shapes where the undetermined g-subspaces of the affine part
/// are known to include more than the generators at infinity.
pub fn is_exceptional(q: u32, n: usize, character: Character) -> bool {
    (n == 2 && q.is_multiple_of(2)) || (n == 4 && q == 2) || (n == 5 && q == 2 && character == Character::Elliptic)
}

/// Undetermined g-subspaces of a quadric's affine part against its
/// generators at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadricDetermination {
    pub undetermined: Vec<Subspace>,
    pub generators: Vec<Subspace>,
    /// Undetermined g-subspaces that are not generators.
    pub extra: Vec<Subspace>,
    /// Generators at infinity that are determined.
    pub missing: Vec<Subspace>,
    pub exceptional: bool,
}

impl QuadricDetermination {
    /// Equality outside the exceptional cases; a strict superset inside them.
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && (self.extra.is_empty() != self.exceptional)
    }
}

pub fn quadric_determination(field: Arc<Field>, spec: &QuadricSpec) -> Result<QuadricDetermination> {
    let u = quadric_affine_part(field.clone(), spec)?;
    let undetermined = undetermined_set(&u, spec.g as isize)?;
    let generators = generators_at_infinity(&field, spec)?;
    let extra = undetermined.iter().filter(|s| !generators.contains(s)).cloned().collect();
    let missing = generators.iter().filter(|s| !undetermined.contains(s)).cloned().collect();
    Ok(QuadricDetermination {
        undetermined,
        generators,
        extra,
        missing,
        exceptional: is_exceptional(field.q(), spec.n, spec.character),
    })
}

/// All subspaces of PG(n,q) of projective dimension `dim` lying on the quadric.
pub fn subspaces_on_quadric(field: &Field, spec: &QuadricSpec, dim: isize) -> Result<Vec<Subspace>> {
    let candidates: Vec<Subspace> = SubspaceIter::projective(field, spec.n, dim)?.collect();
    Ok(candidates
        .into_par_iter()
        .filter(|s| spec.vanishes_on(field, s))
        .collect())
}
