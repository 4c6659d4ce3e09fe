//! Arithmetic in GF(p^h).
//!
//! Elements are encoded as integers in `[0, q)`: the polynomial
//! `a0 + a1 x + ... + a_{h-1} x^{h-1}` is stored as `sum a_i p^i`. The
//! modulus is the monic irreducible of degree `h` with the smallest such
//! encoding, so two builds of the same field always agree bit for bit.
//!
//! Hot paths work on raw [`Elem`] values through [`Field`]; [`FieldElement`]
//! wraps an encoding together with its field for checked arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw element encoding.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Full add/mul tables are built up to this order.
const TABLE_ORDER: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    pub q: u32,
    /// Monic modulus, coefficients low to high (length `h + 1`).
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// Base-`p` encoding of the modulus, leading coefficient included.
    pub fn modulus_encoding(&self) -> u64 {
        encode_poly(&self.modulus, self.p)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.h, self.modulus_encoding())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Parses `p,h,modulus-encoding`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Unsupported(format!("malformed field description {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let p: u32 = parts[0].parse().map_err(|_| bad())?;
        let h: u32 = parts[1].parse().map_err(|_| bad())?;
        let enc: u64 = parts[2].parse().map_err(|_| bad())?;
        Ok(Field::with_modulus(p, h, enc)?.spec().clone())
    }
}

/// The checked operations of [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Pow(u64),
}

#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) [{}]", self.spec.q, self.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(p^h) with the minimal-encoding irreducible modulus.
    pub fn new(p: u32, h: u32) -> Result<Self> {
        let q = check_order(p, h)?;
        let base = q as u64;
        let modulus = (0..base)
            .map(|low| decode_poly(base + low, p, h as usize + 1))
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::build(FieldSpec { p, h, q, modulus }))
    }

    /// Builds GF(p^h) with an explicit modulus given by its encoding.
    pub fn with_modulus(p: u32, h: u32, encoding: u64) -> Result<Self> {
        let q = check_order(p, h)?;
        let base = q as u64;
        if encoding < base || encoding >= 2 * base {
            return Err(Error::BadModulus(encoding));
        }
        let modulus = decode_poly(encoding, p, h as usize + 1);
        if !is_irreducible(&modulus, p) {
            return Err(Error::BadModulus(encoding));
        }
        Ok(Self::build(FieldSpec { p, h, q, modulus }))
    }

    /// Prime-power convenience constructor.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, h)
    }

    fn build(spec: FieldSpec) -> Self {
        let q = spec.q;
        let mut field = Field {
            spec,
            add_table: None,
            mul_table: None,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
        };
        field.neg = (0..q).map(|a| field.neg_digits(a)).collect();

        // Smallest primitive element, then log/antilog tables from it.
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| multiplicative_order(&field, g) == order)
            .expect("the multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i;
            x = field.poly_mul(x, generator);
        }
        exp.extend_from_within(..);
        field.exp = exp;
        field.log = log;
        field.inv = (0..q)
            .map(|a| if a == 0 { 0 } else { field.exp[((order - field.log[a as usize]) % order) as usize] })
            .collect();

        if q <= TABLE_ORDER {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(field.add_digits(a, b) as u16);
                    mul.push(field.mul_log(a, b) as u16);
                }
            }
            field.add_table = Some(add);
            field.mul_table = Some(mul);
        }
        field
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.spec.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.spec.h
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.spec.q
    }

    pub fn element(&self, enc: u32) -> Result<FieldElement<'_>> {
        if enc >= self.spec.q {
            return Err(Error::ElementOutOfRange { enc, q: self.spec.q });
        }
        Ok(FieldElement { field: self, enc })
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.add_table {
            return t[(a * self.spec.q + b) as usize] as Elem;
        }
        if self.spec.p == 2 {
            return a ^ b;
        }
        self.add_digits(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.mul_table {
            return t[(a * self.spec.q + b) as usize] as Elem;
        }
        self.mul_log(a, b)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    /// Inverse of an element the caller knows to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Dispatches one checked operation. `b` is ignored for unary ops.
    pub fn arith(&self, op: ArithOp, a: Elem, b: Elem) -> Result<Elem> {
        let q = self.spec.q;
        for x in [a, b] {
            if x >= q {
                return Err(Error::ElementOutOfRange { enc: x, q });
            }
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Neg => self.neg(a),
            ArithOp::Inv => self.inv(a)?,
            ArithOp::Pow(e) => self.pow(a, e),
        })
    }

    /// Multiplication straight from the polynomial representation: schoolbook
    /// product followed by reduction modulo the modulus. Used to seed the
    /// tables; kept public so the tables can be checked against it.
    pub fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p as u64;
        let h = self.spec.h as usize;
        let da = decode_poly(a as u64, self.spec.p, h);
        let db = decode_poly(b as u64, self.spec.p, h);
        let mut prod = vec![0u64; 2 * h];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Modulus is monic: x^h = -(m_0 + ... + m_{h-1} x^{h-1}).
        for top in (h..2 * h).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.spec.modulus[..h].iter().enumerate() {
                let idx = top - h + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..h].iter().map(|&c| c as u32).collect();
        encode_poly(&low, self.spec.p) as Elem
    }

    /// True when `t^2 + b t + c` has no root in the field.
    pub fn quadratic_has_no_root(&self, b: Elem, c: Elem) -> bool {
        self.elements()
            .all(|t| self.add(self.add(self.mul(t, t), self.mul(b, t)), c) != 0)
    }

    fn mul_log(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    fn add_digits(&self, mut a: Elem, mut b: Elem) -> Elem {
        let p = self.spec.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.h {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn neg_digits(&self, mut a: Elem) -> Elem {
        let p = self.spec.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.h {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }
}

/// An element bundled with its field; arithmetic checks field identity.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    enc: Elem,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.enc, self.field.q())
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc && self.field == other.field
    }
}

impl Eq for FieldElement<'_> {}

impl<'f> FieldElement<'f> {
    pub fn enc(&self) -> Elem {
        self.enc
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, enc: Elem) -> Self {
        FieldElement { field: self.field, enc }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.enc, other.enc)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.enc, other.enc)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.enc, other.enc)))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.enc))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.enc)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.field.pow(self.enc, e))
    }
}

fn check_order(p: u32, h: u32) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if h == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut q: u64 = 1;
    for _ in 0..h {
        q *= p as u64;
        if q > MAX_ORDER as u64 {
            return Err(Error::FieldTooLarge { p, h });
        }
    }
    Ok(q as u32)
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^h`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

fn multiplicative_order(field: &Field, g: Elem) -> u32 {
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = field.poly_mul(x, g);
        k += 1;
        if k > field.q() {
            return 0;
        }
    }
    k
}

fn decode_poly(mut enc: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((enc % p as u64) as u32);
        enc /= p as u64;
    }
    out
}

fn encode_poly(coeffs: &[u32], p: u32) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 || poly[deg] != 1 {
        return false;
    }
    for d in 1..=deg / 2 {
        let base = (p as u64).pow(d as u32);
        for low in 0..base {
            let divisor = decode_poly(base + low, p, d + 1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let p = p as u64;
    let dd = monic_div.len() - 1;
    for top in (dd..rem.len()).rev() {
        let c = rem[top] % p;
        if c == 0 {
            continue;
        }
        for (i, &m) in monic_div.iter().enumerate() {
            let idx = top - dd + i;
            rem[idx] = (rem[idx] + (p - c) * m as u64) % p;
        }
    }
    rem[..dd].iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_use_monomial_modulus() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.spec().modulus, vec![0, 1]);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn gf4_modulus_and_product() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.spec().modulus_encoding(), 7);
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.spec().modulus, vec![1, 0, 1]);
        assert_eq!(f.spec().to_string(), "3,2,10");
        assert_eq!(f.elements().filter(|&a| f.inv(a).is_ok()).count(), 8);
    }

    #[test]
    fn gf5_inverse_of_two() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(2).unwrap(), 3);
        assert_eq!(f.inv(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(Field::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(Field::new(3, 11), Err(Error::FieldTooLarge { .. })));
        assert!(Field::new(2, 16).is_ok());
        assert!(Field::with_modulus(2, 2, 5).is_err()); // x^2+1 = (x+1)^2
    }

    #[test]
    fn field_spec_round_trips_through_text() {
        let f = Field::new(2, 3).unwrap();
        let parsed: FieldSpec = f.spec().to_string().parse().unwrap();
        assert_eq!(&parsed, f.spec());
        assert!("2,2,5".parse::<FieldSpec>().is_err());
        assert!("2,2".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn mixed_field_operands_are_rejected() {
        let f4 = Field::new(2, 2).unwrap();
        let f2 = Field::new(2, 1).unwrap();
        let a = f4.element(1).unwrap();
        let b = f2.element(1).unwrap();
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        assert!(f4.element(4).is_err());
        assert_eq!(f4.arith(ArithOp::Inv, 0, 0), Err(Error::DivisionByZero));
        assert_eq!(f4.arith(ArithOp::Pow(3), 2, 0), Ok(1));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
