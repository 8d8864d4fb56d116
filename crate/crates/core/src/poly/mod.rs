//! Dense univariate polynomials over `F_q`.
//!
//! Coefficients are stored low degree first with no trailing zeros; the zero
//! polynomial is the empty vector and has no degree. The `std::ops` impls on
//! `&Poly` panic when the operands live in different fields; the `try_*`
//! methods report [`Error::FieldMismatch`] instead.

mod factor;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub use factor::{
    distinct_degree, factor, factor_with, irreducible_degrees, is_irreducible, squarefree_decomposition,
    squarefree_part, Factorization,
};

/// Karatsuba kicks in when both operands have at least this many coefficients.
const KARATSUBA_THRESHOLD: usize = 32;

#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: by degree, then lexicographic on coefficients, low degree first.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("t"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("t"))
    }
}

pub(crate) fn trim(v: &mut Vec<Elem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    /// The monomial `c * t^n`.
    pub fn monomial(field: &Field, c: Elem, n: usize) -> Poly {
        let mut coeffs = vec![Elem::ZERO; n + 1];
        coeffs[n] = c;
        Poly::from_coeffs(field, coeffs)
    }

    /// The variable `t`.
    pub fn t(field: &Field) -> Poly {
        Poly::monomial(field, Elem::ONE, 1)
    }

    pub fn from_coeffs(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        trim(&mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// From packed element codes, low degree first. Codes must be `< q`.
    pub fn from_codes(field: &Field, codes: Vec<u32>) -> Poly {
        let coeffs = codes
            .into_iter()
            .map(|c| field.elem(c).expect("element code out of range"))
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    /// From integers mapped into the prime subfield, low degree first.
    pub fn from_ints(field: &Field, ints: &[i64]) -> Poly {
        Poly::from_coeffs(field, ints.iter().map(|&n| field.from_int(n)).collect())
    }

    /// `prod (t - r)` over the given roots.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> Poly {
        roots.iter().fold(Poly::one(field), |acc, &r| {
            &acc * &Poly::from_coeffs(field, vec![field.neg(r), Elem::ONE])
        })
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer with `-1` for zero; for arithmetic on pole orders.
    #[inline]
    pub fn degree_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Elem::ONE
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `t^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Elem::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int((i % f.p() as usize) as i64)))
            .collect();
        Poly::from_coeffs(f, coeffs)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self * other)
    }

    /// Euclidean division: `(quotient, remainder)` with `deg r < deg b`.
    pub fn div_rem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        self.check(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = div_rem_slices(&self.field, &self.coeffs, &b.coeffs);
        Ok((Poly::from_coeffs(&self.field, q), Poly::from_coeffs(&self.field, r)))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        self.check(b)?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Poly::from_coeffs(&self.field, rem_slices(&self.field, &self.coeffs, &b.coeffs)))
    }

    /// Exact quotient; panics in debug builds when `b` does not divide `self`.
    pub(crate) fn div_exact(&self, b: &Poly) -> Poly {
        let (q, r) = self.div_rem(b).expect("exact division by a nonzero polynomial");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// `true` iff `b` divides `self`.
    pub fn divisible_by(&self, b: &Poly) -> Result<bool> {
        Ok(self.rem(b)?.is_zero())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let f = &self.field;
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            let r = rem_slices(f, &a, &b);
            a = b;
            b = r;
        }
        Ok(Poly::from_coeffs(f, a).monic())
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        self.check(other)?;
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = f.inv(r0.lead())?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Inverse modulo `m`; fails with `DivisionByZero` when not a unit.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.rem(m)?.xgcd(m)?;
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        s.rem(m)
    }

    pub fn pow(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        let prod = mul_slices(&self.field, &self.coeffs, &other.coeffs);
        Poly::from_coeffs(&self.field, rem_slices(&self.field, &prod, &m.coeffs))
    }

    /// `self^n mod m`.
    pub fn pow_mod(&self, mut n: u64, m: &Poly) -> Poly {
        let f = &self.field;
        let mut base = rem_slices(f, &self.coeffs, &m.coeffs);
        let mut acc = rem_slices(f, &[Elem::ONE], &m.coeffs);
        while n > 0 {
            if n & 1 == 1 {
                acc = rem_slices(f, &mul_slices(f, &acc, &base), &m.coeffs);
            }
            n >>= 1;
            if n > 0 {
                base = rem_slices(f, &mul_slices(f, &base, &base), &m.coeffs);
            }
        }
        Poly::from_coeffs(f, acc)
    }

    pub fn pow_mod_big(&self, n: &BigUint, m: &Poly) -> Poly {
        let f = &self.field;
        let base = rem_slices(f, &self.coeffs, &m.coeffs);
        let mut acc = rem_slices(f, &[Elem::ONE], &m.coeffs);
        for i in (0..n.bits()).rev() {
            acc = rem_slices(f, &mul_slices(f, &acc, &acc), &m.coeffs);
            if n.bit(i) {
                acc = rem_slices(f, &mul_slices(f, &acc, &base), &m.coeffs);
            }
        }
        Poly::from_coeffs(f, acc)
    }

    /// Multiplicity of `pi` in `self` (`self` nonzero, `pi` nonconstant).
    pub fn valuation(&self, pi: &Poly) -> u32 {
        debug_assert!(!self.is_zero() && !pi.is_constant());
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(pi).expect("nonzero divisor");
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }

    /// Renders with the given variable name, e.g. `t^5 + 2*t + 1`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format(c);
            let cs = if f.e() > 1 && cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (i, c == Elem::ONE) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        terms.join(" + ")
    }

    /// JSON coefficient list, low degree first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|&c| self.field.to_json(c)).collect())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), rhs.coeff(i))).collect();
        Poly::from_coeffs(f, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        Poly::from_coeffs(&self.field, mul_slices(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

fn schoolbook(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn add_slices(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.add(x, y)
        })
        .collect()
}

fn karatsuba(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.len() < KARATSUBA_THRESHOLD || b.len() < KARATSUBA_THRESHOLD {
        return schoolbook(f, a, b);
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = karatsuba(f, a0, b0);
    let z2 = karatsuba(f, a1, b1);
    let z1 = karatsuba(f, &add_slices(f, a0, a1), &add_slices(f, b0, b1));
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &c) in z0.iter().enumerate() {
        out[i] = f.add(out[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        out[i + 2 * half] = f.add(out[i + 2 * half], c);
    }
    for i in 0..z1.len() {
        let mid = f.sub(
            f.sub(z1[i], z0.get(i).copied().unwrap_or(Elem::ZERO)),
            z2.get(i).copied().unwrap_or(Elem::ZERO),
        );
        if !mid.is_zero() {
            out[i + half] = f.add(out[i + half], mid);
        }
    }
    out
}

pub(crate) fn mul_slices(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = karatsuba(f, a, b);
    trim(&mut out);
    out
}

pub(crate) fn div_rem_slices(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let inv_lead = f.inv(b[db]).expect("trimmed divisor has nonzero lead");
    let mut r = a.to_vec();
    let mut q = vec![Elem::ZERO; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = f.mul(r[i + db], inv_lead);
        q[i] = c;
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            r[i + j] = f.sub(r[i + j], f.mul(c, b[j]));
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem_slices(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        let mut r = a.to_vec();
        trim(&mut r);
        return r;
    }
    let inv_lead = f.inv(b[db]).expect("trimmed divisor has nonzero lead");
    let mut r = a.to_vec();
    for i in (0..=(a.len() - b.len())).rev() {
        let c = f.mul(r[i + db], inv_lead);
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            r[i + j] = f.sub(r[i + j], f.mul(c, b[j]));
        }
    }
    r.truncate(db);
    trim(&mut r);
    r
}
