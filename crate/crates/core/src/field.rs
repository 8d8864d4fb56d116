//! Finite fields `F_q`, `q = p^e`.
//!
//! Elements are stored as a packed code `sum c_i p^i` of their coordinates in
//! the polynomial basis `1, u, ..., u^{e-1}` where `u` is a root of the defining
//! modulus. Code order is the lexicographic order on `(c_{e-1}, ..., c_0)`, which
//! is also the enumeration order.
//!
//! Supported sizes: `p < 2^31` and `q < 2^32`, so that `p^2` fits a `u64` and
//! every code fits a `u32`. Extension fields with `q <= 1024` use addition and
//! Zech-log tables; larger extensions fall back to coordinate arithmetic.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};

const TABLE_MAX_Q: u32 = 1024;
const MAX_P: u64 = 1 << 31;

/// An element of some [`Field`], in canonical packed form.
///
/// An `Elem` carries no reference to its field; arithmetic goes through the
/// owning [`Field`]. Use [`FieldElem`] for a self-describing checked value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The packed coordinate code, in `[0, q)`.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_code(code: u32) -> Elem {
        Elem(code)
    }
}

struct Tables {
    add: Vec<u16>,
    neg: Vec<u16>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

enum Arith {
    Prime,
    Table(Tables),
    Generic,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over `F_p`, low degree first, length `e + 1`. Empty when `e == 1`.
    modulus: Vec<u32>,
    arith: Arith,
}

/// Handle to an immutable finite field; cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.e, self.0.modulus)
        }
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds `F_{p^e}`. With `e > 1` and no modulus, the lexicographically least
    /// monic irreducible of degree `e` (coefficients compared low degree first)
    /// is used. A supplied modulus is given low degree first, including the
    /// leading coefficient.
    pub fn new(p: u64, e: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_P {
            return Err(Error::FieldTooLarge(p));
        }
        if e == 0 {
            return Err(Error::InvalidSpec("extension degree must be >= 1".into()));
        }
        let q = (p as u128).pow(e);
        if q > u32::MAX as u128 {
            return Err(Error::FieldTooLarge(p));
        }
        let p32 = p as u32;
        if e == 1 {
            if let Some(m) = modulus {
                // a degree-1 modulus is meaningless but harmless when it is `t + c`
                if m.len() != 2 || m[1] % p != 1 {
                    return Err(Error::BadModulus("prime field modulus must be monic linear".into()));
                }
            }
            return Ok(Field(Arc::new(Inner {
                p: p32,
                e: 1,
                q: p32,
                modulus: Vec::new(),
                arith: Arith::Prime,
            })));
        }
        let base = Field::prime(p)?;
        let modulus = match modulus {
            Some(m) => {
                let coeffs: Vec<u32> = m.iter().map(|&c| (c % p) as u32).collect();
                let mpoly = Poly::from_codes(&base, coeffs.clone());
                if mpoly.degree() != Some(e as usize) {
                    return Err(Error::BadModulus(format!("degree must be {e}")));
                }
                if !mpoly.is_monic() {
                    return Err(Error::BadModulus("modulus must be monic".into()));
                }
                if !poly::is_irreducible(&mpoly)? {
                    return Err(Error::BadModulus("modulus is reducible".into()));
                }
                mpoly.coeffs().iter().map(|c| c.code()).collect()
            }
            None => least_irreducible(&base, e)?,
        };
        let mut inner = Inner {
            p: p32,
            e,
            q: q as u32,
            modulus,
            arith: Arith::Generic,
        };
        if inner.q <= TABLE_MAX_Q {
            inner.arith = Arith::Table(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Defining modulus over `F_p`, low degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.e == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from polynomial-basis coordinates, low degree first. Missing
    /// coordinates are zero; coordinates are reduced mod `p`.
    pub fn from_coords(&self, coords: &[i64]) -> Result<Elem> {
        if coords.len() > self.0.e as usize {
            return Err(Error::InvalidSpec(format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                self.0.e
            )));
        }
        let p = self.0.p as i64;
        let mut code = 0u64;
        for &c in coords.iter().rev() {
            code = code * p as u64 + c.rem_euclid(p) as u64;
        }
        Ok(Elem(code as u32))
    }

    /// Element from a packed code; `None` if out of range.
    pub fn elem(&self, code: u32) -> Option<Elem> {
        (code < self.0.q).then_some(Elem(code))
    }

    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.e as usize);
        let mut c = a.0;
        for _ in 0..self.0.e {
            out.push(c % self.0.p);
            c /= self.0.p;
        }
        out
    }

    /// The generator `u` of the polynomial basis (`None` for prime fields).
    pub fn generator(&self) -> Option<Elem> {
        (self.0.e > 1).then_some(Elem(self.0.p))
    }

    /// All `q` elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.0.q))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.arith {
            Arith::Prime => {
                let s = a.0 as u64 + b.0 as u64;
                let p = self.0.p as u64;
                Elem(if s >= p { s - p } else { s } as u32)
            }
            Arith::Table(t) => Elem(t.add[(a.0 * self.0.q + b.0) as usize] as u32),
            Arith::Generic => self.digitwise(a, b, |x, y, p| (x + y) % p),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.arith {
            Arith::Prime => Elem(if a.0 == 0 { 0 } else { self.0.p - a.0 }),
            Arith::Table(t) => Elem(t.neg[a.0 as usize] as u32),
            Arith::Generic => self.digitwise(a, Elem::ZERO, |x, _, p| (p - x) % p),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.arith {
            Arith::Prime => {
                let p = self.0.p;
                Elem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 })
            }
            _ => self.add(a, self.neg(b)),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.arith {
            Arith::Prime => Elem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Arith::Table(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Elem::ZERO
                } else {
                    Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            Arith::Generic => Elem(generic_mul(&self.0, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.arith {
            Arith::Prime => {
                // extended Euclid on (a, p)
                let (mut r0, mut r1) = (self.0.p as i64, a.0 as i64);
                let (mut s0, mut s1) = (0i64, 1i64);
                while r1 != 0 {
                    let qt = r0 / r1;
                    (r0, r1) = (r1, r0 - qt * r1);
                    (s0, s1) = (s1, s0 - qt * s1);
                }
                Elem(s0.rem_euclid(self.0.p as i64) as u32)
            }
            Arith::Table(t) => {
                let n = self.0.q - 1;
                Elem(t.exp[((n - t.log[a.0 as usize]) % n) as usize])
            }
            Arith::Generic => self.pow(a, self.0.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: Elem, n: &BigUint) -> Elem {
        let mut acc = Elem::ONE;
        for i in (0..n.bits()).rev() {
            acc = self.mul(acc, acc);
            if n.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    /// The Frobenius `a -> a^p`, computed from coordinates as `sum c_i (u^p)^i`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        if self.0.e == 1 {
            return a;
        }
        let up = self.pow(Elem(self.0.p), self.0.p as u64);
        let mut acc = Elem::ZERO;
        for &c in self.coords(a).iter().rev() {
            acc = self.add(self.mul(acc, up), Elem(c));
        }
        acc
    }

    /// Euler criterion; zero counts as a square. Always true in characteristic 2.
    pub fn is_square(&self, a: Elem) -> bool {
        if a.is_zero() || self.0.p == 2 {
            return true;
        }
        self.pow(a, (self.0.q as u64 - 1) / 2) == Elem::ONE
    }

    /// Canonical integer representative used for ordering: the code itself.
    #[inline]
    pub fn repr(&self, a: Elem) -> u32 {
        a.0
    }

    /// Human-readable form: an integer for prime fields, a polynomial in `u` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.0.e == 1 {
            return a.0.to_string();
        }
        let terms: Vec<String> = self
            .coords(a)
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}*u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}*u^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// JSON form of an element: an integer for prime fields, else the coordinate list.
    pub fn to_json(&self, a: Elem) -> serde_json::Value {
        if self.0.e == 1 {
            serde_json::Value::from(a.0)
        } else {
            serde_json::Value::from(self.coords(a))
        }
    }

    fn digitwise(&self, a: Elem, b: Elem, op: impl Fn(u32, u32, u32) -> u32) -> Elem {
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.0.e {
            out += op(x % p, y % p, p) as u64 * scale;
            scale *= p as u64;
            x /= p;
            y /= p;
        }
        Elem(out as u32)
    }
}

fn generic_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    let e = inner.e as usize;
    let digits = |mut c: u32| {
        let mut d = vec![0u64; e];
        for slot in d.iter_mut() {
            *slot = (c % inner.p) as u64;
            c /= inner.p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // reduce by the monic modulus, top down
    for i in (e..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..e {
            let m = inner.modulus[j] as u64;
            prod[i - e + j] = (prod[i - e + j] + (p - c) * m) % p;
        }
    }
    let mut code = 0u64;
    for &d in prod[..e].iter().rev() {
        code = code * p + d;
    }
    code as u32
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let p = inner.p;
    let e = inner.e;
    let digit_op = |a: u32, b: u32, op: &dyn Fn(u32, u32) -> u32| {
        let (mut x, mut y) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..e {
            out += op(x % p, y % p) * scale;
            scale *= p;
            x /= p;
            y /= p;
        }
        out
    };
    let mut add = vec![0u16; (q * q) as usize];
    for a in 0..q {
        for b in 0..q {
            add[(a * q + b) as usize] = digit_op(a, b, &|x, y| (x + y) % p) as u16;
        }
    }
    let neg = (0..q)
        .map(|a| digit_op(a, 0, &|x, _| (p - x) % p) as u16)
        .collect();
    let n = (q - 1) as u64;
    let factors = prime_factors(n);
    let gpow = |g: u32, mut k: u64| {
        let (mut base, mut acc) = (g, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = generic_mul(inner, acc, base);
            }
            base = generic_mul(inner, base, base);
            k >>= 1;
        }
        acc
    };
    let generator = (1..q)
        .find(|&g| factors.iter().all(|&r| gpow(g, n / r) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * n as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for i in 0..n as usize {
        exp[i] = cur;
        exp[i + n as usize] = cur;
        log[cur as usize] = i as u32;
        cur = generic_mul(inner, cur, generator);
    }
    Tables { add, neg, log, exp }
}

fn least_irreducible(base: &Field, e: u32) -> Result<Vec<u32>> {
    let p = base.p() as u64;
    let count = p.checked_pow(e).ok_or(Error::FieldTooLarge(p))?;
    // lexicographic on (c_0, c_1, ..., c_{e-1}) with c_0 most significant
    for idx in 0..count {
        let mut coeffs = vec![0u32; e as usize + 1];
        let mut rest = idx;
        for i in (0..e as usize).rev() {
            coeffs[i] = (rest % p) as u32;
            rest /= p;
        }
        coeffs[e as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let cand = Poly::from_codes(base, coeffs.clone());
        if poly::is_irreducible(&cand)? {
            return Ok(coeffs);
        }
    }
    Err(Error::BadModulus(format!("no irreducible of degree {e}")))
}

/// A field element bundled with its field, with checked operations.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl FieldElem {
    pub fn new(field: &Field, value: Elem) -> Self {
        FieldElem {
            field: field.clone(),
            value,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: Elem) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, n: u64) -> FieldElem {
        self.with(self.field.pow(self.value, n))
    }
}
