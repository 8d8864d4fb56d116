//! Infix expressions for functions on a curve model.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := integer | 't' | 'x' | 'y' | 'u' | '(' sum ')'
//! ```
//!
//! On `P^1` the coordinate is `t` (`x` is accepted as an alias) and any
//! quotient whose denominator splits into linear factors is allowed. On a
//! hyperelliptic model `y^2` is rewritten to `f(x)` and only division by
//! nonzero constants is allowed. `u` is the generator of an extension field.

use crate::curve::{CurveKind, CurveModel, FunctionElem};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

#[derive(Clone, Debug)]
enum Val {
    /// `num / den` on `P^1`.
    Frac(Poly, Poly),
    /// `a + y b` on `y^2 = f`.
    Hyp(Poly, Poly),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    curve: &'a CurveModel,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn field(&self) -> &Field {
        self.curve.field()
    }

    fn peek(&mut self) -> Option<u8> {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: Elem) -> Val {
        let f = self.field();
        match self.curve.kind() {
            CurveKind::ProjectiveLine => Val::Frac(Poly::constant(f, c), Poly::one(f)),
            CurveKind::Hyperelliptic => Val::Hyp(Poly::constant(f, c), Poly::zero(f)),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.peek();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| err(format!("expected an integer at offset {start}")))
    }

    fn sum(&mut self) -> Result<Val> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.product()?;
                acc = self.add(acc, rhs);
            } else if self.eat(b'-') {
                let rhs = self.product()?;
                acc = self.add(acc, self.neg(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.unary()?;
                acc = self.mul(acc, rhs);
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                acc = self.div(acc, rhs)?;
            } else if matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_alphanumeric()) {
                let rhs = self.unary()?;
                acc = self.mul(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val> {
        if self.eat(b'-') {
            let v = self.unary()?;
            Ok(self.neg(v))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Val> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        let n = self.integer()?;
        let v = self.pow(base, n);
        if negative {
            let one = self.constant(Elem::ONE);
            self.div(one, v)
        } else {
            Ok(v)
        }
    }

    fn atom(&mut self) -> Result<Val> {
        let f = self.field().clone();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if !self.eat(b')') {
                    return Err(err(format!("expected ')' at offset {}", self.pos)));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.constant(f.from_int((n % f.p() as u64) as i64)))
            }
            Some(c) => {
                self.pos += 1;
                match (c, self.curve.kind()) {
                    (b't' | b'x', CurveKind::ProjectiveLine) => Ok(Val::Frac(Poly::t(&f), Poly::one(&f))),
                    (b'x', CurveKind::Hyperelliptic) => Ok(Val::Hyp(Poly::t(&f), Poly::zero(&f))),
                    (b'y', CurveKind::Hyperelliptic) => Ok(Val::Hyp(Poly::zero(&f), Poly::one(&f))),
                    (b'u', _) => match f.generator() {
                        Some(g) => Ok(self.constant(g)),
                        None => Err(err("'u' needs an extension field")),
                    },
                    _ => Err(err(format!("unexpected {:?} at offset {}", c as char, self.pos - 1))),
                }
            }
            None => Err(err("unexpected end of expression")),
        }
    }

    fn add(&self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Frac(n1, d1), Val::Frac(n2, d2)) => Val::Frac(&(&n1 * &d2) + &(&n2 * &d1), &d1 * &d2),
            (Val::Hyp(a1, b1), Val::Hyp(a2, b2)) => Val::Hyp(&a1 + &a2, &b1 + &b2),
            _ => unreachable!("one model per parse"),
        }
    }

    fn neg(&self, a: Val) -> Val {
        match a {
            Val::Frac(n, d) => Val::Frac(-&n, d),
            Val::Hyp(a, b) => Val::Hyp(-&a, -&b),
        }
    }

    fn mul(&self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Frac(n1, d1), Val::Frac(n2, d2)) => Val::Frac(&n1 * &n2, &d1 * &d2),
            (Val::Hyp(a1, b1), Val::Hyp(a2, b2)) => {
                let f = self.curve.fpoly().expect("hyperelliptic");
                let a = &(&a1 * &a2) + &(&(f * &b1) * &b2);
                let b = &(&a1 * &b2) + &(&b1 * &a2);
                Val::Hyp(a, b)
            }
            _ => unreachable!("one model per parse"),
        }
    }

    fn div(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Frac(n1, d1), Val::Frac(n2, d2)) => {
                if n2.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Val::Frac(&n1 * &d2, &d1 * &n2))
            }
            (Val::Hyp(a1, b1), Val::Hyp(a2, b2)) => {
                if !b2.is_zero() || !a2.is_constant() {
                    return Err(err("only division by constants is supported on hyperelliptic models"));
                }
                if a2.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let c = self.field().inv(a2.coeff(0))?;
                Ok(Val::Hyp(a1.scale(c), b1.scale(c)))
            }
            _ => unreachable!("one model per parse"),
        }
    }

    fn pow(&self, base: Val, mut n: u64) -> Val {
        let mut acc = self.constant(Elem::ONE);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, b.clone());
            }
            n >>= 1;
            if n > 0 {
                b = self.mul(b.clone(), b);
            }
        }
        acc
    }
}

/// Parses `src` as a function on `curve`.
pub fn parse_function(curve: &CurveModel, src: &str) -> Result<FunctionElem> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        curve,
    };
    let v = p.sum()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    match v {
        Val::Frac(num, den) => FunctionElem::from_fraction(num, den),
        Val::Hyp(a, b) => Ok(FunctionElem::hyperelliptic(a, b)),
    }
}

/// Parses a polynomial in one variable (`t` or `x`) over `field`.
pub fn parse_poly(field: &Field, src: &str) -> Result<Poly> {
    let line = CurveModel::projective_line(field);
    match parse_function(&line, src)? {
        FunctionElem::Rational { num, poles } if poles.is_empty() => Ok(num),
        _ => Err(err(format!("{src:?} is not a polynomial"))),
    }
}
