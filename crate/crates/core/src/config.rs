//! JSON descriptions of fields, curves, divisors and functions.
//!
//! ```json
//! {
//!   "curve": {"kind": "hyperelliptic", "field": {"p": 5}, "fpoly": "x^3 + 1"},
//!   "E": {"support": [{"place": "inf", "mult": 9}]},
//!   "f": "x^5"
//! }
//! ```
//!
//! Shorthands: a field may be given as its order (`9`), a divisor as an integer
//! `m` meaning `m * inf`, and polynomials as coefficient arrays, low degree
//! first. Field elements are integers (reduced mod `p`) or coordinate arrays.

use std::path::Path;

use serde_json::{json, Value};

use crate::curve::{CurveKind, CurveModel, DivisorSpec, FunctionElem, Place};
use crate::error::{Error, Result};
use crate::expr;
use crate::field::{self, Elem, Field};
use crate::poly::Poly;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

/// Parses `arg` as inline JSON, falling back to reading it as a file path.
pub fn load_json(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return serde_json::from_str(arg).map_err(|e| bad(format!("invalid JSON: {e}")));
    }
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| bad(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| bad(format!("{arg}: {e}")));
    }
    // bare scalars such as `9` or `"x^5"`
    Ok(serde_json::from_str(arg).unwrap_or_else(|_| Value::String(arg.to_string())))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

/// Splits a prime power `q = p^e`.
fn prime_power(q: u64) -> Result<(u64, u32)> {
    let ps = field::prime_factors(q);
    match ps.first() {
        Some(&p) if ps.iter().all(|&x| x == p) => {
            let mut e = 0;
            let mut n = q;
            while n > 1 {
                n /= p;
                e += 1;
            }
            Ok((p, e))
        }
        _ => Err(bad(format!("{q} is not a prime power"))),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    match v {
        Value::Number(_) => {
            let (p, e) = prime_power(as_u64(v, "field order")?)?;
            Field::new(p, e, None)
        }
        Value::String(s) => {
            let digits = s.trim().trim_start_matches("F_").trim_start_matches('F');
            let q: u64 = digits.parse().map_err(|_| bad(format!("cannot read field {s:?}")))?;
            field_from_json(&json!(q))
        }
        Value::Object(o) => {
            let p = as_u64(o.get("p").ok_or_else(|| bad("field needs \"p\""))?, "p")?;
            let e = match o.get("e") {
                Some(e) => u32::try_from(as_u64(e, "e")?).map_err(|_| bad("e is too large"))?,
                None => 1,
            };
            let modulus = match o.get("modulus") {
                Some(Value::Array(m)) => Some(m.iter().map(|c| as_u64(c, "modulus coefficient")).collect::<Result<Vec<_>>>()?),
                Some(_) => return Err(bad("modulus must be an array of coefficients")),
                None => None,
            };
            Field::new(p, e, modulus.as_deref())
        }
        _ => Err(bad("field must be an order, a string or an object")),
    }
}

pub fn field_to_json(f: &Field) -> Value {
    let mut o = json!({"p": f.p(), "e": f.e(), "q": f.q()});
    if let Some(m) = f.modulus() {
        o["modulus"] = json!(m);
    }
    o
}

pub fn elem_from_json(f: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| f.from_int(x))
            .ok_or_else(|| bad(format!("field element {n} out of range"))),
        Value::Array(cs) => {
            let coords = cs
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| bad("coordinates must be integers")))
                .collect::<Result<Vec<_>>>()?;
            f.from_coords(&coords)
        }
        _ => Err(bad("field element must be an integer or a coordinate array")),
    }
}

/// A polynomial from an expression string or a coefficient array.
pub fn poly_from_json(f: &Field, v: &Value) -> Result<Poly> {
    match v {
        Value::String(s) => expr::parse_poly(f, s),
        Value::Array(cs) => {
            let coeffs = cs.iter().map(|c| elem_from_json(f, c)).collect::<Result<Vec<_>>>()?;
            Ok(Poly::from_coeffs(f, coeffs))
        }
        _ => Err(bad("polynomial must be an expression or a coefficient array")),
    }
}

pub fn curve_from_json(v: &Value) -> Result<CurveModel> {
    let o = v.as_object().ok_or_else(|| bad("curve must be an object"))?;
    let field = field_from_json(o.get("field").ok_or_else(|| bad("curve needs \"field\""))?)?;
    let kind = o.get("kind").and_then(Value::as_str).unwrap_or("P1");
    match kind.to_ascii_lowercase().as_str() {
        "p1" | "projective_line" | "line" => Ok(CurveModel::projective_line(&field)),
        "hyperelliptic" | "elliptic" => {
            let fp = o
                .get("fpoly")
                .or_else(|| o.get("f"))
                .ok_or_else(|| bad("hyperelliptic curve needs \"fpoly\""))?;
            CurveModel::hyperelliptic(poly_from_json(&field, fp)?)
        }
        other => Err(bad(format!("unknown curve kind {other:?}"))),
    }
}

pub fn curve_to_json(c: &CurveModel) -> Value {
    let field = field_to_json(c.field());
    match c.kind() {
        CurveKind::ProjectiveLine => json!({"kind": "P1", "field": field, "genus": 0}),
        CurveKind::Hyperelliptic => json!({
            "kind": "hyperelliptic",
            "field": field,
            "fpoly": c.fpoly().unwrap().to_json(),
            "genus": c.genus(),
        }),
    }
}

fn place_from_json(f: &Field, v: &Value) -> Result<Place> {
    match v {
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity" | "oo") => Ok(Place::Infinity),
        Value::String(s) => Err(bad(format!("unknown place {s:?}"))),
        other => elem_from_json(f, other).map(Place::Point),
    }
}

pub fn divisor_from_json(curve: &CurveModel, v: &Value) -> Result<DivisorSpec> {
    match v {
        Value::Number(_) => {
            let m = u32::try_from(as_u64(v, "divisor degree")?).map_err(|_| bad("divisor degree is too large"))?;
            DivisorSpec::at_infinity(curve, m)
        }
        Value::Object(o) => {
            let items = o
                .get("support")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("divisor needs a \"support\" array"))?;
            let support = items
                .iter()
                .map(|it| {
                    let place = place_from_json(curve.field(), it.get("place").ok_or_else(|| bad("support entry needs \"place\""))?)?;
                    let mult = as_u64(it.get("mult").ok_or_else(|| bad("support entry needs \"mult\""))?, "mult")?;
                    Ok((place, u32::try_from(mult).map_err(|_| bad("mult is too large"))?))
                })
                .collect::<Result<Vec<_>>>()?;
            DivisorSpec::new(curve, support)
        }
        _ => Err(bad("divisor must be an integer or an object")),
    }
}

pub fn divisor_to_json(curve: &CurveModel, d: &DivisorSpec) -> Value {
    let support: Vec<Value> = d
        .support()
        .iter()
        .map(|(pl, m)| {
            let place = match pl {
                Place::Infinity => json!("inf"),
                Place::Point(a) => json!(curve.field().coords(*a)),
            };
            json!({"place": place, "mult": m})
        })
        .collect();
    json!({"support": support, "degree": d.degree()})
}

pub fn function_from_json(curve: &CurveModel, v: &Value) -> Result<FunctionElem> {
    let field = curve.field();
    match (v, curve.kind()) {
        (Value::String(s), _) => expr::parse_function(curve, s),
        (Value::Array(_), CurveKind::ProjectiveLine) => Ok(FunctionElem::polynomial(poly_from_json(field, v)?)),
        (Value::Array(_), CurveKind::Hyperelliptic) => {
            Ok(FunctionElem::hyperelliptic(poly_from_json(field, v)?, Poly::zero(field)))
        }
        (Value::Object(o), CurveKind::ProjectiveLine) => {
            let num = poly_from_json(field, o.get("num").ok_or_else(|| bad("function needs \"num\""))?)?;
            let den = match o.get("den") {
                Some(d) => poly_from_json(field, d)?,
                None => Poly::one(field),
            };
            FunctionElem::from_fraction(num, den)
        }
        (Value::Object(o), CurveKind::Hyperelliptic) => {
            let part = |k: &str| match o.get(k) {
                Some(p) => poly_from_json(field, p),
                None => Ok(Poly::zero(field)),
            };
            Ok(FunctionElem::hyperelliptic(part("a")?, part("b")?))
        }
        _ => Err(bad("function must be an expression, an array or an object")),
    }
}

/// `{"curve": ..., "E": ..., "f": ...}`.
pub fn interval_from_json(v: &Value) -> Result<(CurveModel, DivisorSpec, FunctionElem)> {
    let curve = curve_from_json(v.get("curve").ok_or_else(|| bad("interval needs \"curve\""))?)?;
    let e = divisor_from_json(&curve, v.get("E").ok_or_else(|| bad("interval needs \"E\""))?)?;
    let f = function_from_json(&curve, v.get("f").ok_or_else(|| bad("interval needs \"f\""))?)?;
    Ok((curve, e, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        let f = field_from_json(&json!(9)).unwrap();
        assert_eq!((f.p(), f.e()), (3, 2));
        assert_eq!(field_from_json(&json!("F_25")).unwrap().q(), 25);
        let f = field_from_json(&json!({"p": 2, "e": 3, "modulus": [1, 1, 0, 1]})).unwrap();
        assert_eq!(f.modulus().unwrap(), &[1, 1, 0, 1]);
        assert!(field_from_json(&json!(12)).is_err());
        assert_eq!(field_from_json(&json!({"p": 4})).unwrap_err(), Error::NotPrime(4));
        assert_eq!(field_to_json(&Field::prime(7).unwrap()), json!({"p": 7, "e": 1, "q": 7}));
    }

    #[test]
    fn curves_and_divisors() {
        let c = curve_from_json(&json!({"kind": "hyperelliptic", "field": {"p": 5}, "fpoly": "x^3 + 1"})).unwrap();
        assert_eq!(c.genus(), 1);
        let c2 = curve_from_json(&json!({"kind": "hyperelliptic", "field": 5, "fpoly": [1, 0, 0, 1]})).unwrap();
        assert_eq!(c.fpoly(), c2.fpoly());
        assert_eq!(
            curve_from_json(&json!({"kind": "hyperelliptic", "field": 9, "fpoly": "x^3 + 1"})).unwrap_err(),
            Error::SingularModel
        );
        let line = curve_from_json(&json!({"field": 3})).unwrap();
        let d = divisor_from_json(
            &line,
            &json!({"support": [{"place": "inf", "mult": 1}, {"place": 0, "mult": 2}]}),
        )
        .unwrap();
        assert_eq!(d.degree(), 3);
        assert_eq!(d.mult(Place::Point(Elem::ZERO)), 2);
        assert_eq!(divisor_from_json(&c, &json!(9)).unwrap().mult(Place::Infinity), 9);
        assert!(divisor_from_json(&c, &json!({"support": [{"place": 1, "mult": 1}]})).is_err());
        let round = divisor_to_json(&line, &d);
        assert_eq!(divisor_from_json(&line, &round).unwrap(), d);
    }

    #[test]
    fn functions_and_intervals() {
        let spec = json!({
            "curve": {"kind": "P1", "field": 5},
            "E": {"support": [{"place": "inf", "mult": 1}, {"place": 0, "mult": 2}]},
            "f": {"num": [1, 0, 0, 0, 0, 1], "den": [0, 0, 0, 1]}
        });
        let (c, e, f) = interval_from_json(&spec).unwrap();
        assert_eq!(f, expr::parse_function(&c, "t^2 + t^-3").unwrap());
        assert_eq!(e.degree(), 3);
        let h = curve_from_json(&json!({"kind": "hyperelliptic", "field": 5, "fpoly": "x^3+1"})).unwrap();
        assert_eq!(
            function_from_json(&h, &json!({"a": [0, 1], "b": [1]})).unwrap(),
            expr::parse_function(&h, "x + y").unwrap()
        );
    }

    #[test]
    fn load_inline_and_scalars() {
        assert_eq!(load_json("{\"a\": 1}").unwrap(), json!({"a": 1}));
        assert_eq!(load_json("9").unwrap(), json!(9));
        assert_eq!(load_json("x^5 + y").unwrap(), json!("x^5 + y"));
        assert!(load_json("{oops").is_err());
    }
}
