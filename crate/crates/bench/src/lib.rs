//! Fixtures shared by the benchmarks.

use ffinterval::{CurveModel, DivisorSpec, Field, FunctionElem, IntervalSpec, Poly};

/// `I(t^k, m * inf)` on the projective line over `F_q`.
pub fn p1_interval(q: u64, k: usize, m: u32) -> IntervalSpec {
    let field = field_of_order(q);
    let curve = CurveModel::projective_line(&field);
    let f = FunctionElem::polynomial(Poly::monomial(&field, field.one(), k));
    IntervalSpec::new(&curve, &f, &DivisorSpec::at_infinity(&curve, m).unwrap()).unwrap()
}

/// `I(x^5, 9 * inf)` on `y^2 = f(x)`.
pub fn elliptic_interval(q: u64, fpoly: &[i64]) -> IntervalSpec {
    let field = field_of_order(q);
    let curve = CurveModel::hyperelliptic(Poly::from_ints(&field, fpoly)).unwrap();
    let f = FunctionElem::hyperelliptic(Poly::monomial(&field, field.one(), 5), Poly::zero(&field));
    IntervalSpec::new(&curve, &f, &DivisorSpec::at_infinity(&curve, 9).unwrap()).unwrap()
}

pub fn field_of_order(q: u64) -> Field {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut e = 0;
    let mut n = q;
    while n > 1 {
        n /= p;
        e += 1;
    }
    Field::new(p, e, None).unwrap()
}
