//! Independent reference computations used to cross-check the fast paths:
//! closed-form irreducible counts, a direct census of `S_k`, and brute-force
//! factorization against an exhaustive table of places.
//!
//! Nothing here calls the factoring, irreducibility or Hensel code.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::{
    CurveKind, CurveModel, DivisorSpec, ElementFactorization, FunctionElem, Place, PlaceClass, PrimeDescriptor,
    PrimeDivisor,
};
use crate::error::{Error, Result};
use crate::curve;
use crate::field::{Elem, Field};
use crate::interval::{IntervalSpec, Mode};
use crate::poly::Poly;
use crate::stats::{partition_prob, partitions, Partition};

/// Largest `k` accepted by [`sk_census`].
pub const SK_MAX: u32 = 8;

fn mobius(mut n: u64) -> i128 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `k` over `F_q`:
/// `(1/k) sum_{d | k} mu(d) q^{k/d}`. Returns `None` on overflow.
pub fn necklace_count(q: u64, k: u32) -> Option<u128> {
    if k == 0 {
        return Some(0);
    }
    let mut sum: i128 = 0;
    for d in 1..=k {
        if !k.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d as u64);
        if mu == 0 {
            continue;
        }
        let term = (q as i128).checked_pow(k / d)?;
        sum = sum.checked_add(mu * term)?;
    }
    Some((sum / k as i128) as u128)
}

/// Cycle-type counts over all of `S_k`, by enumeration.
pub fn sk_census(k: u32) -> Result<BTreeMap<Partition, u64>> {
    if k > SK_MAX {
        let fact = |n: u32| (1..=n as u128).product::<u128>();
        return Err(Error::BudgetExceeded {
            needed: fact(k),
            budget: fact(SK_MAX),
        });
    }
    let n = k as usize;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = BTreeMap::new();
    let mut record = |perm: &[usize]| {
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            parts.push(len);
        }
        *out.entry(Partition::new(parts)).or_insert(0u64) += 1;
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    record(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            record(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

/// A place of `F_q[x]` with how it behaves on the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceEntry {
    pub pi: Poly,
    /// `None` on `P^1`.
    pub class: Option<PlaceClass>,
    /// For split places: the square roots of `f` mod `pi`, each lifted to
    /// `pi^precision`, ordered by their residues.
    pub roots: Vec<(Poly, Poly)>,
    pub precision: u32,
}

/// Every monic irreducible of degree `<= max_deg`, found by trial division.
#[derive(Clone, Debug)]
pub struct PlaceTable {
    curve: CurveModel,
    max_deg: u32,
    entries: Vec<PlaceEntry>,
}

/// All polynomials of degree `< d`, in code order.
fn residues(field: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.q() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(d);
        for _ in 0..d {
            coeffs.push(field.elem((idx % q) as u32).expect("in range"));
            idx /= q;
        }
        Poly::from_coeffs(field, coeffs)
    })
}

fn valuation_or_inf(p: &Poly, pi: &Poly) -> u64 {
    if p.is_zero() {
        u64::MAX
    } else {
        p.valuation(pi) as u64
    }
}

impl PlaceTable {
    /// Refuses to enumerate more than `budget` candidate polynomials.
    pub fn build(curve: &CurveModel, max_deg: u32, budget: u128) -> Result<PlaceTable> {
        let field = curve.field();
        let q = field.q() as u128;
        let needed: u128 = (1..=max_deg).map(|d| q.saturating_pow(d)).fold(0, u128::saturating_add);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let mut irreducibles: Vec<Poly> = Vec::new();
        for d in 1..=max_deg as usize {
            let lead = Poly::monomial(field, Elem::ONE, d);
            let found: Vec<Poly> = residues(field, d)
                .map(|r| &lead + &r)
                .filter(|cand| {
                    irreducibles
                        .iter()
                        .take_while(|p| 2 * p.degree().unwrap() <= d)
                        .all(|p| !cand.rem(p).unwrap().is_zero())
                })
                .collect();
            irreducibles.extend(found);
        }
        let fpoly = curve.fpoly();
        let entries = irreducibles
            .into_iter()
            .map(|pi| {
                let d = pi.degree().unwrap();
                let precision = max_deg / d as u32 + 1;
                let Some(f) = fpoly else {
                    return PlaceEntry {
                        pi,
                        class: None,
                        roots: Vec::new(),
                        precision,
                    };
                };
                let fr = f.rem(&pi).unwrap();
                let sq: Vec<Poly> = residues(field, d)
                    .filter(|c| (&c.mul_mod(c, &pi) - &fr).rem(&pi).unwrap().is_zero())
                    .collect();
                let class = if fr.is_zero() {
                    PlaceClass::Ramified
                } else if sq.is_empty() {
                    PlaceClass::Inert
                } else {
                    PlaceClass::Split
                };
                let roots = if class == PlaceClass::Split {
                    sq.into_iter().map(|c| (c.clone(), lift_root(f, &pi, c, precision))).collect()
                } else {
                    Vec::new()
                };
                PlaceEntry {
                    pi,
                    class: Some(class),
                    roots,
                    precision,
                }
            })
            .collect();
        Ok(PlaceTable {
            curve: curve.clone(),
            max_deg,
            entries,
        })
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn entries(&self) -> &[PlaceEntry] {
        &self.entries
    }

    /// Number of monic irreducibles of degree `d` in the table.
    pub fn count_of_degree(&self, d: usize) -> usize {
        self.entries.iter().filter(|e| e.pi.degree() == Some(d)).count()
    }

    pub fn class_of(&self, pi: &Poly) -> Option<PlaceClass> {
        self.entries.iter().find(|e| e.pi == *pi).and_then(|e| e.class)
    }

    /// Factorization of `h` by testing every place in the table.
    pub fn brute_factor(&self, divisor: &DivisorSpec, h: &FunctionElem) -> Result<ElementFactorization> {
        if h.is_zero() {
            return Err(Error::ZeroElement);
        }
        let field = self.curve.field();
        let mut primes = Vec::new();
        let mut anomalies = Vec::new();
        match (self.curve.kind(), h) {
            (CurveKind::ProjectiveLine, FunctionElem::Rational { num, poles }) => {
                let needed = num.degree().unwrap_or(0) as u32;
                self.check_size(needed)?;
                for e in &self.entries {
                    let v = valuation_or_inf(num, &e.pi) as u32;
                    if v == 0 {
                        continue;
                    }
                    let d = e.pi.degree().unwrap() as u32;
                    if d == 1 && divisor.contains(Place::Point(field.neg(e.pi.coeff(0)))) {
                        anomalies.push((Place::Point(field.neg(e.pi.coeff(0))), v));
                        continue;
                    }
                    primes.push((
                        PrimeDivisor {
                            descriptor: PrimeDescriptor::Finite(e.pi.clone()),
                            degree: d,
                        },
                        v,
                    ));
                }
                if !divisor.contains(Place::Infinity) {
                    let den: i64 = poles.iter().map(|(_, d)| *d as i64).sum();
                    let z = den - num.degree_i();
                    if z > 0 {
                        primes.push((
                            PrimeDivisor {
                                descriptor: PrimeDescriptor::Infinity,
                                degree: 1,
                            },
                            z as u32,
                        ));
                    }
                }
            }
            (CurveKind::Hyperelliptic, FunctionElem::Hyperelliptic { a, b }) => {
                let f = self.curve.fpoly().unwrap();
                let norm = &(a * a) - &(&(f * b) * b);
                self.check_size(norm.degree().unwrap_or(0) as u32)?;
                for e in &self.entries {
                    let d = e.pi.degree().unwrap() as u32;
                    match e.class.unwrap() {
                        PlaceClass::Split => {
                            let modulus = e.pi.pow(e.precision as u64);
                            for (residue, r) in &e.roots {
                                let local = (a + &b.mul_mod(r, &modulus)).rem(&modulus)?;
                                if local.is_zero() {
                                    return Err(Error::TableTooSmall {
                                        table: self.max_deg,
                                        needed: self.max_deg + 1,
                                    });
                                }
                                let v = local.valuation(&e.pi);
                                if v > 0 {
                                    primes.push((
                                        PrimeDivisor {
                                            descriptor: PrimeDescriptor::Split {
                                                pi: e.pi.clone(),
                                                root: residue.clone(),
                                            },
                                            degree: d,
                                        },
                                        v,
                                    ));
                                }
                            }
                        }
                        PlaceClass::Inert => {
                            let v = valuation_or_inf(a, &e.pi).min(valuation_or_inf(b, &e.pi));
                            if v > 0 {
                                primes.push((
                                    PrimeDivisor {
                                        descriptor: PrimeDescriptor::Inert { pi: e.pi.clone() },
                                        degree: 2 * d,
                                    },
                                    v as u32,
                                ));
                            }
                        }
                        PlaceClass::Ramified => {
                            let va = valuation_or_inf(a, &e.pi).saturating_mul(2);
                            let vb = valuation_or_inf(b, &e.pi).saturating_mul(2).saturating_add(1);
                            let v = va.min(vb);
                            if v > 0 {
                                primes.push((
                                    PrimeDivisor {
                                        descriptor: PrimeDescriptor::Ramified { pi: e.pi.clone() },
                                        degree: d,
                                    },
                                    v as u32,
                                ));
                            }
                        }
                    }
                }
            }
            _ => return Err(Error::InvalidSpec("function does not belong to this curve model".into())),
        }
        primes.sort();
        Ok(ElementFactorization { primes, anomalies })
    }

    fn check_size(&self, needed: u32) -> Result<()> {
        if needed > self.max_deg {
            Err(Error::TableTooSmall {
                table: self.max_deg,
                needed,
            })
        } else {
            Ok(())
        }
    }
}

/// Lifts a root `c` of `r^2 = f mod pi` to `pi^n` one `pi`-adic digit at a
/// time, trying every digit.
fn lift_root(f: &Poly, pi: &Poly, c: Poly, n: u32) -> Poly {
    let field = pi.field();
    let d = pi.degree().unwrap();
    let mut r = c;
    let mut pj = pi.clone();
    for j in 1..n {
        let next = pi.pow(j as u64 + 1);
        let target = f.rem(&next).unwrap();
        r = residues(field, d)
            .map(|s| &r + &(&pj * &s))
            .find(|cand| (&cand.mul_mod(cand, &next) - &target).rem(&next).unwrap().is_zero())
            .expect("a simple root lifts uniquely");
        pj = &pj * pi;
    }
    r
}

/// Outcome of one cross-validation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, failures: Vec<String>, ok_detail: String) -> CheckResult {
        let passed = failures.is_empty();
        CheckResult {
            name: name.into(),
            passed,
            detail: if passed { ok_detail } else { failures.join("; ") },
        }
    }
}

/// `sum_{d | k} d * necklace_count(q, d) = q^k`.
pub fn check_necklace_identity(qs: &[u64], kmax: u32) -> CheckResult {
    let mut bad = Vec::new();
    for &q in qs {
        for k in 1..=kmax {
            let s: Option<u128> = (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| necklace_count(q, d).map(|n| d as u128 * n))
                .sum();
            if s != (q as u128).checked_pow(k) {
                bad.push(format!("q={q} k={k}"));
            }
        }
    }
    CheckResult::new("necklace_identity", bad, format!("q in {qs:?}, k <= {kmax}"))
}

/// `partition_prob(lambda) * k! = sk_census(k)[lambda]`.
pub fn check_sk_closed_form(kmax: u32) -> CheckResult {
    let mut bad = Vec::new();
    for k in 1..=kmax.min(SK_MAX) {
        let census = sk_census(k).expect("within budget");
        let fact = BigRational::from_integer((1..=k).map(BigInt::from).product());
        for lambda in partitions(k) {
            let c = census.get(&lambda).copied().unwrap_or(0);
            if partition_prob(&lambda) * &fact != BigRational::from_integer(BigInt::from(c)) {
                bad.push(format!("k={k} {lambda}"));
            }
        }
    }
    CheckResult::new("sk_closed_form", bad, format!("every partition of k <= {kmax}"))
}

/// `sum_lambda partition_prob(lambda) = 1` exactly.
pub fn check_partition_sums(kmax: u32) -> CheckResult {
    let bad = (1..=kmax)
        .filter(|&k| partitions(k).iter().map(partition_prob).fold(BigRational::zero(), |a, b| a + b) != BigRational::one())
        .map(|k| format!("k={k}"))
        .collect();
    CheckResult::new("partition_prob_sums", bad, format!("k <= {kmax}"))
}

/// Compares `factor_element` with [`PlaceTable::brute_factor`] on every element
/// of `interval`, and checks `sum deg * mult = k`.
pub fn cross_check_interval(interval: &IntervalSpec, budget: u128) -> Result<CheckResult> {
    let curve = interval.curve();
    let table = PlaceTable::build(curve, interval.k(), budget)?;
    let mut bad = Vec::new();
    let mut n = 0u64;
    for (_, h) in interval.iterate_or_sample(Mode::Exhaustive, budget)? {
        n += 1;
        let fast = curve::factor_element(curve, interval.divisor(), &h)?;
        let slow = table.brute_factor(interval.divisor(), &h)?;
        if fast != slow {
            bad.push(format!("{h}: factorizations differ"));
        } else if fast.zero_degree() != interval.k() || !fast.anomalies.is_empty() {
            bad.push(format!("{h}: zero degree {} != {}", fast.zero_degree(), interval.k()));
        }
        if bad.len() >= 10 {
            break;
        }
    }
    Ok(CheckResult::new(
        "brute_factor_agreement",
        bad,
        format!("{n} elements of I({}, deg E = {})", interval.f(), interval.divisor().degree()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;

    #[test]
    fn necklace_examples() {
        assert_eq!(necklace_count(3, 5), Some(48));
        assert_eq!(necklace_count(2, 1), Some(2));
        assert_eq!(necklace_count(2, 4), Some(3));
        assert_eq!(necklace_count(5, 6), Some(2580));
        assert_eq!(necklace_count(4, 2), Some(6));
        assert_eq!(necklace_count(1 << 31, 200), None);
        assert_eq!(necklace_count(2, 3), Some(2));
        assert_eq!(necklace_count(3, 2), Some(3));
    }

    #[test]
    fn necklace_sum_identity() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            for k in 1..=10u32 {
                let s: u128 = (1..=k).filter(|d| k % d == 0).map(|d| d as u128 * necklace_count(q, d).unwrap()).sum();
                assert_eq!(s, (q as u128).pow(k), "q = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn sk_small_examples() {
        let s3 = sk_census(3).unwrap();
        assert_eq!(s3[&Partition::new(vec![1, 1, 1])], 1);
        assert_eq!(s3[&Partition::new(vec![2, 1])], 3);
        assert_eq!(s3[&Partition::new(vec![3])], 2);
        assert_eq!(sk_census(4).unwrap()[&Partition::new(vec![2, 1, 1])], 6);
        assert_eq!(sk_census(5).unwrap().values().sum::<u64>(), 120);
    }

    #[test]
    fn sk_matches_closed_form() {
        for k in 1..=SK_MAX {
            let census = sk_census(k).unwrap();
            let total: u64 = census.values().sum();
            let fact: u64 = (1..=k as u64).product();
            assert_eq!(total, fact);
            assert_eq!(census.len(), partitions(k).len());
            for (lambda, c) in census {
                let expected = partition_prob(&lambda) * BigRational::from_integer(BigInt::from(fact));
                assert_eq!(BigRational::from_integer(BigInt::from(c)), expected, "{lambda}");
            }
        }
        assert_eq!(sk_census(9).unwrap_err(), Error::BudgetExceeded { needed: 362_880, budget: 40_320 });
    }

    #[test]
    fn table_counts_match_necklaces() {
        for (p, e, max) in [(2u64, 1u32, 8u32), (3, 1, 5), (2, 2, 4), (5, 1, 3)] {
            let f = Field::new(p, e, None).unwrap();
            let t = PlaceTable::build(&CurveModel::projective_line(&f), max, 1 << 20).unwrap();
            for d in 1..=max {
                assert_eq!(t.count_of_degree(d as usize) as u128, necklace_count(f.q() as u64, d).unwrap());
            }
            for e in t.entries() {
                assert!(poly::is_irreducible(&e.pi).unwrap());
            }
        }
    }

    #[test]
    fn table_budget() {
        let f = Field::prime(7).unwrap();
        let err = PlaceTable::build(&CurveModel::projective_line(&f), 4, 100).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 7 + 49 + 343 + 2401, budget: 100 });
    }

    fn elliptic_f5() -> CurveModel {
        let f = Field::prime(5).unwrap();
        CurveModel::hyperelliptic(Poly::from_ints(&f, &[1, 0, 0, 1])).unwrap()
    }

    #[test]
    fn table_classes_agree_with_euler() {
        let c = elliptic_f5();
        let t = PlaceTable::build(&c, 3, 1 << 20).unwrap();
        for e in t.entries() {
            assert_eq!(e.class.unwrap(), curve::classify_place(&c, &e.pi).unwrap());
        }
        let f = c.field();
        assert_eq!(t.class_of(&Poly::from_ints(f, &[0, 1])), Some(PlaceClass::Split));
        assert_eq!(t.class_of(&Poly::from_ints(f, &[-1, 1])), Some(PlaceClass::Inert));
        assert_eq!(t.class_of(&Poly::from_ints(f, &[1, 1])), Some(PlaceClass::Ramified));
    }

    #[test]
    fn brute_matches_factor_element_on_examples() {
        let c = elliptic_f5();
        let f = c.field().clone();
        let e = DivisorSpec::at_infinity(&c, 9).unwrap();
        let t = PlaceTable::build(&c, 4, 1 << 20).unwrap();
        let x = Poly::from_ints(&f, &[0, 1]);
        for h in [
            FunctionElem::hyperelliptic(x.pow(2), Poly::zero(&f)),
            FunctionElem::hyperelliptic(x.clone(), Poly::one(&f)),
            FunctionElem::hyperelliptic(Poly::from_ints(&f, &[1, 1]), Poly::zero(&f)),
            FunctionElem::hyperelliptic(Poly::from_ints(&f, &[-1, 0, 1]), Poly::zero(&f)),
            FunctionElem::hyperelliptic(Poly::from_ints(&f, &[2, 0, 1]), Poly::zero(&f)),
            FunctionElem::hyperelliptic(Poly::from_ints(&f, &[-1]), Poly::zero(&f)),
            FunctionElem::hyperelliptic(Poly::zero(&f), Poly::one(&f)),
        ] {
            let fast = curve::factor_element(&c, &e, &h).unwrap();
            assert_eq!(t.brute_factor(&e, &h).unwrap(), fast, "{h}");
        }
        let big = FunctionElem::hyperelliptic(x.pow(3), Poly::zero(&f));
        assert_eq!(t.brute_factor(&e, &big).unwrap_err(), Error::TableTooSmall { table: 4, needed: 6 });
    }

    #[test]
    fn check_routines_pass() {
        assert!(check_necklace_identity(&[2, 3, 4, 5, 7, 9], 10).passed);
        assert!(check_sk_closed_form(7).passed);
        assert!(check_partition_sums(12).passed);
        let c = elliptic_f5();
        let x2 = FunctionElem::hyperelliptic(Poly::from_ints(c.field(), &[0, 0, 1]), Poly::zero(c.field()));
        let i = IntervalSpec::new(&c, &x2, &DivisorSpec::at_infinity(&c, 3).unwrap()).unwrap();
        let r = cross_check_interval(&i, 1 << 20).unwrap();
        assert!(r.passed, "{}", r.detail);
        assert!(r.detail.starts_with("125 elements"));
    }

    #[test]
    fn brute_p1_single_quadratic_place() {
        let f = Field::prime(3).unwrap();
        let c = CurveModel::projective_line(&f);
        let e = DivisorSpec::at_infinity(&c, 2).unwrap();
        let t = PlaceTable::build(&c, 2, 1 << 10).unwrap();
        let h = FunctionElem::polynomial(Poly::from_ints(&f, &[1, 0, 1]));
        let b = t.brute_factor(&e, &h).unwrap();
        assert_eq!(b.primes.len(), 1);
        assert_eq!((b.primes[0].0.degree, b.primes[0].1), (2, 1));
    }

    #[test]
    fn brute_p1_with_infinity_outside_support() {
        let f = Field::prime(3).unwrap();
        let c = CurveModel::projective_line(&f);
        let e = DivisorSpec::new(&c, vec![(Place::Point(Elem::ZERO), 3)]).unwrap();
        let t = PlaceTable::build(&c, 4, 1 << 20).unwrap();
        // (t^2 + 1)(t - 1) / t^4
        let h = FunctionElem::rational(Poly::from_ints(&f, &[-1, 1, -1, 1]), vec![(Elem::ZERO, 4)]);
        let b = t.brute_factor(&e, &h).unwrap();
        assert_eq!(b, curve::factor_element(&c, &e, &h).unwrap());
        assert_eq!(b.zero_degree(), 4);
        assert!(b.primes.iter().any(|(p, m)| p.descriptor == PrimeDescriptor::Infinity && *m == 1));
    }
}
