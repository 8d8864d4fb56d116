use ffinterval::config;
use ffinterval::curve::{factor_element, factorization_type, norm};
use ffinterval::expr::parse_function;
use ffinterval::oracle::{necklace_count, PlaceTable};
use ffinterval::poly;
use ffinterval::report;
use ffinterval::stats::{self, CensusOptions, DEFAULT_FLOOR};
use ffinterval::{
    CurveModel, DivisorSpec, Elem, FactorizationType, Field, FunctionElem, IntervalSpec, Mode, Partition, Poly,
};
use proptest::prelude::*;

fn elliptic(q: u64, fpoly: &[i64], k: usize, m: u32) -> IntervalSpec {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let e = (1..).find(|&e| p.pow(e) == q).unwrap();
    let f = Field::new(p, e, None).unwrap();
    let c = CurveModel::hyperelliptic(Poly::from_ints(&f, fpoly)).unwrap();
    let h = FunctionElem::hyperelliptic(Poly::monomial(&f, f.one(), k), Poly::zero(&f));
    IntervalSpec::new(&c, &h, &DivisorSpec::at_infinity(&c, m).unwrap()).unwrap()
}

fn codes(q: u32, n: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..q, n)
}

#[test]
fn frozen_exhaustive_prime_counts() {
    // counts of (k) on P^1 equal the number of monic irreducibles of degree k
    for (q, k, m) in [(2u64, 7usize, 6u32), (3, 5, 4), (4, 4, 3), (7, 3, 2)] {
        let f = Field::new((2..=q).find(|d| q % d == 0).unwrap(), if q == 4 { 2 } else { 1 }, None).unwrap();
        let c = CurveModel::projective_line(&f);
        let h = FunctionElem::polynomial(Poly::monomial(&f, f.one(), k));
        let i = IntervalSpec::new(&c, &h, &DivisorSpec::at_infinity(&c, m).unwrap()).unwrap();
        let count = stats::prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
        assert_eq!(count as u128, necklace_count(q, k as u32).unwrap(), "q={q} k={k}");
    }
}

#[test]
fn frozen_sampled_prime_count() {
    let i = elliptic(25, &[1, 0, 0, 1], 5, 9);
    let mode = Mode::Sample { samples: 2000, seed: 2024 };
    let count = stats::prime_count(&i, mode, CensusOptions::default()).unwrap();
    assert_eq!(count, 144);
}

#[test]
fn elliptic_prime_count_matches_table() {
    // y^2 = x^3 + 1 over F_5 with E = 3 inf and f = x^2: k = 4
    let i = elliptic(5, &[1, 0, 0, 1], 2, 3);
    let table = PlaceTable::build(i.curve(), 4, 1 << 20).unwrap();
    let mut brute = 0;
    for (_, h) in i.iterate_or_sample(Mode::Exhaustive, 1000).unwrap() {
        let fac = table.brute_factor(i.divisor(), &h).unwrap();
        if fac.primes.len() == 1 && fac.primes[0].1 == 1 {
            brute += 1;
        }
    }
    let fast = stats::prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
    assert_eq!(fast, brute);
    assert!(table.count_of_degree(4) as u64 >= fast);
}

#[test]
fn report_survives_json_roundtrip_of_interval() {
    let i = elliptic(7, &[3, 0, 0, 1], 3, 5);
    let j = report::interval_json(&i);
    let v = serde_json::json!({"curve": j["curve"], "E": j["E"], "f": j["f"]});
    let (c, e, f) = config::interval_from_json(&v).unwrap();
    let back = IntervalSpec::new(&c, &f, &e).unwrap();
    assert_eq!(report::interval_json(&back), j);

    let h = stats::census(&i, Mode::Exhaustive, CensusOptions { workers: 2, ..Default::default() }).unwrap();
    let r = stats::deviation_report(&i, &h, Mode::Exhaustive, DEFAULT_FLOOR);
    let h2 = stats::census(&back, Mode::Exhaustive, CensusOptions { workers: 1, ..Default::default() }).unwrap();
    assert_eq!(h, h2);
    assert_eq!(r.total, 7u64.pow(5));
    assert!(r.fitted_c.unwrap() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn elliptic_elements_have_zero_degree_k(a in codes(7, 5)) {
        let i = elliptic(7, &[3, 0, 0, 1], 3, 5);
        let a: Vec<Elem> = a.into_iter().map(|c| i.field().elem(c).unwrap()).collect();
        let h = i.element_at(&a).unwrap();
        let fac = factor_element(i.curve(), i.divisor(), &h).unwrap();
        prop_assert_eq!(fac.zero_degree(), i.k());
        prop_assert!(fac.anomalies.is_empty());
        // zero degree equals the degree of the norm
        prop_assert_eq!(norm(i.curve(), &h).unwrap().degree(), Some(i.k() as usize));
        let ty = factorization_type(i.curve(), i.divisor(), &h).unwrap();
        let expect = if fac.primes.iter().any(|(_, m)| *m > 1) {
            FactorizationType::NonSeparable
        } else {
            FactorizationType::Separable(Partition::new(fac.primes.iter().map(|(p, _)| p.degree).collect()))
        };
        prop_assert_eq!(ty, expect);
    }

    #[test]
    fn p1_elements_factor_and_print(a in codes(9, 4)) {
        let f = Field::new(3, 2, None).unwrap();
        let c = CurveModel::projective_line(&f);
        let e = DivisorSpec::new(&c, vec![
            (ffinterval::Place::Infinity, 2),
            (ffinterval::Place::Point(f.from_int(1)), 1),
        ]).unwrap();
        let top = FunctionElem::rational(Poly::from_ints(&f, &[1, 0, 0, 0, 0, 1]), vec![(f.from_int(1), 2)]);
        let i = IntervalSpec::new(&c, &top, &e).unwrap();
        let a: Vec<Elem> = a.into_iter().map(|x| f.elem(x).unwrap()).collect();
        let h = i.element_at(&a).unwrap();
        prop_assert_eq!(parse_function(&c, &h.to_string()).unwrap(), h.clone());
        let fac = factor_element(&c, &e, &h).unwrap();
        prop_assert_eq!(fac.zero_degree(), i.k());
    }

    #[test]
    fn polynomial_factorization_expands_back(cs in prop::collection::vec(0u32..25, 1..12)) {
        let f = Field::new(5, 2, None).unwrap();
        let p = Poly::from_codes(&f, cs);
        prop_assume!(!p.is_zero());
        let fac = poly::factor(&p).unwrap();
        prop_assert_eq!(fac.expand(&p), p.clone());
        for (g, _) in &fac.factors {
            prop_assert!(g.is_monic());
            prop_assert!(poly::is_irreducible(g).unwrap());
        }
    }
}
