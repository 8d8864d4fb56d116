//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ffinterval::curve::{self, rr_basis};
use ffinterval::oracle::{self, necklace_count, PlaceTable};
use ffinterval::report;
use ffinterval::stats::{self, partition_prob, partitions, CensusOptions, DEFAULT_FLOOR};
use ffinterval::{CurveModel, DivisorSpec, Field, FunctionElem, IntervalSpec, Mode, Partition, Place, Poly};
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn field(q: u64) -> Field {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let e = (1..).find(|&e| p.pow(e) == q).unwrap();
    Field::new(p, e, None).unwrap()
}

fn p1_interval(q: u64, k: usize, m: u32) -> IntervalSpec {
    let f = field(q);
    let c = CurveModel::projective_line(&f);
    let h = FunctionElem::polynomial(Poly::monomial(&f, f.one(), k));
    IntervalSpec::new(&c, &h, &DivisorSpec::at_infinity(&c, m).unwrap()).unwrap()
}

fn hyper_interval(q: u64, fpoly: &[i64], k: usize, m: u32) -> IntervalSpec {
    let f = field(q);
    let c = CurveModel::hyperelliptic(Poly::from_ints(&f, fpoly)).unwrap();
    let h = FunctionElem::hyperelliptic(Poly::monomial(&f, f.one(), k), Poly::zero(&f));
    IntervalSpec::new(&c, &h, &DivisorSpec::at_infinity(&c, m).unwrap()).unwrap()
}

fn exhaustive(i: &IntervalSpec) -> ffinterval::Histogram {
    stats::census(i, Mode::Exhaustive, CensusOptions::default()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for q in [3u64, 5] {
        let start = Instant::now();
        let i = p1_interval(q, 5, 4);
        let h = exhaustive(&i);
        within(start, Duration::from_secs(1), &format!("q={q} census"))?;
        let primes = h.count(&Partition::new(vec![5]));
        let expected = necklace_count(q, 5).unwrap() as u64;
        ensure(h.total == q.pow(5), || format!("q={q}: total {}", h.total))?;
        ensure(primes == expected, || format!("q={q}: counts[(5)] = {primes}, expected {expected}"))?;
        notes.push(format!("q={q}: {primes}/{}", h.total));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let i = p1_interval(3, 5, 3);
    let h = exhaustive(&i);
    let count = h.count(&Partition::new(vec![5]));
    let table = PlaceTable::build(i.curve(), 5, 1 << 20).map_err(|e| e.to_string())?;
    let mut brute = 0;
    for (_, elem) in i.iterate_or_sample(Mode::Exhaustive, 1000).unwrap() {
        let fac = table.brute_factor(i.divisor(), &elem).map_err(|e| e.to_string())?;
        if fac.primes.len() == 1 && fac.primes[0].1 == 1 {
            brute += 1;
        }
    }
    within(start, Duration::from_secs(1), "census and brute force")?;
    let v = report::prime_count_json(&i, &h, Mode::Exhaustive);
    let dev = v["deviation"].as_f64().unwrap();
    ensure(count == 16 && brute == 16, || format!("prime_count {count}, brute force {brute}"))?;
    ensure((dev - 0.2).abs() < 1e-12, || format!("deviation {dev}"))?;
    ensure(v["expected"] == "81/5", || format!("expected {}", v["expected"]))?;
    Ok(format!("prime_count 16 of 81, brute force 16, deviation {}", report::fmt_g(dev)))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let i = hyper_interval(5, &[1, 0, 0, 1], 2, 3);
    ensure(i.m() + 1 == 3 && i.k() == 4, || format!("m+1 = {}, k = {}", i.m() + 1, i.k()))?;
    let r = oracle::cross_check_interval(&i, 1 << 20).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(5), "cross-check")?;
    ensure(r.passed, || r.detail.clone())?;
    Ok(format!("{}; zero degree 4 for each", r.detail))
}

fn criterion_4() -> Outcome {
    let sk = oracle::check_sk_closed_form(7);
    ensure(sk.passed, || sk.detail.clone())?;
    let sums = oracle::check_partition_sums(12);
    ensure(sums.passed, || sums.detail.clone())?;
    Ok("partition_prob * k! = sk_census(k) for k <= 7; sums exact for k <= 12".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let f5 = field(5);
    let line5 = CurveModel::projective_line(&f5);
    let mixed = IntervalSpec::new(
        &line5,
        &FunctionElem::rational(Poly::from_ints(&f5, &[1, 0, 0, 0, 0, 1]), vec![(f5.zero(), 3)]),
        &DivisorSpec::new(&line5, vec![(Place::Infinity, 1), (Place::Point(f5.zero()), 2)]).unwrap(),
    )
    .unwrap();
    let runs = vec![
        p1_interval(3, 5, 4),
        p1_interval(5, 5, 4),
        p1_interval(3, 5, 3),
        p1_interval(2, 7, 6),
        p1_interval(4, 5, 3),
        p1_interval(9, 4, 3),
        mixed,
        hyper_interval(5, &[1, 0, 0, 1], 2, 3),
        hyper_interval(7, &[3, 0, 0, 1], 3, 5),
        hyper_interval(3, &[1, 2, 0, 0, 0, 1], 4, 6),
    ];
    for i in &runs {
        let h = exhaustive(i);
        let sum = h.counts.values().sum::<u64>() + h.nonseparable;
        ensure(sum == h.total && h.total as u128 == i.size(), || {
            format!("I({}): total {} vs sum {sum} vs size {}", i.f(), h.total, i.size())
        })?;
        if let Some(p) = h.counts.keys().find(|p| p.k() != i.k()) {
            return Err(format!("I({}): {p} does not sum to {}", i.f(), i.k()));
        }
    }
    // Riemann-Roch dimensions
    let mut checked = 0;
    let f7 = field(7);
    let line = CurveModel::projective_line(&f7);
    let curves = [
        CurveModel::hyperelliptic(Poly::from_ints(&f7, &[3, 0, 0, 1])).unwrap(),
        CurveModel::hyperelliptic(Poly::from_ints(&f7, &[0, -1, 0, 0, 0, 1])).unwrap(),
        CurveModel::hyperelliptic(Poly::from_ints(&f7, &[0, -1, 0, 0, 0, 0, 0, 1])).unwrap(),
    ];
    for d in 0..=20u32 {
        for split in 0..=d.min(3) {
            // split the degree between infinity and the points 1, 2, 3
            let mut support = vec![];
            if d > split {
                support.push((Place::Infinity, d - split));
            }
            for j in 0..split {
                support.push((Place::Point(f7.from_int(j as i64 + 1)), 1));
            }
            let e = DivisorSpec::new(&line, support).unwrap();
            let n = rr_basis(&line, &e).unwrap().len() as u32;
            ensure(n == d + 1, || format!("P^1 deg {d}: dim {n}"))?;
            checked += 1;
        }
        for c in &curves {
            let g = c.genus();
            if d as i64 > 2 * g as i64 - 2 {
                let n = rr_basis(c, &DivisorSpec::at_infinity(c, d).unwrap()).unwrap().len() as u32;
                ensure(n == d + 1 - g, || format!("genus {g} deg {d}: dim {n}"))?;
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(60), "invariant sweep")?;
    Ok(format!("{} exhaustive runs, {checked} Riemann-Roch dimensions", runs.len()))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let n = 50_000u64;
    let mut maxima = Vec::new();
    for (q, fpoly) in [(9u64, [1i64, 1, 0, 1]), (25, [1, 0, 0, 1]), (49, [1, 0, 0, 1])] {
        let i = hyper_interval(q, &fpoly, 5, 9);
        let hyp = i.hypotheses();
        ensure(i.k() == 10 && hyp.condition_i, || format!("q={q}: k = {}, condition (i) {}", i.k(), hyp.condition_i))?;
        let h = stats::census(&i, Mode::Sample { samples: n, seed: 20_240_601 }, CensusOptions::default())
            .map_err(|e| e.to_string())?;
        let mut max_dev: f64 = 0.0;
        for lambda in partitions(10) {
            let p = partition_prob(&lambda).to_f64().unwrap();
            let dev = (h.freq(&lambda) - p).abs();
            max_dev = max_dev.max(dev);
            if p >= 0.01 {
                let bound = 0.5 / (q as f64).sqrt() + 5.0 * (p * (1.0 - p) / n as f64).sqrt();
                ensure(dev <= bound, || format!("q={q} {lambda}: |freq - P| = {dev:.4} > {bound:.4}"))?;
            }
        }
        maxima.push(max_dev);
    }
    ensure(maxima.windows(2).all(|w| w[1] <= w[0]), || format!("max deviations {maxima:?} not nonincreasing"))?;
    within(start, Duration::from_secs(600), "sampled scan")?;
    let shown: Vec<String> = maxima.iter().map(|m| report::fmt_g(*m)).collect();
    Ok(format!("max |freq - P| for q = 9, 25, 49: {}", shown.join(", ")))
}

fn criterion_7() -> Outcome {
    let i = hyper_interval(25, &[1, 0, 0, 1], 5, 9);
    let mode = Mode::Sample { samples: 5000, seed: 7 };
    let render = |workers: usize| {
        let h = stats::census(&i, mode, CensusOptions { workers, ..Default::default() }).unwrap();
        let r = stats::deviation_report(&i, &h, mode, DEFAULT_FLOOR);
        serde_json::to_string_pretty(&report::report_json(&i, &r)).unwrap()
    };
    let a = render(2);
    let b = render(2);
    ensure(a == b, || "same seed and workers gave different reports".into())?;
    let c = render(1);
    ensure(a == c, || "worker count changed the report".into())?;
    let fac_a = curve::factor_element(i.curve(), i.divisor(), i.f()).unwrap();
    let fac_b = curve::factor_element(i.curve(), i.divisor(), i.f()).unwrap();
    ensure(fac_a == fac_b, || "factorization differs between runs".into())?;
    Ok(format!("{} byte JSON report identical across 3 runs", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("exact prime census on P^1 over F_3 and F_5", criterion_1),
        ("short-interval prime count on P^1 over F_3", criterion_2),
        ("oracle equivalence on y^2 = x^3 + 1 over F_5", criterion_3),
        ("permutation law exactness", criterion_4),
        ("global census and Riemann-Roch invariants", criterion_5),
        ("statistical convergence over F_9, F_25, F_49", criterion_6),
        ("reproducible sampled reports", criterion_7),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.2}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({why}) [{secs:.2}s]", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
