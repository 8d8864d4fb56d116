//! Factorization-type census over an interval and its comparison with the
//! cycle-type distribution of the symmetric group.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{self, FactorizationType};
use crate::error::{Error, Result};
use crate::interval::{IntervalSpec, Mode, Shard};

/// A partition of `k` stored as nonincreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts `parts` into nonincreasing order. Zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Parses `"3,1,1"` or `"(3,1,1)"`.
    pub fn parse(s: &str) -> Result<Partition> {
        let body = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if body.trim().is_empty() {
            return Ok(Partition(Vec::new()));
        }
        body.split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| Error::Parse(format!("partition {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(Partition::new)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `k`, in reverse lexicographic order starting from `(k)`.
pub fn partitions(k: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Proportion of permutations of `S_k` with cycle type `lambda`:
/// `1 / prod_j j^{m_j} m_j!` where `m_j` counts parts equal to `j`.
pub fn partition_prob(lambda: &Partition) -> BigRational {
    let mut den = BigInt::one();
    let mut i = 0;
    let parts = &lambda.0;
    while i < parts.len() {
        let j = parts[i];
        let mut m = 0u32;
        while i < parts.len() && parts[i] == j {
            i += 1;
            m += 1;
            den *= BigInt::from(j) * BigInt::from(m);
        }
    }
    BigRational::new(BigInt::one(), den)
}

/// Counts of factorization types.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Histogram {
    pub counts: BTreeMap<Partition, u64>,
    pub nonseparable: u64,
    pub total: u64,
}

impl Histogram {
    pub fn record(&mut self, ty: &FactorizationType) {
        self.total += 1;
        match ty {
            FactorizationType::Separable(p) => *self.counts.entry(p.clone()).or_insert(0) += 1,
            FactorizationType::NonSeparable => self.nonseparable += 1,
        }
    }

    pub fn merge(&mut self, other: Histogram) {
        for (p, c) in other.counts {
            *self.counts.entry(p).or_insert(0) += c;
        }
        self.nonseparable += other.nonseparable;
        self.total += other.total;
    }

    pub fn count(&self, lambda: &Partition) -> u64 {
        self.counts.get(lambda).copied().unwrap_or(0)
    }

    /// `count / total`, or 0 for an empty histogram.
    pub fn freq(&self, lambda: &Partition) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(lambda) as f64 / self.total as f64
        }
    }
}

/// Execution settings for a census.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub budget: u128,
    /// Worker threads; 0 means rayon's default.
    pub workers: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            budget: crate::interval::DEFAULT_BUDGET,
            workers: 0,
        }
    }
}

fn run_shard(interval: &IntervalSpec, shard: &Shard, index: usize) -> Result<Histogram> {
    let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
    let mut hist = Histogram::default();
    for a in interval.shard_tuples(shard) {
        let h = interval.element_at(&a)?;
        let ty = curve::factorization_type_with(interval.curve(), interval.divisor(), &h, &mut rng)?;
        hist.record(&ty);
    }
    Ok(hist)
}

/// Histogram of factorization types over `interval`. The result does not depend
/// on `opts.workers`.
pub fn census(interval: &IntervalSpec, mode: Mode, opts: CensusOptions) -> Result<Histogram> {
    let shards = interval.shards(mode, opts.budget)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
    pool.install(|| {
        shards
            .par_iter()
            .enumerate()
            .map(|(i, s)| run_shard(interval, s, i))
            .try_reduce(Histogram::default, |mut a, b| {
                a.merge(b);
                Ok(a)
            })
    })
}

/// Number of prime elements of `interval`, i.e. the census count of `(k)`.
pub fn prime_count(interval: &IntervalSpec, mode: Mode, opts: CensusOptions) -> Result<u64> {
    let hist = census(interval, mode, opts)?;
    Ok(hist.count(&Partition(vec![interval.k()])))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub lambda: Partition,
    pub observed: u64,
    /// `|I| * P(lambda)` exhaustively, `N * P(lambda)` when sampled.
    pub expected: BigRational,
    /// `|observed - expected|`.
    pub deviation: f64,
    /// See [`CountReport`].
    pub normalized: Option<f64>,
}

/// Observed counts against the `S_k` prediction.
///
/// Exhaustive runs normalize by `q^{m + 1/2}` and report `fitted_c`, the largest
/// normalized deviation. Sampled runs normalize by the binomial standard
/// deviation `sqrt(N P (1 - P))` and leave `fitted_c` empty.
#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub mode: Mode,
    pub k: u32,
    pub total: u64,
    pub rows: Vec<ReportRow>,
    pub nonseparable: u64,
    pub fitted_c: Option<f64>,
}

/// Rows with `observed > 0` or `P(lambda) >= floor` are kept.
pub const DEFAULT_FLOOR: f64 = 0.001;

pub fn deviation_report(interval: &IntervalSpec, hist: &Histogram, mode: Mode, floor: f64) -> CountReport {
    let k = interval.k();
    let total = hist.total;
    let n = BigRational::from_integer(BigInt::from(total));
    let scale = match mode {
        Mode::Exhaustive => Some((interval.field().q() as f64).powf(interval.m() as f64 + 0.5)),
        Mode::Sample { .. } => None,
    };
    let mut rows = Vec::new();
    let lambdas = if total == 0 { Vec::new() } else { partitions(k) };
    for lambda in lambdas {
        let p = partition_prob(&lambda);
        let pf = p.to_f64().unwrap_or(0.0);
        let observed = hist.count(&lambda);
        if observed == 0 && pf < floor {
            continue;
        }
        let expected = &n * &p;
        let deviation = (observed as f64 - expected.to_f64().unwrap_or(0.0)).abs();
        let normalized = match scale {
            Some(s) => Some(deviation / s),
            None => {
                let sd = (total as f64 * pf * (1.0 - pf)).sqrt();
                (sd > 0.0).then(|| deviation / sd)
            }
        };
        rows.push(ReportRow {
            lambda,
            observed,
            expected,
            deviation,
            normalized,
        });
    }
    let fitted_c = scale.and_then(|_| {
        rows.iter()
            .filter_map(|r| r.normalized)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
    });
    CountReport {
        mode,
        k,
        total,
        rows,
        nonseparable: hist.nonseparable,
        fitted_c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CurveModel, DivisorSpec, FunctionElem};
    use crate::field::{Elem, Field};
    use crate::poly::{self, Poly};
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn partition_prob_examples() {
        assert_eq!(partition_prob(&Partition::new(vec![3])), rat(1, 3));
        assert_eq!(partition_prob(&Partition::new(vec![1, 2])), rat(1, 2));
        assert_eq!(partition_prob(&Partition::new(vec![1, 1, 1])), rat(1, 6));
        assert_eq!(partition_prob(&Partition::new(vec![2, 2])), rat(1, 8));
        assert_eq!(partition_prob(&Partition::new(vec![])), rat(1, 1));
    }

    #[test]
    fn partition_probs_sum_to_one() {
        for k in 0..=12 {
            let parts = partitions(k);
            let s = parts.iter().map(partition_prob).fold(BigRational::zero(), |a, b| a + b);
            assert_eq!(s, BigRational::one(), "k = {k}");
            assert!(parts.iter().all(|p| p.k() == k));
        }
        let counts: Vec<usize> = (1..=10).map(|k| partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions(3)[0], Partition::new(vec![3]));
    }

    #[test]
    fn partition_parse_and_display() {
        let p = Partition::parse("(1,3,1)").unwrap();
        assert_eq!(p.parts(), &[3, 1, 1]);
        assert_eq!(p.to_string(), "(3,1,1)");
        assert_eq!(Partition::parse("2, 2").unwrap().to_string(), "(2,2)");
        assert!(Partition::parse("x").is_err());
    }

    #[test]
    fn histogram_merge_and_freq() {
        let mut a = Histogram::default();
        a.record(&FactorizationType::Separable(Partition::new(vec![2])));
        a.record(&FactorizationType::NonSeparable);
        let mut b = Histogram::default();
        b.record(&FactorizationType::Separable(Partition::new(vec![2])));
        b.record(&FactorizationType::Separable(Partition::new(vec![1, 1])));
        a.merge(b);
        assert_eq!(a.total, 4);
        assert_eq!(a.nonseparable, 1);
        assert_eq!(a.count(&Partition::new(vec![2])), 2);
        assert_eq!(a.freq(&Partition::new(vec![1, 1])), 0.25);
        assert_eq!(Histogram::default().freq(&Partition::new(vec![1])), 0.0);
    }

    fn p1_interval(p: u64, k: usize, m: u32) -> IntervalSpec {
        let f = Field::prime(p).unwrap();
        let c = CurveModel::projective_line(&f);
        IntervalSpec::new(
            &c,
            &FunctionElem::polynomial(Poly::monomial(&f, Elem::ONE, k)),
            &DivisorSpec::at_infinity(&c, m).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn census_p1_t3_f3() {
        // t^3 + a2 t^2 + a1 t + a0 runs over all monic cubics over F_3
        let i = p1_interval(3, 3, 2);
        let h = census(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
        let c = |v: Vec<u32>| h.count(&Partition::new(v));
        assert_eq!(h.total, 27);
        assert_eq!(c(vec![3]), 8);
        assert_eq!(c(vec![2, 1]), 9);
        assert_eq!(c(vec![1, 1, 1]), 1);
        assert_eq!(h.nonseparable, 9);
        assert_eq!(prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap(), 8);
    }

    #[test]
    fn census_full_space_matches_irreducible_formula() {
        // monic polynomials of degree k over F_p: (k) count is the necklace number
        let i = p1_interval(5, 4, 3);
        let n = prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
        assert_eq!(n, (625 - 25) / 4);
        let direct = (0..625u32)
            .filter(|&code| {
                let f = i.field();
                let mut c: Vec<Elem> = (0..4).map(|j| f.elem(code / 5u32.pow(j) % 5).unwrap()).collect();
                c.push(Elem::ONE);
                poly::is_irreducible(&Poly::from_coeffs(f, c)).unwrap()
            })
            .count();
        assert_eq!(n as usize, direct);
    }

    #[test]
    fn census_is_worker_independent() {
        let i = p1_interval(7, 5, 3);
        let mode = Mode::Sample { samples: 20_000, seed: 9 };
        let base = census(&i, mode, CensusOptions { workers: 1, ..Default::default() }).unwrap();
        for workers in [2, 3, 8] {
            let h = census(&i, mode, CensusOptions { workers, ..Default::default() }).unwrap();
            assert_eq!(h, base);
        }
        let ex1 = census(&i, Mode::Exhaustive, CensusOptions { workers: 1, ..Default::default() }).unwrap();
        let ex4 = census(&i, Mode::Exhaustive, CensusOptions { workers: 4, ..Default::default() }).unwrap();
        assert_eq!(ex1, ex4);
    }

    #[test]
    fn census_budget() {
        let i = p1_interval(7, 5, 3);
        let err = census(&i, Mode::Exhaustive, CensusOptions { budget: 100, workers: 1 }).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 2401, budget: 100 });
    }

    #[test]
    fn report_exhaustive() {
        let i = p1_interval(3, 3, 2);
        let h = census(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
        let r = deviation_report(&i, &h, Mode::Exhaustive, DEFAULT_FLOOR);
        assert_eq!(r.rows.len(), 3);
        let top = &r.rows[0];
        assert_eq!(top.lambda, Partition::new(vec![3]));
        assert_eq!(top.expected, rat(9, 1));
        assert_eq!(top.deviation, 1.0);
        let norm = top.normalized.unwrap();
        assert!((norm - 1.0 / 3f64.powf(2.5)).abs() < 1e-12);
        let max = r.rows.iter().map(|x| x.normalized.unwrap()).fold(0.0, f64::max);
        assert_eq!(r.fitted_c, Some(max));
    }

    #[test]
    fn report_sampled_and_floor() {
        let i = p1_interval(7, 9, 8);
        let mode = Mode::Sample { samples: 500, seed: 1 };
        let h = census(&i, mode, CensusOptions::default()).unwrap();
        let r = deviation_report(&i, &h, mode, DEFAULT_FLOOR);
        assert_eq!(r.fitted_c, None);
        for row in &r.rows {
            let p = partition_prob(&row.lambda).to_f64().unwrap();
            assert!(row.observed > 0 || p >= DEFAULT_FLOOR);
            let sd = (500.0 * p * (1.0 - p)).sqrt();
            assert!((row.normalized.unwrap() - row.deviation / sd).abs() < 1e-9);
        }
        // (1^9) has probability 1/9! and is dropped unless observed
        assert!(r.rows.len() < partitions(9).len());

        let empty = Mode::Sample { samples: 0, seed: 1 };
        let h = census(&i, empty, CensusOptions::default()).unwrap();
        let r = deviation_report(&i, &h, empty, DEFAULT_FLOOR);
        assert!(r.rows.is_empty());
        assert_eq!(r.fitted_c, None);
    }

    #[test]
    fn prime_count_examples() {
        // t^5 + a3 t^3 + ... + a0 over F_3: irreducible quintics with no t^4 term
        let i = p1_interval(3, 5, 3);
        assert_eq!(prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap(), 16);
        let i = p1_interval(2, 3, 1);
        assert_eq!(prime_count(&i, Mode::Exhaustive, CensusOptions::default()).unwrap(), 1);
        let i = p1_interval(3, 5, 4);
        let h = census(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
        assert_eq!(h.count(&Partition::new(vec![5])), 48);
        assert_eq!(h.count(&Partition::new(vec![1, 1, 1, 1, 1])), 0);
        assert_eq!(h.counts.values().sum::<u64>() + h.nonseparable, 243);
        let r = deviation_report(&i, &h, Mode::Exhaustive, DEFAULT_FLOOR);
        let row = r.rows.iter().find(|r| r.lambda == Partition::new(vec![5])).unwrap();
        assert!((row.deviation - 0.6).abs() < 1e-9);
        assert!((row.normalized.unwrap() - 0.6 / 3f64.powf(4.5)).abs() < 1e-12);
    }

    #[test]
    fn sampled_frequencies_track_exhaustive() {
        let i = p1_interval(5, 6, 4);
        let ex = census(&i, Mode::Exhaustive, CensusOptions::default()).unwrap();
        let n = 20_000u64;
        let sa = census(&i, Mode::Sample { samples: n, seed: 3 }, CensusOptions::default()).unwrap();
        for lambda in partitions(6) {
            let p = ex.freq(&lambda);
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            assert!((sa.freq(&lambda) - p).abs() <= 5.0 * sigma + 1e-12, "{lambda}");
        }
    }
}
