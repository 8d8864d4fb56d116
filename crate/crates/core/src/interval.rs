//! Short intervals `I(f, E) = f + H^0(C, O(E))`.
//!
//! Elements are addressed by coefficient tuples `(a_0, ..., a_m)` against the
//! Riemann-Roch basis `{1, f_1, ..., f_m}`. Streams are split into shards so a
//! census can run in parallel while staying bit-reproducible:
//!
//! * exhaustive shards fix a prefix of the tuple; concatenating them in order
//!   gives the lexicographic enumeration of `F_q^{m+1}`;
//! * sampled shards hold at most [`SAMPLE_SHARD_SIZE`] draws and each one is
//!   driven by its own ChaCha8 stream seeded with [`shard_seed`]`(seed, index)`.
//!   Each draw takes `m + 1` uniform field elements via `rand` 0.8's
//!   `gen_range(0..q)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::{self, CurveKind, CurveModel, DivisorSpec, FunctionElem, Place};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldElem};
use crate::poly::Poly;

/// Default cap on exhaustive enumeration size.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Draws per sampled shard.
pub const SAMPLE_SHARD_SIZE: u64 = 4096;

/// Exhaustive shards enumerate at least this many prefixes when possible.
const MIN_PREFIXES: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sample { samples: u64, seed: u64 },
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sampled shard `index` for a run seeded with `seed`.
pub fn shard_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Basis elements in a form that makes `element_at` a plain linear combination.
#[derive(Clone, Debug)]
enum Linear {
    /// Numerators over the denominator of `f`.
    Rational {
        poles: Vec<(Elem, u32)>,
        f_num: Poly,
        nums: Vec<Poly>,
    },
    /// `(is_y_part, power of x)` per basis element.
    Hyperelliptic {
        fa: Poly,
        fb: Poly,
        monomials: Vec<(bool, usize)>,
    },
}

#[derive(Clone, Debug)]
pub struct IntervalSpec {
    curve: CurveModel,
    divisor: DivisorSpec,
    f: FunctionElem,
    basis: Vec<FunctionElem>,
    k: u32,
    pole_orders: Vec<(Place, u32)>,
    linear: Linear,
}

/// Witnesses for the hypotheses of the prime-count asymptotic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub genus: u32,
    pub deg_e: u32,
    pub k: u32,
    pub m: usize,
    /// `3(2g + 1)`.
    pub bound_i: u32,
    /// `3(2g+1) <= deg E < k`.
    pub condition_i: bool,
    /// `2(2g + 1)`.
    pub bound_ii: u32,
    pub characteristic: u32,
    /// The numerator of `df/dt` is nonzero of degree >= 1 (P^1 only).
    pub derivative_nonconstant: bool,
    /// Rational zeros of `df/dt` off `supp E`.
    pub derivative_zeros: Vec<String>,
    /// `2(2g+1) <= deg E < k`, characteristic 2, and `df` nonconstant.
    pub condition_ii: bool,
    pub short: bool,
    /// `deg E >= 2g - 2`.
    pub riemann_roch_ok: bool,
}

impl IntervalSpec {
    /// Builds `I(f, E)`, enforcing that the pole order of `f` at every support
    /// place strictly exceeds the multiplicity in `E`.
    pub fn new(curve: &CurveModel, f: &FunctionElem, divisor: &DivisorSpec) -> Result<IntervalSpec> {
        let pd = curve::pole_degree(curve, divisor, f)?;
        if pd.k == 0 {
            return Err(Error::ConstantFunction);
        }
        for &(place, mult) in divisor.support() {
            let order = pd
                .orders
                .iter()
                .find(|(pl, _)| *pl == place)
                .map_or(0, |(_, d)| *d);
            if order <= mult {
                return Err(Error::NotShort {
                    place: place.describe(curve.field()),
                    pole_order: order,
                    mult,
                });
            }
        }
        let basis = curve::rr_basis(curve, divisor)?;
        let linear = match (curve.kind(), f) {
            (CurveKind::ProjectiveLine, FunctionElem::Rational { num, poles }) => {
                let field = curve.field();
                let nums = basis
                    .iter()
                    .map(|b| match b {
                        FunctionElem::Rational { num: bn, poles: bp } => {
                            poles.iter().fold(bn.clone(), |acc, &(p, d)| {
                                let have = bp.iter().find(|(q, _)| *q == p).map_or(0, |(_, e)| *e);
                                let lin = Poly::from_coeffs(field, vec![field.neg(p), Elem::ONE]);
                                &acc * &lin.pow((d - have) as u64)
                            })
                        }
                        FunctionElem::Hyperelliptic { .. } => unreachable!("P^1 basis"),
                    })
                    .collect();
                Linear::Rational {
                    poles: poles.clone(),
                    f_num: num.clone(),
                    nums,
                }
            }
            (CurveKind::Hyperelliptic, FunctionElem::Hyperelliptic { a, b }) => {
                let monomials = basis
                    .iter()
                    .map(|e| match e {
                        FunctionElem::Hyperelliptic { a, b } if b.is_zero() => (false, a.degree().unwrap()),
                        FunctionElem::Hyperelliptic { b, .. } => (true, b.degree().unwrap()),
                        FunctionElem::Rational { .. } => unreachable!("hyperelliptic basis"),
                    })
                    .collect();
                Linear::Hyperelliptic {
                    fa: a.clone(),
                    fb: b.clone(),
                    monomials,
                }
            }
            _ => unreachable!("model checked by pole_degree"),
        };
        Ok(IntervalSpec {
            curve: curve.clone(),
            divisor: divisor.clone(),
            f: f.clone(),
            basis,
            k: pd.k,
            pole_orders: pd.orders,
            linear,
        })
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn divisor(&self) -> &DivisorSpec {
        &self.divisor
    }

    pub fn f(&self) -> &FunctionElem {
        &self.f
    }

    pub fn basis(&self) -> &[FunctionElem] {
        &self.basis
    }

    /// `dim H^0(C, O(E)) - 1`.
    pub fn m(&self) -> usize {
        self.basis.len() - 1
    }

    /// Pole degree of `f`, shared by every element of the interval.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn pole_orders(&self) -> &[(Place, u32)] {
        &self.pole_orders
    }

    /// `q^{m+1}`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        (self.field().q() as u128)
            .checked_pow(self.basis.len() as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn hypotheses(&self) -> HypothesisReport {
        let g = self.curve.genus();
        let deg_e = self.divisor.degree();
        let k = self.k;
        let bound_i = 3 * (2 * g + 1);
        let bound_ii = 2 * (2 * g + 1);
        let field = self.field();
        let characteristic = field.characteristic();
        let mut derivative_nonconstant = false;
        let mut derivative_zeros = Vec::new();
        if let FunctionElem::Rational { num, poles } = &self.f {
            let den = poles.iter().fold(Poly::one(field), |acc, &(p, d)| {
                &acc * &Poly::from_coeffs(field, vec![field.neg(p), Elem::ONE]).pow(d as u64)
            });
            // numerator of (N/D)' = (N'D - ND')/D^2
            let w = &(&num.derivative() * &den) - &(num * &den.derivative());
            derivative_nonconstant = w.degree().is_some_and(|d| d >= 1);
            if !w.is_zero() {
                derivative_zeros = field
                    .elements()
                    .filter(|&a| w.eval(a).is_zero() && !self.divisor.contains(Place::Point(a)))
                    .map(|a| field.format(a))
                    .collect();
            }
        }
        HypothesisReport {
            genus: g,
            deg_e,
            k,
            m: self.m(),
            bound_i,
            condition_i: bound_i <= deg_e && deg_e < k,
            bound_ii,
            characteristic,
            derivative_nonconstant,
            derivative_zeros,
            condition_ii: bound_ii <= deg_e && deg_e < k && characteristic == 2 && derivative_nonconstant,
            short: true,
            riemann_roch_ok: deg_e as i64 >= 2 * g as i64 - 2,
        }
    }

    /// `f + a_0 + sum a_i f_i`.
    pub fn element_at(&self, a: &[Elem]) -> Result<FunctionElem> {
        if a.len() != self.basis.len() {
            return Err(Error::WrongArity {
                expected: self.basis.len(),
                got: a.len(),
            });
        }
        let field = self.field();
        if a.iter().any(|c| c.code() >= field.q()) {
            return Err(Error::FieldMismatch);
        }
        Ok(match &self.linear {
            Linear::Rational { poles, f_num, nums } => {
                let num = nums
                    .iter()
                    .zip(a)
                    .filter(|(_, c)| !c.is_zero())
                    .fold(f_num.clone(), |acc, (n, &c)| &acc + &n.scale(c));
                // the dominant pole part of f is untouched, so the quotient is reduced
                FunctionElem::Rational {
                    num,
                    poles: poles.clone(),
                }
            }
            Linear::Hyperelliptic { fa, fb, monomials } => {
                let mut ac = fa.coeffs().to_vec();
                let mut bc = fb.coeffs().to_vec();
                for (&(is_y, pow), &c) in monomials.iter().zip(a) {
                    if c.is_zero() {
                        continue;
                    }
                    let target = if is_y { &mut bc } else { &mut ac };
                    if target.len() <= pow {
                        target.resize(pow + 1, Elem::ZERO);
                    }
                    target[pow] = field.add(target[pow], c);
                }
                FunctionElem::hyperelliptic(Poly::from_coeffs(field, ac), Poly::from_coeffs(field, bc))
            }
        })
    }

    /// As [`element_at`](Self::element_at), checking the field of every coordinate.
    pub fn element_at_values(&self, a: &[FieldElem]) -> Result<FunctionElem> {
        if a.iter().any(|c| c.field() != self.field()) {
            return Err(Error::FieldMismatch);
        }
        let coords: Vec<Elem> = a.iter().map(FieldElem::value).collect();
        self.element_at(&coords)
    }

    /// Shards covering `mode`, in stream order.
    pub fn shards(&self, mode: Mode, budget: u128) -> Result<Vec<Shard>> {
        match mode {
            Mode::Exhaustive => {
                let size = self.size();
                if size > budget {
                    return Err(Error::BudgetExceeded { needed: size, budget });
                }
                let q = self.field().q() as u64;
                let dims = self.basis.len();
                let mut len = 0usize;
                let mut count = 1u64;
                while len < dims && count < MIN_PREFIXES {
                    len += 1;
                    count *= q;
                }
                Ok((0..count)
                    .map(|idx| {
                        let mut prefix = vec![Elem::ZERO; len];
                        let mut rest = idx;
                        for slot in prefix.iter_mut().rev() {
                            *slot = Elem::from_code((rest % q) as u32);
                            rest /= q;
                        }
                        Shard::Prefix(prefix)
                    })
                    .collect())
            }
            Mode::Sample { samples, seed } => {
                let n = samples.div_ceil(SAMPLE_SHARD_SIZE);
                Ok((0..n)
                    .map(|index| Shard::Sample {
                        index,
                        count: SAMPLE_SHARD_SIZE.min(samples - index * SAMPLE_SHARD_SIZE),
                        seed: shard_seed(seed, index),
                    })
                    .collect())
            }
        }
    }

    /// Coefficient tuples of one shard.
    pub fn shard_tuples<'a>(&'a self, shard: &'a Shard) -> Box<dyn Iterator<Item = Vec<Elem>> + 'a> {
        let dims = self.basis.len();
        let field = self.field().clone();
        match shard {
            Shard::Prefix(prefix) => Box::new(Odometer::new(prefix.clone(), dims, field.q())),
            Shard::Sample { count, seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Box::new((0..*count).map(move |_| (0..dims).map(|_| field.random(&mut rng)).collect()))
            }
        }
    }

    /// The full stream of `(a, element_at(a))` for `mode`.
    pub fn iterate_or_sample(
        &self,
        mode: Mode,
        budget: u128,
    ) -> Result<impl Iterator<Item = (Vec<Elem>, FunctionElem)> + '_> {
        let shards = self.shards(mode, budget)?;
        Ok(shards.into_iter().flat_map(move |shard| {
            let tuples: Vec<Vec<Elem>> = self.shard_tuples(&shard).collect();
            tuples.into_iter().map(move |a| {
                let h = self.element_at(&a).expect("tuple has the right arity");
                (a, h)
            })
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shard {
    /// All tuples starting with this prefix.
    Prefix(Vec<Elem>),
    Sample { index: u64, count: u64, seed: u64 },
}

/// Lexicographic enumeration of the tuples extending a fixed prefix, last
/// coordinate fastest.
struct Odometer {
    cur: Vec<u32>,
    fixed: usize,
    q: u32,
    done: bool,
}

impl Odometer {
    fn new(prefix: Vec<Elem>, dims: usize, q: u32) -> Odometer {
        let fixed = prefix.len();
        let mut cur: Vec<u32> = prefix.iter().map(|e| e.code()).collect();
        cur.resize(dims, 0);
        Odometer {
            cur,
            fixed,
            q,
            done: false,
        }
    }
}

impl Iterator for Odometer {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.cur.iter().map(|&c| Elem::from_code(c)).collect();
        let mut i = self.cur.len();
        loop {
            if i == self.fixed {
                self.done = true;
                break;
            }
            i -= 1;
            self.cur[i] += 1;
            if self.cur[i] < self.q {
                break;
            }
            self.cur[i] = 0;
        }
        Some(out)
    }
}
