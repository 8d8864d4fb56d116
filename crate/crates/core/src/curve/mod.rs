//! Curve models with explicit affine coordinate rings.
//!
//! Two models are supported:
//!
//! * the projective line `P^1` with coordinate `t`, where divisors may be
//!   supported at any rational points and at infinity;
//! * `y^2 = f(x)` with `f` monic, squarefree, of odd degree `2g + 1`, in odd
//!   characteristic. This model has a single rational place at infinity and
//!   divisors are supported there only, so the coordinate ring of `C \ E` is
//!   `F_q[x, y] / (y^2 - f)`.
//!
//! Prime divisors of an element are read off from the factorization of its
//! numerator (on `P^1`) or of its norm `a^2 - f b^2` (hyperelliptic), with split
//! places separated by a Hensel-lifted local square root of `f`.

mod hyperelliptic;

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::{self, Poly};
use crate::stats::Partition;

pub use hyperelliptic::{classify_place, hensel_sqrt, norm};

/// A rational place usable in divisor support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// The point `t = a` on `P^1`.
    Point(Elem),
    Infinity,
}

impl Place {
    pub fn describe(&self, field: &Field) -> String {
        match self {
            Place::Infinity => "inf".into(),
            Place::Point(a) => format!("t={}", field.format(*a)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    ProjectiveLine,
    Hyperelliptic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    field: Field,
    genus: u32,
    fpoly: Option<Poly>,
}

impl CurveModel {
    pub fn projective_line(field: &Field) -> CurveModel {
        CurveModel {
            field: field.clone(),
            genus: 0,
            fpoly: None,
        }
    }

    /// The model `y^2 = fpoly(x)`.
    pub fn hyperelliptic(fpoly: Poly) -> Result<CurveModel> {
        let field = fpoly.field().clone();
        if field.p() == 2 {
            return Err(Error::CharTwoUnsupported);
        }
        let deg = fpoly.degree().ok_or(Error::ZeroPolynomial)?;
        if deg % 2 == 0 {
            return Err(Error::EvenDegree(deg));
        }
        if !fpoly.is_monic() {
            return Err(Error::NonMonicModel);
        }
        if !fpoly.gcd(&fpoly.derivative())?.is_one() {
            return Err(Error::SingularModel);
        }
        Ok(CurveModel {
            field,
            genus: (deg as u32 - 1) / 2,
            fpoly: Some(fpoly),
        })
    }

    pub fn kind(&self) -> CurveKind {
        if self.fpoly.is_some() {
            CurveKind::Hyperelliptic
        } else {
            CurveKind::ProjectiveLine
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Defining polynomial of the hyperelliptic model.
    pub fn fpoly(&self) -> Option<&Poly> {
        self.fpoly.as_ref()
    }

    pub(crate) fn require_fpoly(&self) -> Result<&Poly> {
        self.fpoly
            .as_ref()
            .ok_or_else(|| Error::InvalidSpec("operation requires a hyperelliptic model".into()))
    }

    /// Coordinate variable names: `t` on `P^1`, `x` on the hyperelliptic model.
    pub fn var(&self) -> &'static str {
        match self.kind() {
            CurveKind::ProjectiveLine => "t",
            CurveKind::Hyperelliptic => "x",
        }
    }
}

/// An effective divisor supported at rational places.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSpec {
    support: Vec<(Place, u32)>,
    degree: u32,
}

impl DivisorSpec {
    pub fn new(curve: &CurveModel, mut support: Vec<(Place, u32)>) -> Result<DivisorSpec> {
        support.sort_by_key(|(pl, _)| *pl);
        for w in support.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::UnsupportedDivisor(format!(
                    "place {} listed twice",
                    w[0].0.describe(curve.field())
                )));
            }
        }
        for (pl, m) in &support {
            if *m == 0 {
                return Err(Error::UnsupportedDivisor("multiplicities must be >= 1".into()));
            }
            if curve.kind() == CurveKind::Hyperelliptic && *pl != Place::Infinity {
                return Err(Error::UnsupportedDivisor(
                    "hyperelliptic divisors must be supported at infinity".into(),
                ));
            }
        }
        let degree = support.iter().map(|(_, m)| m).sum();
        Ok(DivisorSpec { support, degree })
    }

    /// `m * inf`.
    pub fn at_infinity(curve: &CurveModel, m: u32) -> Result<DivisorSpec> {
        if m == 0 {
            DivisorSpec::new(curve, vec![])
        } else {
            DivisorSpec::new(curve, vec![(Place::Infinity, m)])
        }
    }

    /// Support places with multiplicities, points before infinity.
    pub fn support(&self) -> &[(Place, u32)] {
        &self.support
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mult(&self, place: Place) -> u32 {
        self.support
            .iter()
            .find(|(pl, _)| *pl == place)
            .map_or(0, |(_, m)| *m)
    }

    pub fn contains(&self, place: Place) -> bool {
        self.mult(place) > 0
    }

    pub fn affine_points(&self) -> impl Iterator<Item = (Elem, u32)> + '_ {
        self.support.iter().filter_map(|(pl, m)| match pl {
            Place::Point(a) => Some((*a, *m)),
            Place::Infinity => None,
        })
    }
}

/// A function regular away from finitely many rational places.
#[derive(Clone, PartialEq, Eq)]
pub enum FunctionElem {
    /// `num / prod (t - p)^d` on `P^1`; poles sorted by point, each `d >= 1`,
    /// and `num(p) != 0` at every listed pole.
    Rational { num: Poly, poles: Vec<(Elem, u32)> },
    /// `a(x) + y b(x)` on the hyperelliptic model.
    Hyperelliptic { a: Poly, b: Poly },
}

impl fmt::Debug for FunctionElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string())
    }
}

impl fmt::Display for FunctionElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionElem::Rational { num, poles } => {
                if poles.is_empty() {
                    return f.write_str(&num.display("t"));
                }
                let field = num.field();
                let den: Vec<String> = poles
                    .iter()
                    .map(|&(p, d)| {
                        let lin = if p.is_zero() {
                            "t".to_string()
                        } else {
                            format!("(t + {})", field.format(field.neg(p)))
                        };
                        if d == 1 {
                            lin
                        } else {
                            format!("{lin}^{d}")
                        }
                    })
                    .collect();
                write!(f, "({})/({})", num.display("t"), den.join("*"))
            }
            FunctionElem::Hyperelliptic { a, b } => {
                let ypart = if b.is_zero() {
                    None
                } else if b.is_one() {
                    Some("y".to_string())
                } else {
                    Some(format!("y*({})", b.display("x")))
                };
                match (a.is_zero(), ypart) {
                    (_, None) => f.write_str(&a.display("x")),
                    (true, Some(y)) => f.write_str(&y),
                    (false, Some(y)) => write!(f, "{} + {}", a.display("x"), y),
                }
            }
        }
    }
}

fn linear(field: &Field, p: Elem) -> Poly {
    Poly::from_coeffs(field, vec![field.neg(p), Elem::ONE])
}

impl FunctionElem {
    pub fn polynomial(num: Poly) -> FunctionElem {
        FunctionElem::Rational {
            num,
            poles: Vec::new(),
        }
    }

    /// `num / prod (t - p)^d`, reduced to canonical form.
    pub fn rational(num: Poly, poles: Vec<(Elem, u32)>) -> FunctionElem {
        let field = num.field().clone();
        let mut merged: Vec<(Elem, u32)> = Vec::new();
        let mut sorted = poles;
        sorted.sort_by_key(|(p, _)| *p);
        for (p, d) in sorted {
            match merged.last_mut() {
                Some((lp, ld)) if *lp == p => *ld += d,
                _ => merged.push((p, d)),
            }
        }
        let mut num = num;
        if num.is_zero() {
            return FunctionElem::polynomial(num);
        }
        for (p, d) in merged.iter_mut() {
            let lin = linear(&field, *p);
            while *d > 0 && num.eval(*p).is_zero() {
                num = num.div_exact(&lin);
                *d -= 1;
            }
        }
        merged.retain(|(_, d)| *d > 0);
        FunctionElem::Rational { num, poles: merged }
    }

    /// Quotient `num / den` on `P^1`; `den` must split into linear factors.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<FunctionElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field().clone();
        let fac = poly::factor(&den)?;
        let mut poles = Vec::new();
        for (pi, m) in &fac.factors {
            if pi.degree() != Some(1) {
                return Err(Error::PoleOutsideE);
            }
            poles.push((field.neg(pi.coeff(0)), *m));
        }
        let num = num.scale(field.inv(fac.unit)?);
        Ok(FunctionElem::rational(num, poles))
    }

    pub fn hyperelliptic(a: Poly, b: Poly) -> FunctionElem {
        FunctionElem::Hyperelliptic { a, b }
    }

    pub fn constant(curve: &CurveModel, c: Elem) -> FunctionElem {
        let field = curve.field();
        match curve.kind() {
            CurveKind::ProjectiveLine => FunctionElem::polynomial(Poly::constant(field, c)),
            CurveKind::Hyperelliptic => {
                FunctionElem::hyperelliptic(Poly::constant(field, c), Poly::zero(field))
            }
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            FunctionElem::Rational { num, .. } => num.field(),
            FunctionElem::Hyperelliptic { a, .. } => a.field(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FunctionElem::Rational { num, .. } => num.is_zero(),
            FunctionElem::Hyperelliptic { a, b } => a.is_zero() && b.is_zero(),
        }
    }

    pub fn scale(&self, c: Elem) -> FunctionElem {
        match self {
            FunctionElem::Rational { num, poles } => {
                if c.is_zero() {
                    FunctionElem::polynomial(Poly::zero(num.field()))
                } else {
                    FunctionElem::Rational {
                        num: num.scale(c),
                        poles: poles.clone(),
                    }
                }
            }
            FunctionElem::Hyperelliptic { a, b } => FunctionElem::hyperelliptic(a.scale(c), b.scale(c)),
        }
    }

    pub fn add(&self, other: &FunctionElem) -> Result<FunctionElem> {
        match (self, other) {
            (
                FunctionElem::Rational { num: n1, poles: p1 },
                FunctionElem::Rational { num: n2, poles: p2 },
            ) => {
                let field = n1.field();
                if field != n2.field() {
                    return Err(Error::FieldMismatch);
                }
                let common = max_poles(p1, p2);
                let lift = |num: &Poly, poles: &[(Elem, u32)]| {
                    common.iter().fold(num.clone(), |acc, &(p, d)| {
                        let have = poles.iter().find(|(q, _)| *q == p).map_or(0, |(_, e)| *e);
                        &acc * &linear(field, p).pow((d - have) as u64)
                    })
                };
                let num = &lift(n1, p1) + &lift(n2, p2);
                Ok(FunctionElem::rational(num, common))
            }
            (FunctionElem::Hyperelliptic { a: a1, b: b1 }, FunctionElem::Hyperelliptic { a: a2, b: b2 }) => {
                Ok(FunctionElem::hyperelliptic(a1.try_add(a2)?, b1.try_add(b2)?))
            }
            _ => Err(Error::InvalidSpec("functions on different curve models".into())),
        }
    }

    /// All poles with their orders (places are rational, so orders are degrees).
    pub fn poles(&self, curve: &CurveModel) -> Vec<(Place, u32)> {
        match self {
            FunctionElem::Rational { num, poles } => {
                let mut out: Vec<(Place, u32)> =
                    poles.iter().map(|&(p, d)| (Place::Point(p), d)).collect();
                let den_deg: i64 = poles.iter().map(|(_, d)| *d as i64).sum();
                let at_inf = num.degree_i() - den_deg;
                if at_inf > 0 {
                    out.push((Place::Infinity, at_inf as u32));
                }
                out
            }
            FunctionElem::Hyperelliptic { a, b } => {
                let order = hyperelliptic_pole_order(curve.genus(), a, b);
                if order > 0 {
                    vec![(Place::Infinity, order)]
                } else {
                    vec![]
                }
            }
        }
    }
}

fn max_poles(a: &[(Elem, u32)], b: &[(Elem, u32)]) -> Vec<(Elem, u32)> {
    let mut out: Vec<(Elem, u32)> = a.to_vec();
    for &(p, d) in b {
        match out.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e = (*e).max(d),
            None => out.push((p, d)),
        }
    }
    out.sort_by_key(|(p, _)| *p);
    out
}

/// `-v_inf(a + y b) = max(2 deg a, 2g + 1 + 2 deg b)`.
pub(crate) fn hyperelliptic_pole_order(genus: u32, a: &Poly, b: &Poly) -> u32 {
    let pa = a.degree().map_or(0, |d| 2 * d as u32);
    let pb = b.degree().map_or(0, |d| 2 * genus + 1 + 2 * d as u32);
    pa.max(pb)
}

/// Basis `{1, f_1, ..., f_m}` of `H^0(C, O(E))`, ordered by place: powers of the
/// coordinate for the part at infinity first, then `(t - p)^{-j}` for each
/// affine support point. On the hyperelliptic model the basis is ordered by pole
/// order at infinity.
pub fn rr_basis(curve: &CurveModel, divisor: &DivisorSpec) -> Result<Vec<FunctionElem>> {
    let field = curve.field();
    match curve.kind() {
        CurveKind::ProjectiveLine => {
            let mut out = vec![FunctionElem::polynomial(Poly::one(field))];
            let m_inf = divisor.mult(Place::Infinity) as usize;
            for j in 1..=m_inf {
                out.push(FunctionElem::polynomial(Poly::monomial(field, Elem::ONE, j)));
            }
            for (p, m) in divisor.affine_points() {
                for j in 1..=m {
                    out.push(FunctionElem::rational(Poly::one(field), vec![(p, j)]));
                }
            }
            Ok(out)
        }
        CurveKind::Hyperelliptic => {
            if divisor.affine_points().next().is_some() {
                return Err(Error::UnsupportedDivisor(
                    "hyperelliptic divisors must be supported at infinity".into(),
                ));
            }
            let m = divisor.mult(Place::Infinity);
            let odd = 2 * curve.genus() + 1;
            let mut out = Vec::new();
            for order in 0..=m {
                if order % 2 == 0 {
                    let i = (order / 2) as usize;
                    out.push(FunctionElem::hyperelliptic(
                        Poly::monomial(field, Elem::ONE, i),
                        Poly::zero(field),
                    ));
                } else if order >= odd {
                    let j = ((order - odd) / 2) as usize;
                    out.push(FunctionElem::hyperelliptic(
                        Poly::zero(field),
                        Poly::monomial(field, Elem::ONE, j),
                    ));
                }
            }
            Ok(out)
        }
    }
}

/// Pole degree `k = deg div(h)_-` with the per-place orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleDegree {
    pub k: u32,
    pub orders: Vec<(Place, u32)>,
}

pub fn pole_degree(curve: &CurveModel, divisor: &DivisorSpec, h: &FunctionElem) -> Result<PoleDegree> {
    check_model(curve, h)?;
    let orders = h.poles(curve);
    for (pl, _) in &orders {
        if !divisor.contains(*pl) {
            return Err(Error::PoleOutsideE);
        }
    }
    let k = orders.iter().map(|(_, d)| d).sum();
    Ok(PoleDegree { k, orders })
}

fn check_model(curve: &CurveModel, h: &FunctionElem) -> Result<()> {
    let ok = matches!(
        (curve.kind(), h),
        (CurveKind::ProjectiveLine, FunctionElem::Rational { .. })
            | (CurveKind::Hyperelliptic, FunctionElem::Hyperelliptic { .. })
    );
    if !ok {
        return Err(Error::InvalidSpec("function does not belong to this curve model".into()));
    }
    if h.field() != curve.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// How an irreducible `pi` of `F_q[x]` behaves in the quadratic function field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceClass {
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeDescriptor {
    /// Zero locus of a monic irreducible `pi(t)` on `P^1`.
    Finite(Poly),
    /// The place at infinity of `P^1` (only when it lies outside `supp E`).
    Infinity,
    /// One of the two primes over `pi`, labelled by the residue of the local
    /// root of `y^2 = f` it corresponds to.
    Split { pi: Poly, root: Poly },
    Inert { pi: Poly },
    Ramified { pi: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeDivisor {
    pub descriptor: PrimeDescriptor,
    pub degree: u32,
}

impl Ord for PrimeDivisor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.descriptor.cmp(&other.descriptor))
    }
}

impl PartialOrd for PrimeDivisor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PrimeDivisor {
    pub fn describe(&self, var: &str) -> String {
        match &self.descriptor {
            PrimeDescriptor::Finite(pi) => format!("({})", pi.display(var)),
            PrimeDescriptor::Infinity => "inf".into(),
            PrimeDescriptor::Split { pi, root } => {
                format!("({}, y - ({}))", pi.display(var), root.display(var))
            }
            PrimeDescriptor::Inert { pi } => format!("({}) inert", pi.display(var)),
            PrimeDescriptor::Ramified { pi } => format!("({}, y) ramified", pi.display(var)),
        }
    }
}

/// Prime divisors of `h` in the coordinate ring of `C \ supp E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementFactorization {
    /// Sorted by degree, then descriptor.
    pub primes: Vec<(PrimeDivisor, u32)>,
    /// Zeros of `h` found at support points of `E` (P^1 only). These are not
    /// primes of the coordinate ring; interval elements never have any.
    pub anomalies: Vec<(Place, u32)>,
}

impl ElementFactorization {
    /// `sum deg * mult` over the primes.
    pub fn zero_degree(&self) -> u32 {
        self.primes.iter().map(|(p, m)| p.degree * m).sum()
    }
}

pub fn factor_element(curve: &CurveModel, divisor: &DivisorSpec, h: &FunctionElem) -> Result<ElementFactorization> {
    factor_element_with(curve, divisor, h, &mut ChaCha8Rng::seed_from_u64(0))
}

pub fn factor_element_with<R: Rng + ?Sized>(
    curve: &CurveModel,
    divisor: &DivisorSpec,
    h: &FunctionElem,
    rng: &mut R,
) -> Result<ElementFactorization> {
    if h.is_zero() {
        return Err(Error::ZeroElement);
    }
    pole_degree(curve, divisor, h)?;
    let mut primes = Vec::new();
    let mut anomalies = Vec::new();
    match h {
        FunctionElem::Rational { num, poles } => {
            if !num.is_constant() {
                for (pi, m) in poly::factor_with(num, rng)?.factors {
                    let deg = pi.degree().expect("nonconstant") as u32;
                    if deg == 1 {
                        let root = curve.field().neg(pi.coeff(0));
                        if divisor.contains(Place::Point(root)) {
                            anomalies.push((Place::Point(root), m));
                            continue;
                        }
                    }
                    primes.push((
                        PrimeDivisor {
                            descriptor: PrimeDescriptor::Finite(pi),
                            degree: deg,
                        },
                        m,
                    ));
                }
            }
            if !divisor.contains(Place::Infinity) {
                let den_deg: i64 = poles.iter().map(|(_, d)| *d as i64).sum();
                let zero_order = den_deg - num.degree_i();
                if zero_order > 0 {
                    primes.push((
                        PrimeDivisor {
                            descriptor: PrimeDescriptor::Infinity,
                            degree: 1,
                        },
                        zero_order as u32,
                    ));
                }
            }
        }
        FunctionElem::Hyperelliptic { a, b } => {
            hyperelliptic::factor_hyperelliptic(curve, a, b, rng, &mut primes)?;
        }
    }
    primes.sort();
    Ok(ElementFactorization { primes, anomalies })
}

/// Factorization type of `h`: the partition of prime degrees, or
/// `NonSeparable` if some prime occurs with multiplicity at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorizationType {
    Separable(Partition),
    NonSeparable,
}

pub fn factorization_type(curve: &CurveModel, divisor: &DivisorSpec, h: &FunctionElem) -> Result<FactorizationType> {
    factorization_type_with(curve, divisor, h, &mut ChaCha8Rng::seed_from_u64(0))
}

/// As [`factorization_type`]. When the numerator (P^1) or norm (hyperelliptic)
/// is squarefree every prime has multiplicity 1 and the type is read off the
/// distinct-degree splitting; otherwise the full prime factorization is used.
pub fn factorization_type_with<R: Rng + ?Sized>(
    curve: &CurveModel,
    divisor: &DivisorSpec,
    h: &FunctionElem,
    rng: &mut R,
) -> Result<FactorizationType> {
    if h.is_zero() {
        return Err(Error::ZeroElement);
    }
    pole_degree(curve, divisor, h)?;
    let fast = match h {
        FunctionElem::Rational { num, poles } => {
            let clean = divisor.affine_points().all(|(p, _)| !num.eval(p).is_zero());
            let inf_zero = if divisor.contains(Place::Infinity) {
                0
            } else {
                let den_deg: i64 = poles.iter().map(|(_, d)| *d as i64).sum();
                (den_deg - num.degree_i()).max(0)
            };
            if clean && inf_zero <= 1 {
                fast_degrees(num).map(|mut parts| {
                    if inf_zero == 1 {
                        parts.push(1);
                    }
                    parts
                })
            } else {
                None
            }
        }
        FunctionElem::Hyperelliptic { .. } => fast_degrees(&norm(curve, h)?),
    };
    if let Some(parts) = fast {
        return Ok(FactorizationType::Separable(Partition::new(parts)));
    }
    let fac = factor_element_with(curve, divisor, h, rng)?;
    Ok(type_of(&fac))
}

fn fast_degrees(p: &Poly) -> Option<Vec<u32>> {
    if p.is_constant() {
        return Some(Vec::new());
    }
    let d = p.derivative();
    if d.is_zero() || !p.gcd(&d).expect("same field").is_one() {
        return None;
    }
    Some(poly::irreducible_degrees(p))
}

pub(crate) fn type_of(fac: &ElementFactorization) -> FactorizationType {
    if fac.primes.iter().any(|(_, m)| *m >= 2) {
        FactorizationType::NonSeparable
    } else {
        FactorizationType::Separable(Partition::new(fac.primes.iter().map(|(p, _)| p.degree).collect()))
    }
}

/// `true` iff `h` generates a prime ideal: exactly one prime, multiplicity 1.
pub fn is_prime_element(curve: &CurveModel, divisor: &DivisorSpec, h: &FunctionElem) -> Result<bool> {
    let fac = factor_element(curve, divisor, h)?;
    Ok(fac.primes.len() == 1 && fac.primes[0].1 == 1)
}
