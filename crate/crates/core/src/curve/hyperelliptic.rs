use num_bigint::BigUint;
use rand::Rng;

use super::{CurveModel, FunctionElem, PlaceClass, PrimeDescriptor, PrimeDivisor};
use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// `N(a + y b) = a^2 - f b^2`.
pub fn norm(curve: &CurveModel, h: &FunctionElem) -> Result<Poly> {
    let f = curve.require_fpoly()?;
    match h {
        FunctionElem::Hyperelliptic { a, b } => {
            if a.is_zero() && b.is_zero() {
                return Err(Error::ZeroElement);
            }
            Ok(&(a * a) - &(&(f * b) * b))
        }
        FunctionElem::Rational { .. } => Err(Error::InvalidSpec("norm of a P^1 function".into())),
    }
}

/// Size of the residue field `F_q[x]/(pi)`.
fn residue_size(pi: &Poly) -> BigUint {
    let q = BigUint::from(pi.field().q());
    num_traits::pow(q, pi.degree().expect("nonconstant"))
}

/// Ramified iff `pi | f`; otherwise split iff `f mod pi` passes the Euler criterion
/// in the residue field.
pub fn classify_place(curve: &CurveModel, pi: &Poly) -> Result<PlaceClass> {
    let f = curve.require_fpoly()?;
    if pi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !pi.is_monic() || pi.is_constant() || !poly::is_irreducible(pi)? {
        return Err(Error::NotIrreducible);
    }
    Ok(classify_unchecked(f, pi))
}

pub(crate) fn classify_unchecked(f: &Poly, pi: &Poly) -> PlaceClass {
    let c = f.rem(pi).expect("nonzero modulus");
    if c.is_zero() {
        return PlaceClass::Ramified;
    }
    let half = (residue_size(pi) - 1u32) >> 1;
    if c.pow_mod_big(&half, pi).is_one() {
        PlaceClass::Split
    } else {
        PlaceClass::Inert
    }
}

/// Tonelli-Shanks square root of a nonzero square `c` in `F_q[x]/(pi)`.
fn residue_sqrt(c: &Poly, pi: &Poly) -> Poly {
    let field = pi.field();
    let d = pi.degree().expect("nonconstant");
    let order = residue_size(pi) - 1u32;
    let half = &order >> 1;
    let s = order.trailing_zeros().expect("even group order in odd characteristic");
    let t = &order >> s;
    let one = Poly::one(field);
    let minus_one = -&one;
    // least non-residue in code order
    let q = field.q() as u64;
    let mut idx = 1u64;
    let z = loop {
        let mut rest = idx;
        let mut coeffs = Vec::with_capacity(d);
        for _ in 0..d {
            coeffs.push(field.elem((rest % q) as u32).expect("in range"));
            rest /= q;
        }
        let cand = Poly::from_coeffs(field, coeffs);
        if cand.pow_mod_big(&half, pi) == minus_one {
            break cand;
        }
        idx += 1;
    };
    let mut m = s;
    let mut cc = z.pow_mod_big(&t, pi);
    let mut x = c.pow_mod_big(&((&t + 1u32) >> 1), pi);
    let mut b = c.pow_mod_big(&t, pi);
    while !b.is_one() {
        let mut i = 0u64;
        let mut probe = b.clone();
        while !probe.is_one() {
            probe = probe.mul_mod(&probe, pi);
            i += 1;
        }
        let mut w = cc.clone();
        for _ in 0..(m - i - 1) {
            w = w.mul_mod(&w, pi);
        }
        x = x.mul_mod(&w, pi);
        cc = w.mul_mod(&w, pi);
        b = b.mul_mod(&cc, pi);
        m = i;
    }
    x
}

/// Root `r` of `r^2 = f mod pi^n` with `deg r < n deg pi`, for a split `pi`.
///
/// Between `r` and `-r` the one whose first nonzero coefficient (low degree
/// first) has the smaller code is returned.
pub fn hensel_sqrt(curve: &CurveModel, pi: &Poly, n: u32) -> Result<Poly> {
    if n == 0 {
        return Err(Error::InvalidSpec("precision must be >= 1".into()));
    }
    if classify_place(curve, pi)? != PlaceClass::Split {
        return Err(Error::NotSplit);
    }
    Ok(hensel_unchecked(curve.fpoly().expect("hyperelliptic"), pi, n))
}

pub(crate) fn hensel_unchecked(f: &Poly, pi: &Poly, n: u32) -> Poly {
    let field = pi.field();
    let modulus = pi.pow(n as u64);
    let c = f.rem(pi).expect("nonzero modulus");
    let mut r = residue_sqrt(&c, pi);
    let two = Poly::constant(field, field.from_int(2));
    let target = f.rem(&modulus).expect("nonzero modulus");
    let mut precision = 1u32;
    while precision < n {
        // r <- r - (r^2 - f) / (2r)  (mod pi^n); correct digits double each step
        let err = &r.mul_mod(&r, &modulus) - &target;
        let denom = two.mul_mod(&r, &modulus);
        let inv = denom.inv_mod(&modulus).expect("2r is a unit at a split place");
        r = (&r - &err.mul_mod(&inv, &modulus)).rem(&modulus).expect("nonzero modulus");
        precision *= 2;
    }
    let neg = -&r;
    let first = r.coeffs().iter().zip(neg.coeffs()).find(|(a, b)| a != b);
    match first {
        Some((a, b)) if b.code() < a.code() => neg,
        _ => r,
    }
}

pub(super) fn factor_hyperelliptic<R: Rng + ?Sized>(
    curve: &CurveModel,
    a: &Poly,
    b: &Poly,
    rng: &mut R,
    out: &mut Vec<(PrimeDivisor, u32)>,
) -> Result<()> {
    let f = curve.require_fpoly()?;
    let h = FunctionElem::hyperelliptic(a.clone(), b.clone());
    let n = norm(curve, &h)?;
    if n.is_constant() {
        return Ok(());
    }
    for (pi, mult) in poly::factor_with(&n, rng)?.factors {
        let deg = pi.degree().expect("nonconstant") as u32;
        match classify_unchecked(f, &pi) {
            PlaceClass::Ramified => out.push((
                PrimeDivisor {
                    descriptor: PrimeDescriptor::Ramified { pi },
                    degree: deg,
                },
                mult,
            )),
            PlaceClass::Inert => {
                if mult % 2 == 1 {
                    return Err(Error::InternalParityError(mult));
                }
                out.push((
                    PrimeDivisor {
                        descriptor: PrimeDescriptor::Inert { pi },
                        degree: 2 * deg,
                    },
                    mult / 2,
                ));
            }
            PlaceClass::Split => {
                let r = hensel_unchecked(f, &pi, mult);
                let modulus = pi.pow(mult as u64);
                let local = (a + &b.mul_mod(&r, &modulus)).rem(&modulus)?;
                let v = if local.is_zero() {
                    mult
                } else {
                    local.valuation(&pi).min(mult)
                };
                let plus = r.rem(&pi)?;
                let minus = (-&r).rem(&pi)?;
                for (root, m) in [(plus, v), (minus, mult - v)] {
                    if m > 0 {
                        out.push((
                            PrimeDivisor {
                                descriptor: PrimeDescriptor::Split { pi: pi.clone(), root },
                                degree: deg,
                            },
                            m,
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::tests::elliptic_f5;
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norm_examples() {
        let c = elliptic_f5();
        let f = c.field().clone();
        let fp = c.fpoly().unwrap().clone();
        let y = FunctionElem::hyperelliptic(Poly::zero(&f), Poly::one(&f));
        assert_eq!(norm(&c, &y).unwrap(), -&fp);
        let x = FunctionElem::hyperelliptic(Poly::from_ints(&f, &[0, 1]), Poly::zero(&f));
        assert_eq!(norm(&c, &x).unwrap(), Poly::from_ints(&f, &[0, 0, 1]));
        let xy = FunctionElem::hyperelliptic(Poly::from_ints(&f, &[0, 1]), Poly::one(&f));
        assert_eq!(norm(&c, &xy).unwrap(), Poly::from_ints(&f, &[4, 0, 1, 4]));
        let zero = FunctionElem::hyperelliptic(Poly::zero(&f), Poly::zero(&f));
        assert_eq!(norm(&c, &zero).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn classify_examples() {
        let c = elliptic_f5();
        let f = c.field().clone();
        assert_eq!(classify_place(&c, &Poly::from_ints(&f, &[0, 1])).unwrap(), PlaceClass::Split);
        assert_eq!(classify_place(&c, &Poly::from_ints(&f, &[-1, 1])).unwrap(), PlaceClass::Inert);
        assert_eq!(classify_place(&c, &Poly::from_ints(&f, &[1, 1])).unwrap(), PlaceClass::Ramified);
        assert_eq!(
            classify_place(&c, &Poly::from_ints(&f, &[-1, 0, 1])).unwrap_err(),
            Error::NotIrreducible
        );
    }

    #[test]
    fn hensel_examples() {
        let c = elliptic_f5();
        let f = c.field().clone();
        let x = Poly::from_ints(&f, &[0, 1]);
        assert_eq!(hensel_sqrt(&c, &x, 1).unwrap(), Poly::from_ints(&f, &[1]));
        assert_eq!(hensel_sqrt(&c, &x, 4).unwrap(), Poly::from_ints(&f, &[1, 0, 0, 3]));
        assert_eq!(
            hensel_sqrt(&c, &Poly::from_ints(&f, &[-1, 1]), 2).unwrap_err(),
            Error::NotSplit
        );
    }

    #[test]
    fn hensel_randomized_over_several_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fields = [
            Field::prime(5).unwrap(),
            Field::prime(7).unwrap(),
            Field::new(3, 2, None).unwrap(),
            Field::new(5, 2, None).unwrap(),
        ];
        for field in fields {
            // a random squarefree odd-degree model
            let curve = loop {
                let deg = [3usize, 5][rng.gen_range(0..2)];
                let mut coeffs: Vec<_> = (0..deg).map(|_| field.random(&mut rng)).collect();
                coeffs.push(field.one());
                if let Ok(c) = CurveModel::hyperelliptic(Poly::from_coeffs(&field, coeffs)) {
                    break c;
                }
            };
            let fp = curve.fpoly().unwrap().clone();
            let mut tested = 0;
            while tested < 30 {
                let d = rng.gen_range(1..=3usize);
                let mut coeffs: Vec<_> = (0..d).map(|_| field.random(&mut rng)).collect();
                coeffs.push(field.one());
                let pi = Poly::from_coeffs(&field, coeffs);
                if !poly::is_irreducible(&pi).unwrap() || classify_place(&curve, &pi).unwrap() != PlaceClass::Split {
                    continue;
                }
                for n in 1..=6 {
                    let r = hensel_sqrt(&curve, &pi, n).unwrap();
                    let m = pi.pow(n as u64);
                    assert!((&r.mul_mod(&r, &m) - &fp).rem(&m).unwrap().is_zero());
                    assert!(r.degree_i() < (n as i64) * d as i64);
                }
                tested += 1;
            }
        }
    }
}
