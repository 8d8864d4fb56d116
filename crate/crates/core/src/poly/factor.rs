//! Squarefree decomposition, distinct-degree splitting and Cantor-Zassenhaus
//! equal-degree splitting over `F_q`, plus a Rabin irreducibility test that
//! shares none of the splitting code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::{prime_factors, Elem};

/// `unit * prod factor^mult`; factors monic, irreducible, pairwise distinct and
/// sorted by degree then coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, like: &Poly) -> Poly {
        let field = like.field();
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit), |acc, (f, m)| &acc * &f.pow(*m as u64))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

fn nonzero(h: &Poly) -> Result<()> {
    if h.is_zero() {
        Err(Error::ZeroPolynomial)
    } else {
        Ok(())
    }
}

/// Coefficient-wise `p`-th root of a polynomial whose derivative vanishes.
fn pth_root(h: &Poly) -> Poly {
    let f = h.field();
    let p = f.p() as usize;
    // a^(p^(e-1)) is the inverse of Frobenius on F_{p^e}
    let exp = (f.p() as u64).pow(f.e() - 1);
    let coeffs = h
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| f.pow(c, exp))
        .collect();
    Poly::from_coeffs(f, coeffs)
}

/// Monic squarefree parts `(s_i, i)` with `monic(h) = prod s_i^i`, each `s_i`
/// squarefree, pairwise coprime, nonconstant, sorted by multiplicity.
pub fn squarefree_decomposition(h: &Poly) -> Result<Vec<(Poly, u32)>> {
    nonzero(h)?;
    let mut out = Vec::new();
    sff(&h.monic(), 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn sff(h: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if h.is_constant() {
        return;
    }
    let p = h.field().p();
    let d = h.derivative();
    if d.is_zero() {
        sff(&pth_root(h), scale * p, out);
        return;
    }
    let mut c = h.gcd(&d).expect("same field");
    let mut w = h.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same field");
        let part = w.div_exact(&y);
        if !part.is_constant() {
            out.push((part, i * scale));
        }
        i += 1;
        c = c.div_exact(&y);
        w = y;
    }
    if !c.is_one() {
        sff(&pth_root(&c), scale * p, out);
    }
}

/// The radical of `h` (monic) and whether `h` is already squarefree.
pub fn squarefree_part(h: &Poly) -> Result<(Poly, bool)> {
    let parts = squarefree_decomposition(h)?;
    let squarefree = parts.iter().all(|(_, m)| *m == 1);
    let radical = parts
        .iter()
        .fold(Poly::one(h.field()), |acc, (s, _)| &acc * s);
    Ok((radical, squarefree))
}

/// Distinct-degree splitting of a monic squarefree `h`: pairs `(d, g_d)` where
/// `g_d` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(h: &Poly) -> Vec<(u32, Poly)> {
    let field = h.field();
    let q = field.q() as u64;
    let t = Poly::t(field);
    let mut rest = h.monic();
    let mut w = t.clone();
    let mut out = Vec::new();
    let mut d = 0u32;
    while rest.degree().unwrap_or(0) >= 2 * (d as usize + 1) {
        d += 1;
        w = w.pow_mod(q, &rest);
        let g = (&w - &t).gcd(&rest).expect("same field");
        if !g.is_one() {
            rest = rest.div_exact(&g);
            w = w.rem(&rest).expect("nonzero modulus");
            out.push((d, g));
        }
    }
    if let Some(n) = rest.degree().filter(|&n| n > 0) {
        out.push((n as u32, rest));
    }
    out
}

/// Multiset of irreducible factor degrees of a squarefree `h`, descending.
pub fn irreducible_degrees(h: &Poly) -> Vec<u32> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(h) {
        let count = g.degree().expect("nonconstant") as u32 / d;
        out.extend(std::iter::repeat_n(d, count as usize));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn random_below<R: Rng + ?Sized>(like: &Poly, n: usize, rng: &mut R) -> Poly {
    let field = like.field();
    Poly::from_coeffs(field, (0..n).map(|_| field.random(rng)).collect())
}

/// Splitting map whose gcd with `g` separates factors of degree `d`.
fn splitting_element(a: &Poly, g: &Poly, d: u32) -> Poly {
    let field = g.field();
    let q = field.q() as u64;
    if field.p() == 2 {
        // absolute trace to F_2 over F_{q^d}
        let mut acc = a.rem(g).expect("nonzero modulus");
        let mut cur = acc.clone();
        for _ in 1..(field.e() * d) {
            cur = cur.mul_mod(&cur, g);
            acc = &acc + &cur;
        }
        acc
    } else {
        // a^((q^d - 1)/2) = (prod_{i<d} a^(q^i))^((q - 1)/2)
        let mut conj = a.rem(g).expect("nonzero modulus");
        let mut norm = conj.clone();
        for _ in 1..d {
            conj = conj.pow_mod(q, g);
            norm = norm.mul_mod(&conj, g);
        }
        let s = norm.pow_mod((q - 1) / 2, g);
        &s - &Poly::one(field)
    }
}

fn equal_degree<R: Rng + ?Sized>(g: &Poly, d: u32, rng: &mut R, out: &mut Vec<Poly>) {
    let n = g.degree().expect("nonzero") as u32;
    if n == d {
        out.push(g.clone());
        return;
    }
    loop {
        let a = random_below(g, n as usize, rng);
        if a.is_constant() {
            continue;
        }
        let b = splitting_element(&a, g, d);
        let h = b.gcd(g).expect("same field");
        let dh = h.degree().unwrap_or(0) as u32;
        if dh > 0 && dh < n {
            let other = g.div_exact(&h);
            equal_degree(&h, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization with a fixed internal seed.
pub fn factor(h: &Poly) -> Result<Factorization> {
    factor_with(h, &mut ChaCha8Rng::seed_from_u64(0))
}

/// Complete factorization: squarefree decomposition, distinct-degree, then
/// randomized equal-degree splitting driven by `rng`.
pub fn factor_with<R: Rng + ?Sized>(h: &Poly, rng: &mut R) -> Result<Factorization> {
    nonzero(h)?;
    let unit = h.lead();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(h)? {
        for (d, g) in distinct_degree(&part) {
            let mut irr = Vec::new();
            equal_degree(&g, d, rng, &mut irr);
            factors.extend(irr.into_iter().map(|f| (f.monic(), mult)));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Rabin's test: `t^(q^n) = t mod h` and `gcd(t^(q^(n/r)) - t, h) = 1` for each
/// prime `r | n`.
pub fn is_irreducible(h: &Poly) -> Result<bool> {
    nonzero(h)?;
    let n = match h.degree() {
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
        None => unreachable!(),
    };
    if n == 1 {
        return Ok(true);
    }
    let field = h.field();
    let h = h.monic();
    let q = field.q() as u64;
    let t = Poly::t(field);
    // frob[i] = t^(q^i) mod h
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(t.rem(&h)?);
    for i in 1..=n {
        let next = frob[i - 1].pow_mod(q, &h);
        frob.push(next);
    }
    if frob[n] != frob[0] {
        return Ok(false);
    }
    for r in prime_factors(n as u64) {
        let w = &frob[n / r as usize] - &t;
        if !w.gcd(&h)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}
