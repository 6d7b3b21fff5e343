//! Factorization over prime fields: squarefree split, distinct-degree split,
//! then Cantor-Zassenhaus equal-degree splitting driven by a caller-supplied
//! random source.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modular::ModPolynomial;
use super::{reduce_mod, IntPolynomial};
use crate::error::{Error, Result};

fn pth_root(f: &ModPolynomial) -> ModPolynomial {
    let q = f.modulus() as usize;
    let coeffs = f.coeffs().iter().step_by(q).copied().collect();
    ModPolynomial::new(f.modulus(), coeffs)
}

/// Pairwise coprime squarefree monic pieces with multiplicities.
pub fn squarefree_decomposition(f: &ModPolynomial) -> Vec<(ModPolynomial, u32)> {
    let f = f.make_monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let q = f.modulus();
    let df = f.derivative();
    if df.is_zero() {
        // f is a polynomial in x^q
        for (g, e) in squarefree_decomposition(&pth_root(&f)) {
            out.push((g, e * q as u32));
        }
        return out;
    }
    let mut c = f.gcd(&df).expect("same modulus");
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same modulus");
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y);
        w = y;
    }
    if !c.is_one() {
        for (g, e) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, e * q as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
/// Returns (product, degree) pairs in increasing degree.
pub fn distinct_degree_factorization(f: &ModPolynomial) -> Vec<(ModPolynomial, usize)> {
    let m = f.modulus();
    let q = BigUint::from(m);
    let x = ModPolynomial::x(m);
    let mut rest = f.make_monic();
    let mut out = Vec::new();
    let mut h = x.clone();
    let mut d = 0usize;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &rest);
        let g = h.sub(&x).gcd(&rest).expect("same modulus");
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((rest, deg));
    }
    out
}

fn random_below<R: Rng + ?Sized>(f: &ModPolynomial, rng: &mut R) -> ModPolynomial {
    let m = f.modulus();
    let n = f.degree().unwrap_or(0);
    ModPolynomial::new(m, (0..n).map(|_| rng.gen_range(0..m)).collect())
}

fn equal_degree_split<R: Rng + ?Sized>(
    g: &ModPolynomial,
    d: usize,
    rng: &mut R,
    out: &mut Vec<ModPolynomial>,
) {
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(g.clone());
        return;
    }
    let m = g.modulus();
    let qd = BigUint::from(m).pow(d as u32);
    loop {
        let a = random_below(g, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if m == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(g);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (&qd - 1u32) >> 1u32;
            a.pow_mod(&e, g).sub(&ModPolynomial::one(m))
        };
        let h = candidate.gcd(g).expect("same modulus");
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            let other = g.div_exact(&h);
            equal_degree_split(&h, d, rng, out);
            equal_degree_split(&other, d, rng, out);
            return;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients). The leading unit is dropped.
pub fn factor_mod<R: Rng + ?Sized>(
    f: &ModPolynomial,
    rng: &mut R,
) -> Result<Vec<(ModPolynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::InvalidPolynomial("cannot factor the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (piece, e) in squarefree_decomposition(f) {
        for (product, d) in distinct_degree_factorization(&piece) {
            let mut irreducibles = Vec::new();
            equal_degree_split(&product, d, rng, &mut irreducibles);
            out.extend(irreducibles.into_iter().map(|g| (g, e)));
        }
    }
    out.sort_by(|(a, ea), (b, eb)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
            .then(ea.cmp(eb))
    });
    Ok(out)
}

/// [`factor_mod`] with a ChaCha8 generator seeded from `seed`.
pub fn factor_mod_seeded(f: &ModPolynomial, seed: u64) -> Result<Vec<(ModPolynomial, u32)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    factor_mod(f, &mut rng)
}

/// Degrees of the irreducible factors of f mod l (the Frobenius cycle type),
/// ascending. Fails when l divides the discriminant of the monic `f`.
pub fn degree_pattern(f: &IntPolynomial, l: &BigUint) -> Result<Vec<usize>> {
    let fbar = reduce_mod(f, l)?;
    if fbar.degree() != f.degree() {
        return Err(Error::RamifiedPrime(l.to_string()));
    }
    if !fbar.gcd(&fbar.derivative())?.is_one() {
        return Err(Error::RamifiedPrime(l.to_string()));
    }
    let mut degrees = Vec::new();
    for (product, d) in distinct_degree_factorization(&fbar) {
        let count = product.degree().unwrap_or(0) / d;
        degrees.extend(std::iter::repeat(d).take(count));
    }
    degrees.sort_unstable();
    Ok(degrees)
}
