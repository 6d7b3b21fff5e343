//! Exact irreducibility over Q for monic integer polynomials: modular
//! factorization at a few unramified primes, Hensel lifting past a
//! Mignotte-style coefficient bound, then recombination of lifted factors.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::finite_field::factor_mod;
use super::modular::ModPolynomial;
use super::{discriminant, reduce_mod, IntPolynomial};
use crate::arith::is_prime_u64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrreducibilityConfig {
    /// Inputs above this degree are rejected with `DegreeBudgetExceeded`.
    pub degree_bound: usize,
    /// How many unramified primes to factor before picking one to lift.
    pub primes_to_try: usize,
    /// Seed for the equal-degree splitting.
    pub seed: u64,
}

impl Default for IrreducibilityConfig {
    fn default() -> Self {
        IrreducibilityConfig {
            degree_bound: 40,
            primes_to_try: 8,
            seed: 0x5eed,
        }
    }
}

fn subset_sums(degrees: &[usize], n: usize) -> BTreeSet<usize> {
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reachable[s - d] {
                reachable[s] = true;
            }
        }
    }
    (0..=n).filter(|&s| reachable[s]).collect()
}

/// Lifts f = g0 * h0 (mod l), g0 and h0 monic and coprime, to a factorization mod l^k.
fn lift_pair(
    f: &IntPolynomial,
    g0: &ModPolynomial,
    h0: &ModPolynomial,
    k: u32,
) -> (IntPolynomial, IntPolynomial) {
    let l = g0.modulus();
    let (one, s, t) = g0.extended_gcd(h0).expect("same modulus");
    assert!(one.is_one(), "Hensel lifting needs coprime factors");
    let lb = BigUint::from(l);
    let li = BigInt::from(l);
    let mut g = g0.to_int();
    let mut h = h0.to_int();
    let mut power = li.clone();
    for _ in 1..k {
        let diff = f - &(&g * &h);
        let e = diff
            .div_exact_scalar(&power)
            .expect("factorization holds modulo the current power");
        let ebar = reduce_mod(&e, &lb).expect("small modulus");
        let dg = ebar.mul(&t).rem(g0);
        let dh = ebar.mul(&s).rem(h0);
        g = &g + &dg.to_int().scale(&power);
        h = &h + &dh.to_int().scale(&power);
        power *= &li;
    }
    (g, h)
}

/// Lifts the factorization f = prod(factors) mod l to monic factors mod l^k,
/// coefficients in [0, l^k).
pub fn hensel_lift(f: &IntPolynomial, factors: &[ModPolynomial], k: u32) -> Vec<IntPolynomial> {
    assert!(!factors.is_empty());
    let l = factors[0].modulus();
    if factors.len() == 1 {
        let modulus = BigInt::from(l).pow(k);
        return vec![f.nonnegative_mod(&modulus)];
    }
    let g0 = &factors[0];
    let h0 = factors[1..]
        .iter()
        .fold(ModPolynomial::one(l), |acc, x| acc.mul(x));
    let (g, h) = lift_pair(f, g0, &h0, k);
    let mut out = vec![g];
    out.extend(hensel_lift(&h, &factors[1..], k));
    out
}

struct Candidate {
    prime: u128,
    factors: Vec<ModPolynomial>,
}

/// Decides irreducibility over Q of a monic polynomial.
pub fn is_irreducible_over_q(f: &IntPolynomial, cfg: &IrreducibilityConfig) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => {
            return Err(Error::InvalidPolynomial(
                "irreducibility needs degree at least 1".into(),
            ))
        }
        Some(n) => n,
    };
    if !f.is_monic() {
        return Err(Error::InvalidPolynomial(format!("{f} is not monic")));
    }
    if n == 1 {
        return Ok(true);
    }
    if n > cfg.degree_bound {
        return Err(Error::DegreeBudgetExceeded {
            degree: n,
            bound: cfg.degree_bound,
        });
    }
    let constant = f.coeff(0);
    if constant.is_zero() {
        return Ok(false);
    }
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Ok(false);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut allowed: BTreeSet<usize> = (0..=n).collect();
    let mut best: Option<Candidate> = None;
    let mut tried = 0;
    let mut l = 3u64;
    while tried < cfg.primes_to_try {
        if is_prime_u64(l) && !(&disc % l).is_zero() {
            tried += 1;
            let fbar = reduce_mod(f, &BigUint::from(l))?;
            let factors: Vec<ModPolynomial> = factor_mod(&fbar, &mut rng)?
                .into_iter()
                .map(|(g, e)| {
                    debug_assert_eq!(e, 1);
                    g
                })
                .collect();
            if factors.len() == 1 {
                return Ok(true);
            }
            let degrees: Vec<usize> = factors.iter().map(|g| g.degree().unwrap()).collect();
            let sums = subset_sums(&degrees, n);
            allowed = allowed.intersection(&sums).copied().collect();
            if allowed.iter().all(|&d| d == 0 || d == n) {
                return Ok(true);
            }
            if best.as_ref().map_or(true, |b| factors.len() < b.factors.len()) {
                best = Some(Candidate {
                    prime: l as u128,
                    factors,
                });
            }
        }
        l += 2;
    }
    let best = best.expect("at least one prime was tried");

    // Any monic factor of degree d < n has coefficients bounded by 2^(n-1) ||f||_2.
    let bound = BigInt::from(f.norm2_ceil()) << (n - 1);
    let target = bound * 2u32;
    let lb = BigInt::from(best.prime);
    let mut k = 1u32;
    let mut modulus = lb.clone();
    while modulus <= target {
        modulus *= &lb;
        k += 1;
    }
    let lifted = hensel_lift(f, &best.factors, k);
    Ok(!has_true_factor(f, &lifted, &modulus, &allowed))
}

fn has_true_factor(
    f: &IntPolynomial,
    lifted: &[IntPolynomial],
    modulus: &BigInt,
    allowed: &BTreeSet<usize>,
) -> bool {
    let r = lifted.len();
    let n = f.degree().unwrap();
    let constant = f.coeff(0);
    let degrees: Vec<usize> = lifted.iter().map(|g| g.degree().unwrap()).collect();
    let mut chosen = Vec::new();
    for size in 1..=r / 2 {
        if try_subsets(
            f, lifted, &degrees, modulus, allowed, &constant, n, size, 0, &mut chosen,
        ) {
            return true;
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn try_subsets(
    f: &IntPolynomial,
    lifted: &[IntPolynomial],
    degrees: &[usize],
    modulus: &BigInt,
    allowed: &BTreeSet<usize>,
    constant: &BigInt,
    n: usize,
    remaining: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if remaining == 0 {
        let d: usize = chosen.iter().map(|&i| degrees[i]).sum();
        if d == 0 || d >= n || !allowed.contains(&d) {
            return false;
        }
        let c0 = chosen
            .iter()
            .fold(BigInt::one(), |acc, &i| (acc * lifted[i].coeff(0)).mod_floor(modulus));
        let c0 = symmetric(&c0, modulus);
        if c0.is_zero() || !(constant % &c0).is_zero() {
            return false;
        }
        let g = chosen
            .iter()
            .fold(IntPolynomial::one(), |acc, &i| (&acc * &lifted[i]).nonnegative_mod(modulus))
            .symmetric_mod(modulus);
        return f.div_rem_monic(&g).1.is_zero();
    }
    for i in start..lifted.len() {
        if lifted.len() - i < remaining {
            break;
        }
        chosen.push(i);
        let found = try_subsets(
            f,
            lifted,
            degrees,
            modulus,
            allowed,
            constant,
            n,
            remaining - 1,
            i + 1,
            chosen,
        );
        chosen.pop();
        if found {
            return true;
        }
    }
    false
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if r > (m >> 1u32) {
        r - m
    } else {
        r
    }
}
