use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{factor_mod_seeded, reduce_mod, IntPolynomial, ModPolynomial};

/// How residues mod q are lifted back to Z before forming (f - g h) / q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftConvention {
    /// Coefficients in [0, q).
    Nonnegative,
    /// Coefficients in (-q/2, q/2].
    Symmetric,
}

fn lift(p: &ModPolynomial, convention: LiftConvention) -> IntPolynomial {
    match convention {
        LiftConvention::Nonnegative => p.to_int(),
        LiftConvention::Symmetric => p.to_int_symmetric(),
    }
}

/// Dedekind's criterion: true when the prime q divides [Z_K : Z[theta]] for
/// a root theta of the monic irreducible polynomial f.
pub fn dedekind_divides_index(f: &IntPolynomial, q: &BigUint, cfg: &Config) -> Result<bool> {
    dedekind_divides_index_with(f, q, LiftConvention::Nonnegative, cfg.seed)
}

pub fn dedekind_divides_index_with(
    f: &IntPolynomial,
    q: &BigUint,
    convention: LiftConvention,
    seed: u64,
) -> Result<bool> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidPolynomial(
            "Dedekind's criterion needs a monic polynomial of positive degree".into(),
        ));
    }
    if !crate::arith::is_prime_biguint(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    let fbar = reduce_mod(f, q)?;
    let factors = factor_mod_seeded(&fbar, seed)?;
    let mut gbar = ModPolynomial::one(fbar.modulus());
    let mut hbar = ModPolynomial::one(fbar.modulus());
    for (p, e) in &factors {
        gbar = gbar.mul(p);
        for _ in 1..*e {
            hbar = hbar.mul(p);
        }
    }
    let g = lift(&gbar, convention);
    let h = lift(&hbar, convention);
    let diff = f - &(&g * &h);
    let t = diff
        .div_exact_scalar(&BigInt::from(q.clone()))
        .expect("g h agrees with f mod q");
    let tbar = reduce_mod(&t, q)?;
    let common = tbar.gcd(&gbar)?.gcd(&hbar)?;
    Ok(common.degree().is_some_and(|d| d > 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexcheck::{jks_index_free_assuming_irreducible, GeneralTrinomial};
    use crate::poly::is_irreducible_over_q;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn q(v: u32) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn textbook_examples() {
        let cfg = Config::default();
        // Z[sqrt 5] has index 2 in the ring of integers of Q(sqrt 5)
        assert!(dedekind_divides_index(&p(&[-5, 0, 1]), &q(2), &cfg).unwrap());
        assert!(!dedekind_divides_index(&p(&[1, 3, 1]), &q(5), &cfg).unwrap());
        assert!(!dedekind_divides_index(&p(&[-1, -1, 0, 1]), &q(23), &cfg).unwrap());
        // x^2 + 3 at 2: Z[sqrt -3] has index 2
        assert!(dedekind_divides_index(&p(&[3, 0, 1]), &q(2), &cfg).unwrap());
        // x^6 + 9x^3 + 1 at 3
        assert!(dedekind_divides_index(&p(&[1, 0, 0, 9, 0, 0, 1]), &q(3), &cfg).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = Config::default();
        assert!(dedekind_divides_index(&p(&[2, 3, 1]), &q(4), &cfg).is_err());
        assert!(dedekind_divides_index(&p(&[2, 3, 1]), &q(5), &cfg).is_ok());
        assert!(dedekind_divides_index(&p(&[1, 3, 2]), &q(5), &cfg).is_err());
        assert!(dedekind_divides_index(&p(&[7]), &q(5), &cfg).is_err());
    }

    #[test]
    fn verdict_does_not_depend_on_lift_or_seed() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..150 {
            let n = rng.gen_range(2..=8);
            let m = rng.gen_range(1..n);
            let tri = GeneralTrinomial::from_i64(n, m, rng.gen_range(-30..=30), rng.gen_range(-30..=30)).unwrap();
            let f = tri.polynomial();
            for prime in [2u32, 3, 5, 7] {
                let a = dedekind_divides_index_with(&f, &q(prime), LiftConvention::Nonnegative, 1).unwrap();
                let b = dedekind_divides_index_with(&f, &q(prime), LiftConvention::Symmetric, 99).unwrap();
                assert_eq!(a, b, "{f} at {prime}");
            }
        }
    }

    #[test]
    fn jks_agrees_with_dedekind_on_random_trinomials() {
        use rand::{Rng, SeedableRng};
        let cfg = Config::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 500 {
            let n = rng.gen_range(2..=12);
            let m = rng.gen_range(1..n);
            let a = rng.gen_range(-40..=40);
            let b = rng.gen_range(-40..=40);
            let tri = GeneralTrinomial::from_i64(n, m, a, b).unwrap();
            let f = tri.polynomial();
            let swan = tri.swan_discriminant();
            if swan.is_zero() || !is_irreducible_over_q(&f, &cfg.irreducibility).unwrap() {
                continue;
            }
            let disc = swan.factored(&cfg.factor).unwrap();
            for prime in disc.primes() {
                let jks = jks_index_free_assuming_irreducible(&tri, prime).unwrap();
                let ded = dedekind_divides_index(&f, prime, &cfg).unwrap();
                assert_eq!(jks.divides_index, ded, "{tri} at q = {prime}: {jks:?}");
            }
            checked += 1;
        }
    }
}
