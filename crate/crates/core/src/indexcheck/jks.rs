use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Condition, GeneralTrinomial, IndexVerdict};
use crate::arith::{is_prime_biguint, valuation_u64};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{is_irreducible_over_q, reduce_mod, IntPolynomial, ModPolynomial};

/// Auxiliary quantities of the JKS criterion at a prime q.
///
/// `a1` and `b1` are stored as residues mod q: the criterion only inspects
/// them modulo q, while their exact values involve powers like (-A)^(q^l).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JksContext {
    pub q: BigUint,
    pub d0: usize,
    pub m1: usize,
    pub n1: usize,
    /// v_q(n)
    pub j: u32,
    /// v_q(n - m)
    pub l: u32,
    pub a1: Option<BigInt>,
    pub a2: Option<BigInt>,
    pub b1: Option<BigInt>,
    pub b2: Option<BigInt>,
    /// min(v_q(n), v_q(m)), set when q | m
    pub r: Option<u32>,
    pub s: Option<usize>,
    pub s_prime: Option<usize>,
}

fn valuation_big(n: usize, q: &BigUint) -> u32 {
    match q.to_u64() {
        Some(q) => valuation_u64(n as u64, q),
        None => 0,
    }
}

/// (base + (-base)^(q^e)) / q reduced mod q, asserting the division is exact.
fn frobenius_quotient(base: &BigInt, q: &BigInt, e: u32) -> BigInt {
    let q2 = q * q;
    let exponent = q.magnitude().pow(e);
    let neg = (-base).mod_floor(&q2);
    let power = BigInt::from(neg.magnitude().modpow(&exponent, q2.magnitude()));
    let numerator = (base + power).mod_floor(&q2);
    let (quot, rem) = numerator.div_rem(q);
    assert!(rem.is_zero(), "({base} + (-{base})^({q}^{e})) is not divisible by {q}");
    quot.mod_floor(q)
}

pub fn jks_context(t: &GeneralTrinomial, q: &BigUint) -> JksContext {
    let (n, m) = (t.n(), t.m());
    let d0 = n.gcd(&m);
    let qi = BigInt::from(q.clone());
    let q_divides_a = t.a().is_multiple_of(&qi);
    let q_divides_b = t.b().is_multiple_of(&qi);
    let j = valuation_big(n, q);
    let l = valuation_big(n - m, q);
    let mut ctx = JksContext {
        q: q.clone(),
        d0,
        m1: m / d0,
        n1: n / d0,
        j,
        l,
        a1: None,
        a2: None,
        b1: None,
        b2: None,
        r: None,
        s: None,
        s_prime: None,
    };
    if q_divides_a {
        ctx.a2 = Some(t.a() / &qi);
    }
    if q_divides_b {
        ctx.b2 = Some(t.b() / &qi);
    }
    if q_divides_a && !q_divides_b && j >= 1 {
        ctx.b1 = Some(frobenius_quotient(t.b(), &qi, j));
    }
    if !q_divides_a && q_divides_b {
        ctx.a1 = Some(frobenius_quotient(t.a(), &qi, l));
    }
    let vm = valuation_big(m, q);
    if vm >= 1 {
        let r = vm.min(j);
        let qr = q.to_usize().expect("q divides m").pow(r);
        ctx.r = Some(r);
        ctx.s = Some(m / qr);
        ctx.s_prime = Some(n / qr);
    }
    ctx
}

/// H2 = (A x^(s q^r) + B + (-A x^s - B)^(q^r)) / q over Z, expanded exactly.
pub fn h2_exact(a: &BigInt, b: &BigInt, s: usize, r: u32, q: &BigUint) -> IntPolynomial {
    let qr = q.to_usize().expect("small prime").pow(r);
    let inner = &IntPolynomial::monomial(-a, s) + &IntPolynomial::constant(-b);
    let numerator = &(&IntPolynomial::monomial(a.clone(), s * qr) + &IntPolynomial::constant(b.clone()))
        + &inner.pow(qr as u32);
    numerator
        .div_exact_scalar(&BigInt::from(q.clone()))
        .expect("H2 numerator is divisible by q")
}

/// H2 reduced mod q, computed with arithmetic mod q^2.
pub fn h2_mod(a: &BigInt, b: &BigInt, s: usize, r: u32, q: u64) -> ModPolynomial {
    let qr = (q as usize).pow(r);
    let q2 = (q as u128) * (q as u128);
    let red = |x: &BigInt| x.mod_floor(&BigInt::from(q2)).to_u128().expect("reduced");
    let mulm = |x: u128, y: u128| (x * y) % q2;
    let neg_a = red(&-a);
    let neg_b = red(&-b);

    // binomial(qr, k) mod q^2 as unit * q^v
    let mut coeffs = vec![0u128; qr + 1];
    let mut unit = 1u128;
    let mut val = 0u32;
    let mut pow_a = 1u128;
    let mut pow_b = vec![1u128; qr + 1];
    for k in 1..=qr {
        pow_b[k] = mulm(pow_b[k - 1], neg_b);
    }
    for k in 0..=qr {
        if k > 0 {
            let (num_v, num_u) = split_q(qr - k + 1, q);
            let (den_v, den_u) = split_q(k, q);
            val = val + num_v - den_v;
            unit = mulm(mulm(unit, num_u % q2), inv_mod_q2(den_u % q2, q, q2));
            pow_a = mulm(pow_a, neg_a);
        }
        let binom = if val >= 2 {
            0
        } else {
            mulm(unit, (q as u128).pow(val))
        };
        coeffs[k] = mulm(mulm(binom, pow_a), pow_b[qr - k]);
    }
    coeffs[0] = (coeffs[0] + red(b)) % q2;
    coeffs[qr] = (coeffs[qr] + red(a)) % q2;

    let mut out = vec![0u128; s * qr + 1];
    for (k, c) in coeffs.into_iter().enumerate() {
        assert!(c % q as u128 == 0, "H2 numerator coefficient not divisible by {q}");
        out[s * k] = c / q as u128;
    }
    ModPolynomial::new(q as u128, out)
}

fn split_q(mut x: usize, q: u64) -> (u32, u128) {
    let q = q as usize;
    let mut v = 0;
    while x % q == 0 {
        x /= q;
        v += 1;
    }
    (v, x as u128)
}

fn inv_mod_q2(u: u128, q: u64, q2: u128) -> u128 {
    // (Z/q^2)^* has order q(q - 1)
    let order = (q as u128) * (q as u128 - 1);
    let mut exp = order - 1;
    let mut base = u % q2;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q2;
        }
        base = base * base % q2;
        exp >>= 1;
    }
    acc
}

fn divides(q: &BigInt, x: &BigInt) -> bool {
    x.is_multiple_of(q)
}

/// Decides whether the prime q (a divisor of the discriminant) divides the
/// index of the irreducible trinomial t.
pub fn jks_index_free(t: &GeneralTrinomial, q: &BigUint, cfg: &Config) -> Result<IndexVerdict> {
    if !is_irreducible_over_q(&t.polynomial(), &cfg.irreducibility)? {
        return Err(Error::Reducible);
    }
    jks_index_free_assuming_irreducible(t, q)
}

/// [`jks_index_free`] without the irreducibility check.
pub fn jks_index_free_assuming_irreducible(t: &GeneralTrinomial, q: &BigUint) -> Result<IndexVerdict> {
    if !is_prime_biguint(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    let swan = t.swan_discriminant();
    if swan.is_zero() {
        return Err(Error::Reducible);
    }
    if !swan.divisible_by(q) {
        return Err(Error::NotADiscriminantPrime(q.to_string()));
    }
    let ctx = jks_context(t, q);
    let qi = BigInt::from(q.clone());
    let (a, b) = (t.a(), t.b());
    let q_a = divides(&qi, a);
    let q_b = divides(&qi, b);
    let (n1, m1) = (ctx.n1 as u32, ctx.m1 as u32);

    let (condition, index_free, detail) = match (q_a, q_b) {
        (true, true) => {
            let ok = !divides(&(&qi * &qi), b);
            (Condition::QDividesAAndB, ok, format!("q^2 {} B", if ok { "does not divide" } else { "divides" }))
        }
        (true, false) => {
            if ctx.j == 0 {
                return Err(Error::EngineGap(q.to_string()));
            }
            let a2 = ctx.a2.clone().expect("q | A");
            let b1 = ctx.b1.clone().expect("q | A, q does not divide B, q | n");
            let first = divides(&qi, &a2) && !divides(&qi, &b1);
            let inner = (-b).pow(m1) * a2.pow(n1) - (-&b1).pow(n1);
            let second = !divides(&qi, &(&a2 * inner));
            (
                Condition::QDividesAOnly,
                first || second,
                format!("j = {}, a2 = {a2}, b1 = {b1} (mod q)", ctx.j),
            )
        }
        (false, true) => {
            let a1 = ctx.a1.clone().expect("q does not divide A, q | B");
            let b2 = ctx.b2.clone().expect("q | B");
            let first = divides(&qi, &a1) && !divides(&qi, &b2);
            let k = n1 - m1;
            let inner = (-a).pow(m1) * a1.pow(k) - (-&b2).pow(k);
            let second = !divides(&qi, &(&a1 * b2.pow((t.m() - 1) as u32) * inner));
            (
                Condition::QDividesBOnly,
                first || second,
                format!("l = {}, a1 = {a1} (mod q), b2 = {b2}", ctx.l),
            )
        }
        (false, false) if ctx.r.is_some() => {
            let r = ctx.r.unwrap();
            let s = ctx.s.unwrap();
            let s_prime = ctx.s_prime.unwrap();
            let q_small = q.to_u64().expect("q divides m");
            let h1 = reduce_mod(&IntPolynomial::trinomial(s_prime, s, a, b), q)?;
            let h2 = h2_mod(a, b, s, r, q_small);
            let g = h1.gcd(&h2)?;
            let ok = g.degree() == Some(0);
            (
                Condition::QDividesM,
                ok,
                format!(
                    "r = {r}, s = {s}, s' = {s_prime}; gcd(H1, H2) mod q has degree {}",
                    g.degree().map_or(-1, |d| d as i64)
                ),
            )
        }
        (false, false) => {
            let d = b.pow(n1 - m1) * BigInt::from(n1).pow(n1)
                - {
                    let v = a.pow(n1)
                        * BigInt::from(m1).pow(m1)
                        * (BigInt::from(m1) - BigInt::from(n1)).pow(n1 - m1);
                    if m1 % 2 == 1 {
                        -v
                    } else {
                        v
                    }
                };
            let ok = !divides(&(&qi * &qi), &d);
            (Condition::QCoprimeToAbm, ok, format!("D = {d}"))
        }
    };
    Ok(IndexVerdict {
        q: q.clone(),
        divides_index: !index_free,
        condition_used: condition,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, m: usize, a: i64, b: i64) -> GeneralTrinomial {
        GeneralTrinomial::from_i64(n, m, a, b).unwrap()
    }

    fn q(v: u32) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn family_p5_index_free_at_5() {
        let cfg = Config::default();
        for a in [3, -3] {
            let v = jks_index_free(&t(10, 5, a, 1), &q(5), &cfg).unwrap();
            assert_eq!(v.condition_used, Condition::QDividesM);
            assert!(!v.divides_index);
        }
        // H1 = (x -+ 4)^2 ... for a = 3 H1 = x^2 + 3x + 1 = (x + 4)^2 mod 5
        let h1 = reduce_mod(&IntPolynomial::from_i64s(&[1, 3, 1]), &q(5)).unwrap();
        assert_eq!(h1, ModPolynomial::from_i64s(5, &[4, 1]).mul(&ModPolynomial::from_i64s(5, &[4, 1])));
        // H2 = 2x(x^4 + 2x^3 + 3x^2 + x + 1) mod 5 for a = 3
        let h2 = h2_mod(&BigInt::from(3), &BigInt::from(1), 1, 1, 5);
        let expected = ModPolynomial::from_i64s(5, &[0, 2]).mul(&ModPolynomial::from_i64s(5, &[1, 1, 3, 2, 1]));
        assert_eq!(h2, expected);
        // and -2x(x^4 - 2x^3 + 3x^2 - x + 1) for a = -3
        let h2 = h2_mod(&BigInt::from(-3), &BigInt::from(1), 1, 1, 5);
        let expected = ModPolynomial::from_i64s(5, &[0, -2]).mul(&ModPolynomial::from_i64s(5, &[1, -1, 3, -2, 1]));
        assert_eq!(h2, expected);
    }

    #[test]
    fn p_equals_three_h2() {
        let cfg = Config::default();
        for a in [1i64, -1] {
            let v = jks_index_free(&t(6, 3, a, 1), &q(3), &cfg).unwrap();
            assert_eq!(v.condition_used, Condition::QDividesM);
            assert!(!v.divides_index);
            let h2 = h2_mod(&BigInt::from(a), &BigInt::from(1), 1, 1, 3);
            // -x(x +- 1) mod 3
            let expected = ModPolynomial::from_i64s(3, &[0, -a, -1]);
            assert_eq!(h2, expected);
            // H1 = (x +- 2)^2 mod 3
            let h1 = reduce_mod(&IntPolynomial::trinomial(2, 1, &BigInt::from(a), &BigInt::from(1)), &q(3)).unwrap();
            let lin = ModPolynomial::from_i64s(3, &[2 * a, 1]);
            assert_eq!(h1, lin.mul(&lin));
        }
    }

    #[test]
    fn quadratic_condition_v() {
        let v = jks_index_free(&t(2, 1, 3, 1), &q(5), &Config::default()).unwrap();
        assert_eq!(v.condition_used, Condition::QCoprimeToAbm);
        assert!(!v.divides_index);
    }

    #[test]
    fn error_paths() {
        let cfg = Config::default();
        assert_eq!(
            jks_index_free(&t(2, 1, 3, 1), &q(7), &cfg),
            Err(Error::NotADiscriminantPrime("7".into()))
        );
        assert_eq!(
            jks_index_free(&t(2, 1, 3, 1), &q(4), &cfg),
            Err(Error::NotPrime("4".into()))
        );
        assert_eq!(jks_index_free(&t(6, 3, 2, 1), &q(3), &cfg), Err(Error::Reducible));
    }

    #[test]
    fn h2_exact_matches_mod_route() {
        for (a, b, s, r, qq) in [(3i64, 1i64, 1usize, 1u32, 5u64), (7, -2, 2, 2, 2), (-5, 4, 1, 1, 7), (11, 13, 3, 2, 3), (2, 9, 1, 3, 2)] {
            let exact = h2_exact(&BigInt::from(a), &BigInt::from(b), s, r, &BigUint::from(qq));
            let reduced = reduce_mod(&exact, &BigUint::from(qq)).unwrap();
            assert_eq!(reduced, h2_mod(&BigInt::from(a), &BigInt::from(b), s, r, qq), "{a} {b} {s} {r} {qq}");
        }
    }

    #[test]
    fn context_integrality_and_shape() {
        // q | A, q does not divide B: b1 from (B + (-B)^(q^j)) / q
        let ctx = jks_context(&t(12, 4, 6, 5), &q(2));
        assert_eq!(ctx.j, 2);
        assert_eq!(ctx.a2, Some(BigInt::from(3)));
        // (5 + 5^4) / 2 = 315, odd
        assert_eq!(ctx.b1, Some(BigInt::from(315 % 2)));
        assert_eq!(ctx.r, Some(2));
        assert_eq!((ctx.s, ctx.s_prime), (Some(1), Some(3)));
        // r is capped by v_q(n): n = 6, m = 4 at q = 2
        let ctx = jks_context(&t(6, 4, 1, 1), &q(2));
        assert_eq!(ctx.r, Some(1));
        assert_eq!((ctx.s, ctx.s_prime), (Some(2), Some(3)));
        // q does not divide A, q | B, l = v_q(n - m)
        let ctx = jks_context(&t(9, 3, 2, 3), &q(3));
        assert_eq!(ctx.l, 1);
        // (2 + (-2)^3) / 3 = -2 = 1 mod 3
        assert_eq!(ctx.a1, Some(BigInt::from(1)));
        assert_eq!(ctx.b2, Some(BigInt::from(1)));
    }
}
