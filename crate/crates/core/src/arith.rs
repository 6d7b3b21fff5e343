//! Integer primitives: primality, factorization, squarefree tests,
//! valuations and exact square roots over arbitrary-precision integers.
//!
//! Primality is deterministic below [`DETERMINISTIC_PRIMALITY_BOUND`]
//! (strong-pseudoprime tests to the first thirteen prime bases). Above that
//! bound the test runs 64 Miller-Rabin rounds with bases drawn from a
//! fixed-seed generator, so a composite slips through with probability
//! below 2^-128 and the answer is reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// 3.317 * 10^24: below this, bases 2..=41 decide primality exactly.
pub const DETERMINISTIC_PRIMALITY_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const SMALL_PRIMES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const PROBABILISTIC_ROUNDS: usize = 64;

/// Effort limits for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over all candidates up to this bound.
    pub trial_division_bound: u64,
    /// Total Pollard-Brent iterations allowed per composite cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_division_bound: 1 << 16,
            rho_iterations: 1 << 20,
        }
    }
}

/// A nonzero integer as sign times a product of prime powers, or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    sign: i8,
    factors: BTreeMap<BigUint, u32>,
}

impl FactoredInteger {
    pub fn zero() -> Self {
        FactoredInteger {
            sign: 0,
            factors: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        FactoredInteger {
            sign: 1,
            factors: BTreeMap::new(),
        }
    }

    /// Builds from a sign and prime powers. Primality of keys is checked.
    pub fn from_parts<I>(sign: i8, parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        if !(-1..=1).contains(&sign) {
            return Err(Error::InvalidPolynomial(format!("bad sign {sign}")));
        }
        let mut out = FactoredInteger {
            sign,
            factors: BTreeMap::new(),
        };
        for (p, e) in parts {
            if e == 0 {
                continue;
            }
            if !is_prime(&BigInt::from(p.clone())) {
                return Err(Error::NotPrime(p.to_string()));
            }
            *out.factors.entry(p).or_insert(0) += e;
        }
        if sign == 0 && !out.factors.is_empty() {
            return Err(Error::ZeroInput);
        }
        Ok(out)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.keys()
    }

    pub fn exponent(&self, q: &BigUint) -> u32 {
        self.factors.get(q).copied().unwrap_or(0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.values().all(|&e| e == 1)
    }

    /// Reconstructs the integer.
    pub fn value(&self) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, &e)| acc * p.pow(e));
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, mag)
    }

    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        if self.is_zero() || other.is_zero() {
            return FactoredInteger::zero();
        }
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(p.clone()).or_insert(0) += e;
        }
        FactoredInteger {
            sign: self.sign * other.sign,
            factors,
        }
    }

    pub fn pow(&self, k: u32) -> FactoredInteger {
        if k == 0 {
            return FactoredInteger::one();
        }
        FactoredInteger {
            sign: if self.sign < 0 && k % 2 == 0 { 1 } else { self.sign },
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    SMALL_PRIMES[..12]
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a))
}

pub fn is_prime_biguint(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let deterministic = n < &BigUint::from(DETERMINISTIC_PRIMALITY_BOUND);
    if !SMALL_PRIMES
        .iter()
        .all(|&a| strong_probable_prime_big(n, &BigUint::from(a)))
    {
        return false;
    }
    if deterministic {
        return true;
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0x6d6f_6e6f_7472_6931);
    let upper = n - 2u32;
    (0..PROBABILISTIC_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&BigUint::from(2u32), &upper);
        strong_probable_prime_big(n, &a)
    })
}

/// True iff |n| is prime.
pub fn is_prime(n: &BigInt) -> bool {
    is_prime_biguint(n.magnitude())
}

fn rho_u64(n: u64, c: u64, budget: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
    let mut g = 1u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let m = 128u64;
    let mut spent = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        spent += r;
        r *= 2;
        if spent > budget {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: u64, budget: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut ys = x.clone();
    let mut g = BigUint::one();
    let mut q = BigUint::one();
    let mut r = 1u64;
    let m = 128u64;
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        spent += r;
        r *= 2;
        if spent > budget {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Finds a nontrivial divisor of the composite `n`.
fn split_composite(n: &BigUint, budget: u64) -> Option<BigUint> {
    for k in 2..n.bits() as u32 {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if r.pow(k) == *n {
            return Some(r);
        }
    }
    let mut remaining = budget;
    for c in 1..=16u64 {
        if remaining == 0 {
            break;
        }
        let share = (budget / 4).max(1).min(remaining);
        let found = match n.to_u64() {
            Some(small) => rho_u64(small, c, share).map(BigUint::from),
            None => rho_big(n, c, share),
        };
        if found.is_some() {
            return found;
        }
        remaining -= share;
    }
    None
}

/// Factors a nonzero integer.
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut factors: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.magnitude().clone();

    let mut d = 2u64;
    while d <= budget.trial_division_bound {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, rem) = rest.div_rem(&dd);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if e > 0 {
            factors.insert(dd, e);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime_biguint(&m) {
            *factors.entry(m).or_insert(0) += 1;
            continue;
        }
        match split_composite(&m, budget.rho_iterations) {
            Some(div) => {
                let other = &m / &div;
                stack.push(div);
                stack.push(other);
            }
            None => return Err(Error::FactorizationBudgetExceeded(n.to_string())),
        }
    }
    Ok(FactoredInteger { sign, factors })
}

/// True iff no prime square divides |n|.
pub fn is_squarefree(n: &BigInt, budget: &FactorBudget) -> Result<bool> {
    Ok(factorize(n, budget)?.is_squarefree())
}

/// Largest e with q^e | n.
pub fn valuation(n: &BigInt, q: &BigInt) -> Result<u32> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(valuation_unchecked(n, q.magnitude()))
}

pub(crate) fn valuation_unchecked(n: &BigInt, q: &BigUint) -> u32 {
    let mut rest = n.magnitude().clone();
    let mut e = 0;
    loop {
        let (quot, rem) = rest.div_rem(q);
        if !rem.is_zero() {
            return e;
        }
        rest = quot;
        e += 1;
    }
}

pub(crate) fn valuation_u64(mut n: u64, q: u64) -> u32 {
    let mut e = 0;
    while n != 0 && n % q == 0 {
        n /= q;
        e += 1;
    }
    e
}

/// y >= 0 with y^2 = n, if n is a perfect square.
pub fn exact_square_root(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Smallest r >= 0 with r^k >= n, for n >= 0.
pub(crate) fn ceil_root(n: &BigUint, k: u32) -> BigUint {
    let r = n.nth_root(k);
    if r.pow(k) < *n {
        r + 1u32
    } else {
        r
    }
}
