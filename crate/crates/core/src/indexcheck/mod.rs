//! Deciding whether a prime divides the index [Z_K : Z[theta]] of a monic
//! trinomial x^n + A x^m + B, by two independent routes: the
//! Jakhar-Khanduja-Sangwan trinomial criterion ([`jks_index_free`]) and
//! Dedekind's criterion ([`dedekind_divides_index`]).

mod dedekind;
mod jks;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{factorize, FactorBudget, FactoredInteger};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{is_irreducible_over_q, IntPolynomial};

pub use dedekind::{dedekind_divides_index, dedekind_divides_index_with, LiftConvention};
pub use jks::{
    h2_exact, h2_mod, jks_context, jks_index_free, jks_index_free_assuming_irreducible,
    JksContext,
};

/// x^n + a x^m + b with n > m >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralTrinomial {
    n: usize,
    m: usize,
    a: BigInt,
    b: BigInt,
}

impl GeneralTrinomial {
    pub fn new(n: usize, m: usize, a: BigInt, b: BigInt) -> Result<Self> {
        if m == 0 || n <= m {
            return Err(Error::InvalidTrinomial(format!(
                "need n > m >= 1, got n = {n}, m = {m}"
            )));
        }
        Ok(GeneralTrinomial { n, m, a, b })
    }

    pub fn from_i64(n: usize, m: usize, a: i64, b: i64) -> Result<Self> {
        Self::new(n, m, BigInt::from(a), BigInt::from(b))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn polynomial(&self) -> IntPolynomial {
        IntPolynomial::trinomial(self.n, self.m, &self.a, &self.b)
    }

    pub fn swan_discriminant(&self) -> SwanDiscriminant {
        SwanDiscriminant::of(self)
    }
}

impl fmt::Display for GeneralTrinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polynomial())
    }
}

/// Swan's closed form, kept in pieces:
/// sign * b^(m-1) * bracket^gcd(n,m), where
/// bracket = n^n1 b^(n1-m1) - (-1)^n1 (n-m)^(n1-m1) m^m1 a^n1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwanDiscriminant {
    pub sign: i8,
    pub b: BigInt,
    pub b_exponent: u32,
    pub bracket: BigInt,
    pub bracket_exponent: u32,
}

impl SwanDiscriminant {
    fn of(t: &GeneralTrinomial) -> Self {
        let (n, m) = (t.n, t.m);
        let d0 = n.gcd(&m);
        let (n1, m1) = ((n / d0) as u32, (m / d0) as u32);
        let first = BigInt::from(n).pow(n1) * t.b.pow(n1 - m1);
        let mut second =
            BigInt::from(n - m).pow(n1 - m1) * BigInt::from(m).pow(m1) * t.a.pow(n1);
        if n1 % 2 == 1 {
            second = -second;
        }
        let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
        SwanDiscriminant {
            sign,
            b: t.b.clone(),
            b_exponent: (m - 1) as u32,
            bracket: first - second,
            bracket_exponent: d0 as u32,
        }
    }

    pub fn value(&self) -> BigInt {
        let v = self.b.pow(self.b_exponent) * self.bracket.pow(self.bracket_exponent);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        (self.b_exponent > 0 && self.b.is_zero()) || self.bracket.is_zero()
    }

    pub fn divisible_by(&self, q: &BigUint) -> bool {
        let q = BigInt::from(q.clone());
        (self.b_exponent > 0 && self.b.is_multiple_of(&q)) || self.bracket.is_multiple_of(&q)
    }

    pub fn factored(&self, budget: &FactorBudget) -> Result<FactoredInteger> {
        if self.is_zero() {
            return Ok(FactoredInteger::zero());
        }
        let b_part = if self.b_exponent == 0 {
            FactoredInteger::one()
        } else {
            factorize(&self.b, budget)?.pow(self.b_exponent)
        };
        let bracket_part = factorize(&self.bracket, budget)?.pow(self.bracket_exponent);
        let sign_part = if self.sign < 0 {
            factorize(&BigInt::from(-1), budget)?
        } else {
            FactoredInteger::one()
        };
        Ok(b_part.mul(&bracket_part).mul(&sign_part))
    }
}

/// Exact discriminant of x^n + A x^m + B from Swan's formula.
pub fn swan_general_discriminant(t: &GeneralTrinomial) -> BigInt {
    t.swan_discriminant().value()
}

/// Which criterion produced a verdict. The JKS branches are named by how the
/// prime q meets the trinomial x^n + A x^m + B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// q | A and q | B.
    QDividesAAndB,
    /// q | A, q does not divide B.
    QDividesAOnly,
    /// q | B, q does not divide A.
    QDividesBOnly,
    /// q divides neither A nor B, q | m.
    QDividesM,
    /// q divides none of A, B, m.
    QCoprimeToAbm,
    Dedekind,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::QDividesAAndB => "q | A, q | B",
            Condition::QDividesAOnly => "q | A only",
            Condition::QDividesBOnly => "q | B only",
            Condition::QDividesM => "q | m, q does not divide AB",
            Condition::QCoprimeToAbm => "q coprime to ABm",
            Condition::Dedekind => "Dedekind",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexVerdict {
    #[serde(serialize_with = "crate::report::serialize_display")]
    pub q: BigUint,
    pub divides_index: bool,
    pub condition_used: Condition,
    pub detail: String,
}

/// Outcome of the prime-square scan over the discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonogenicityReport {
    pub monogenic: bool,
    pub discriminant: FactoredInteger,
    /// One verdict per prime q with q^2 | disc, ascending in q.
    pub trace: Vec<IndexVerdict>,
}

/// Decides monogenicity of an irreducible trinomial: every prime whose square
/// divides the discriminant must be index-free under the JKS criterion.
pub fn trinomial_is_monogenic(t: &GeneralTrinomial, cfg: &Config) -> Result<MonogenicityReport> {
    if !is_irreducible_over_q(&t.polynomial(), &cfg.irreducibility)? {
        return Err(Error::Reducible);
    }
    trinomial_is_monogenic_assuming_irreducible(t, &cfg.factor)
}

/// As [`trinomial_is_monogenic`] for a caller that has already established
/// irreducibility by other means.
pub fn trinomial_is_monogenic_assuming_irreducible(
    t: &GeneralTrinomial,
    budget: &FactorBudget,
) -> Result<MonogenicityReport> {
    let disc = t.swan_discriminant().factored(budget)?;
    if disc.is_zero() {
        return Err(Error::Reducible);
    }
    let mut trace = Vec::new();
    for (q, &e) in disc.factors() {
        if e < 2 {
            continue;
        }
        trace.push(jks_index_free_assuming_irreducible(t, q)?);
    }
    let monogenic = trace.iter().all(|v| !v.divides_index);
    Ok(MonogenicityReport {
        monogenic,
        discriminant: disc,
        trace,
    })
}

pub(crate) fn is_unit(b: &BigInt) -> bool {
    b.abs().is_one()
}
