//! Dense univariate polynomials over the integers and over prime fields.

mod finite_field;
mod irreducible;
mod modular;
mod resultant;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use finite_field::{
    degree_pattern, distinct_degree_factorization, factor_mod, factor_mod_seeded,
    squarefree_decomposition,
};
pub use irreducible::{hensel_lift, is_irreducible_over_q, IrreducibilityConfig};
pub use modular::{reduce_mod, ModPolynomial};
pub use resultant::{discriminant, resultant};

/// Polynomial with integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// x^n + a x^m + b.
    pub fn trinomial(n: usize, m: usize, a: &BigInt, b: &BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        coeffs[m] += a;
        coeffs[0] += b;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// f(-x).
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Exact division by a scalar; None when some coefficient is not divisible.
    pub fn div_exact_scalar(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    /// Division with remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (IntPolynomial::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (IntPolynomial::new(quot), IntPolynomial::new(rem))
    }

    /// lc(b)^(deg a - deg b + 1) * a mod b.
    pub fn pseudo_remainder(&self, divisor: &IntPolynomial) -> IntPolynomial {
        let db = divisor.degree().expect("pseudo-division by zero");
        let lc = divisor.leading_coefficient();
        let mut rem = self.coeffs.clone();
        let Some(da) = self.degree() else {
            return IntPolynomial::zero();
        };
        if da < db {
            return self.clone();
        }
        let mut steps = 0;
        for i in (db..=da).rev() {
            let c = std::mem::take(&mut rem[i]);
            for r in rem[..i].iter_mut() {
                *r *= &lc;
            }
            if !c.is_zero() {
                for (j, d) in divisor.coeffs[..db].iter().enumerate() {
                    rem[i - db + j] -= &c * d;
                }
            }
            steps += 1;
        }
        debug_assert_eq!(steps, da - db + 1);
        rem.truncate(db);
        IntPolynomial::new(rem)
    }

    /// Coefficients reduced into (-m/2, m/2].
    pub fn symmetric_mod(&self, m: &BigInt) -> IntPolynomial {
        let half: BigInt = m >> 1u32;
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    /// Coefficients reduced into [0, m).
    pub fn nonnegative_mod(&self, m: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Max absolute coefficient.
    pub fn height(&self) -> BigUint {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    /// Ceiling of the Euclidean norm of the coefficient vector.
    pub fn norm2_ceil(&self) -> BigUint {
        let sum: BigUint = self.coeffs.iter().map(|c| c.magnitude().pow(2)).sum();
        crate::arith::ceil_root(&sum, 2)
    }

    pub fn pow(&self, mut k: u32) -> IntPolynomial {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigInt,
    i: usize,
) -> fmt::Result {
    let negative = c.is_negative();
    let mag = c.abs();
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if negative { '-' } else { '+' })?;
    }
    let show_coeff = i == 0 || !mag.is_one();
    if show_coeff {
        write!(f, "{mag}")?;
    }
    match i {
        0 => Ok(()),
        1 => write!(f, "x"),
        _ => write!(f, "x^{i}"),
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_term(f, first, c, i)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn normalization_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[3, 0, 1]).is_monic());
    }

    #[test]
    fn trinomial_builder() {
        let f = IntPolynomial::trinomial(10, 5, &BigInt::from(3), &BigInt::from(1));
        assert_eq!(f.to_string(), "x^10 + 3x^5 + 1");
        let g = IntPolynomial::trinomial(6, 3, &BigInt::from(-4), &BigInt::from(-1));
        assert_eq!(g.to_string(), "x^6 - 4x^3 - 1");
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a + &b, p(&[0, 2]));
        assert_eq!(&a - &a, IntPolynomial::zero());
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[1, 1, 1]).derivative(), p(&[1, 2]));
        assert_eq!(p(&[1, 2, 3, 4]).reflect(), p(&[1, -2, 3, -4]));
    }

    #[test]
    fn division() {
        let f = p(&[-1, 0, 0, 1]);
        let (q, r) = f.div_rem_monic(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
        let (q, r) = p(&[5, 0, 1]).div_rem_monic(&p(&[1, 1]));
        assert_eq!(q, p(&[-1, 1]));
        assert_eq!(r, p(&[6]));
        // 2^(2-1+1) * (x^2 + 1) mod (2x + 1) = 4x^2 + 4 - (2x - 1)(2x + 1) = 5
        assert_eq!(p(&[1, 0, 1]).pseudo_remainder(&p(&[1, 2])), p(&[5]));
    }

    #[test]
    fn symmetric_reduction() {
        let m = BigInt::from(7);
        assert_eq!(p(&[6, 4, 3, -10]).symmetric_mod(&m), p(&[-1, -3, 3, -3]));
        assert_eq!(p(&[6, 4, 3, -10]).nonnegative_mod(&m), p(&[6, 4, 3, 4]));
    }
}
