use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::IntPolynomial;
use crate::error::{Error, Result};

const MAX_MODULUS_BITS: u64 = 127;

/// Multiplication in Z/m for m < 2^127.
#[inline]
pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        (a * b) % m
    } else {
        let prod = BigUint::from(a) * BigUint::from(b);
        (prod % BigUint::from(m)).to_u128().expect("reduced below modulus")
    }
}

#[inline]
pub(crate) fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

pub(crate) fn pow_mod(mut base: u128, exp: &BigUint, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    for i in 0..exp.bits() {
        if exp.bit(i) {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
    }
    acc
}

pub(crate) fn inv_mod(a: u128, m: u128) -> u128 {
    assert!(a % m != 0, "inverse of zero");
    pow_mod(a, &(BigUint::from(m) - 2u32), m)
}

/// Polynomial over the prime field F_q, constant term first, coefficients in [0, q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPolynomial {
    modulus: u128,
    coeffs: Vec<u128>,
}

/// Coefficientwise reduction of `f` modulo the prime `q`.
pub fn reduce_mod(f: &IntPolynomial, q: &BigUint) -> Result<ModPolynomial> {
    if q.bits() > MAX_MODULUS_BITS {
        return Err(Error::ModulusTooLarge(q.to_string()));
    }
    let m = q.to_u128().expect("checked bit length");
    let qi = BigInt::from(q.clone());
    Ok(ModPolynomial::new(
        m,
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&qi).to_u128().expect("reduced"))
            .collect(),
    ))
}

impl ModPolynomial {
    pub fn new(modulus: u128, coeffs: Vec<u128>) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let mut coeffs: Vec<u128> = coeffs.into_iter().map(|c| c % modulus).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPolynomial { modulus, coeffs }
    }

    pub fn from_i64s(modulus: u128, coeffs: &[i64]) -> Self {
        let m = modulus as i128;
        Self::new(
            modulus,
            coeffs
                .iter()
                .map(|&c| (c as i128).rem_euclid(m) as u128)
                .collect(),
        )
    }

    pub fn zero(modulus: u128) -> Self {
        ModPolynomial {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: u128) -> Self {
        Self::new(modulus, vec![1])
    }

    /// The polynomial x.
    pub fn x(modulus: u128) -> Self {
        Self::new(modulus, vec![0, 1])
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> u128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check_modulus(&self, other: &ModPolynomial) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    /// Lift with coefficients in [0, q).
    pub fn to_int(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Lift with coefficients in (-q/2, q/2].
    pub fn to_int_symmetric(&self) -> IntPolynomial {
        let half = self.modulus / 2;
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > half {
                        -BigInt::from(self.modulus - c)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    pub fn make_monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&1) => self.clone(),
            Some(&lc) => self.scale(inv_mod(lc, self.modulus)),
        }
    }

    pub fn scale(&self, c: u128) -> Self {
        let m = self.modulus;
        Self::new(m, self.coeffs.iter().map(|&x| mul_mod(x, c, m)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            m,
            (0..n)
                .map(|i| add_mod(self.coeff(i), other.coeff(i), m))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            m,
            (0..n)
                .map(|i| sub_mod(self.coeff(i), other.coeff(i), m))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.modulus);
        }
        let m = self.modulus;
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        if m <= u32::MAX as u128 {
            // products of two residues fit comfortably; reduce lazily
            let limit = u128::MAX - m * m;
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    let slot = &mut out[i + j];
                    *slot += a * b;
                    if *slot > limit {
                        *slot %= m;
                    }
                }
            }
            for c in out.iter_mut() {
                *c %= m;
            }
        } else {
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    out[i + j] = add_mod(out[i + j], mul_mod(a, b, m), m);
                }
            }
        }
        Self::new(m, out)
    }

    pub fn coeff(&self, i: usize) -> u128 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn derivative(&self) -> Self {
        let m = self.modulus;
        Self::new(
            m,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, (i as u128) % m, m))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert_eq!(self.modulus, divisor.modulus);
        let m = self.modulus;
        let dd = divisor.degree().expect("division by zero polynomial");
        if self.coeffs.len() <= dd {
            return (Self::zero(m), self.clone());
        }
        let inv_lc = inv_mod(divisor.leading_coefficient(), m);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u128; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv_lc, m);
            rem[i + dd] = 0;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i + j] = sub_mod(rem[i + j], mul_mod(c, d, m), m);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(m, quot), Self::new(m, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Quotient of an exact division; panics when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_modulus(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// (g, s, t) with s*self + t*other = g monic.
    pub fn extended_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        self.check_modulus(other)?;
        let m = self.modulus;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(m), Self::zero(m));
        let (mut t0, mut t1) = (Self::zero(m), Self::one(m));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = inv_mod(r0.leading_coefficient(), m);
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// self^exp mod modulus_poly.
    pub fn pow_mod(&self, exp: &BigUint, modulus_poly: &Self) -> Self {
        let m = self.modulus;
        let mut acc = Self::one(m).rem(modulus_poly);
        let base = self.rem(modulus_poly);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus_poly);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus_poly);
            }
        }
        acc
    }

    pub fn evaluate(&self, x: u128) -> u128 {
        let m = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| add_mod(mul_mod(acc, x, m), c, m))
    }
}

impl fmt::Display for ModPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.modulus);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        write!(f, "{} (mod {})", terms.join(" + "), self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(q: u128, c: &[i64]) -> ModPolynomial {
        ModPolynomial::from_i64s(q, c)
    }

    #[test]
    fn reduce_examples() {
        let q = BigUint::from(5u32);
        let f = IntPolynomial::from_i64s(&[1, 3, 1]);
        assert_eq!(reduce_mod(&f, &q).unwrap(), mp(5, &[1, 3, 1]));
        let g = IntPolynomial::from_i64s(&[5, 6, 1]);
        assert_eq!(reduce_mod(&g, &q).unwrap(), mp(5, &[0, 1, 1]));
        // x^2 + 3x + 1 = (x + 4)^2 mod 5
        assert_eq!(reduce_mod(&f, &q).unwrap(), mp(5, &[4, 1]).mul(&mp(5, &[4, 1])));
        let neg = IntPolynomial::from_i64s(&[-1, -7]);
        assert_eq!(reduce_mod(&neg, &q).unwrap(), mp(5, &[4, 3]));
    }

    #[test]
    fn gcd_examples() {
        // (x + 4)^2 and 2x(x^4 + 2x^3 + 3x^2 + x + 1) over F_5
        let h1 = mp(5, &[1, 3, 1]);
        let h2 = mp(5, &[0, 2]).mul(&mp(5, &[1, 1, 3, 2, 1]));
        assert!(h1.gcd(&h2).unwrap().is_one());
        assert_eq!(mp(5, &[0, 1, 1]).gcd(&mp(5, &[0, 1])).unwrap(), mp(5, &[0, 1]));
        let f = mp(5, &[2, 0, 3]);
        assert_eq!(f.gcd(&ModPolynomial::zero(5)).unwrap(), f.make_monic());
        assert_eq!(
            f.gcd(&mp(7, &[1])),
            Err(Error::ModulusMismatch(5, 7))
        );
    }

    #[test]
    fn extended_gcd_identity() {
        let a = mp(11, &[3, 0, 1, 5]);
        let b = mp(11, &[7, 2, 1]);
        let (g, s, t) = a.extended_gcd(&b).unwrap();
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_one());
    }

    #[test]
    fn division_roundtrip() {
        let a = mp(13, &[1, 2, 3, 4, 5, 6]);
        let b = mp(13, &[5, 0, 7]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn large_modulus_arithmetic() {
        let q: u128 = (1u128 << 89) - 1;
        let a = ModPolynomial::new(q, vec![q - 1, 3, 1]);
        let b = ModPolynomial::new(q, vec![5, q - 2]);
        let (quot, rem) = a.mul(&b).div_rem(&b);
        assert_eq!(quot, a);
        assert!(rem.is_zero());
        assert_eq!(mul_mod(q - 1, q - 1, q), 1);
    }

    #[test]
    fn power_mod_matches_repeated_multiplication() {
        let f = mp(7, &[3, 1, 0, 1]);
        let x = ModPolynomial::x(7);
        let mut acc = ModPolynomial::one(7);
        for k in 0..20u32 {
            assert_eq!(x.pow_mod(&BigUint::from(k), &f), acc, "k = {k}");
            acc = acc.mul(&x).rem(&f);
        }
    }
}
