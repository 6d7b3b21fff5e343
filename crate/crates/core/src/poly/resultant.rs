use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Res(a, b) by the subresultant pseudo-remainder sequence.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = BigInt::one();
    let ca = a.content();
    let cb = b.content();
    a = a.primitive_part();
    b = b.primitive_part();
    let da0 = a.degree().unwrap() as u32;
    let db0 = b.degree().unwrap() as u32;
    let scale = ca.pow(db0) * cb.pow(da0);
    if da0 < db0 {
        std::mem::swap(&mut a, &mut b);
        if da0 % 2 == 1 && db0 % 2 == 1 {
            sign = -sign;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            // h <- lc(b)^deg(a) / h^(deg(a) - 1)
            let lb = b.leading_coefficient();
            let num = lb.pow(da as u32);
            let res = if da == 0 {
                num * &h
            } else {
                exact_div(&num, &h.pow(da as u32 - 1))
            };
            return sign * scale * res;
        }
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_remainder(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &g * h.pow(delta);
        a = b;
        b = r
            .div_exact_scalar(&divisor)
            .expect("subresultant division is exact");
        g = a.leading_coefficient();
        h = if delta == 0 {
            h
        } else {
            exact_div(&g.pow(delta), &h.pow(delta - 1))
        };
    }
}

fn exact_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    debug_assert!(r.is_zero(), "inexact division in subresultant sequence");
    q
}

/// (-1)^(n(n-1)/2) Res(f, f') / lc(f).
pub fn discriminant(f: &IntPolynomial) -> Result<BigInt> {
    let n = match f.degree() {
        None | Some(0) => {
            return Err(Error::InvalidPolynomial(
                "discriminant needs degree at least 1".into(),
            ))
        }
        Some(n) => n,
    };
    if n == 1 {
        return Ok(BigInt::one());
    }
    let res = resultant(f, &f.derivative());
    let (q, r) = res.div_rem(&f.leading_coefficient());
    debug_assert!(r.is_zero());
    let sign_odd = (n * (n - 1) / 2) % 2 == 1;
    Ok(if sign_odd { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    /// Independent oracle: Sylvester determinant by fraction-free elimination.
    fn sylvester_resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        let size = m + n;
        if size == 0 {
            return BigInt::one();
        }
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for row in 0..n {
            for (k, c) in a.coeffs().iter().rev().enumerate() {
                mat[row][row + k] = c.clone();
            }
        }
        for row in 0..m {
            for (k, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + row][row + k] = c.clone();
            }
        }
        bareiss_det(mat)
    }

    fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
        let n = mat.len();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if mat[k][k].is_zero() {
                match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                    Some(i) => {
                        mat.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = v / &prev;
                }
            }
            prev = mat[k][k].clone();
        }
        sign * &mat[n - 1][n - 1]
    }

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[1, 3, 1])).unwrap(), BigInt::from(5));
        assert_eq!(
            discriminant(&p(&[1, 0, 0, 1, 0, 0, 1])).unwrap(),
            BigInt::from(-19683)
        );
        assert_eq!(discriminant(&p(&[1, 1, 1])).unwrap(), BigInt::from(-3));
        assert_eq!(discriminant(&p(&[-1, -1, 0, 1])).unwrap(), BigInt::from(-23));
        assert_eq!(discriminant(&p(&[1, 2, 1])).unwrap(), BigInt::zero());
        assert!(discriminant(&p(&[4])).is_err());
    }

    #[test]
    fn oracle_itself_matches_quadratic_formula() {
        for a in -5..=5i64 {
            for b in -5..=5i64 {
                let f = p(&[b, a, 1]);
                let res = sylvester_resultant(&f, &f.derivative());
                assert_eq!(-res, BigInt::from(a * a - 4 * b));
            }
        }
    }

    #[test]
    fn resultant_swaps_and_contents() {
        let a = p(&[2, 4, 6]);
        let b = p(&[3, 0, 0, 9]);
        assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b));
        assert_eq!(resultant(&b, &a), sylvester_resultant(&b, &a));
        assert_eq!(resultant(&p(&[1, 1]), &p(&[-1, 0, 1])), BigInt::zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy() -> impl Strategy<Value = IntPolynomial> {
            (prop::collection::vec(-30i64..30, 1..9), 1i64..4)
                .prop_map(|(mut c, lc)| {
                    c.push(lc);
                    IntPolynomial::from_i64s(&c)
                })
        }

        proptest! {
            #[test]
            fn subresultant_matches_sylvester(a in poly_strategy(), b in poly_strategy()) {
                prop_assert_eq!(resultant(&a, &b), sylvester_resultant(&a, &b));
            }
        }
    }
}
