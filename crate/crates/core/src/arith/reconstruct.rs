use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{BigFloat, BigRat};

/// Continued-fraction reconstruction of a rational number.
///
/// Returns the first convergent `h/k` with `k <= den_bound` and
/// `|x - h/k| <= tol`, or `None` once the denominators pass the bound.
pub fn rational_reconstruct(x: &BigFloat, den_bound: &BigInt, tol: &BigFloat) -> Option<BigRat> {
    let target = x.to_rational();
    let tol = tol.abs().to_rational();
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut num = target.numer().clone();
    let mut den = target.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if &k_next > den_bound {
            return None;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let approx = BigRat::new(h.clone(), k.clone());
        if (&target - &approx).abs() <= tol {
            return Some(approx);
        }
        num = std::mem::replace(&mut den, r);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bits_for_digits;

    fn tol(digits: i32, prec: u32) -> BigFloat {
        BigFloat::from_ratio(&BigInt::one(), &BigInt::from(10).pow(digits as u32), prec)
    }

    #[test]
    fn simple_fractions() {
        let p = bits_for_digits(60);
        let half = BigFloat::from_f64(0.5, p);
        assert_eq!(rational_reconstruct(&half, &BigInt::from(10), &tol(30, p)), Some(BigRat::new(1.into(), 2.into())));
        let third = BigFloat::from_ratio(&BigInt::one(), &BigInt::from(3), p);
        assert_eq!(
            rational_reconstruct(&third, &BigInt::from(1_000_000), &tol(40, p)),
            Some(BigRat::new(1.into(), 3.into()))
        );
        let neg = BigFloat::from_ratio(&BigInt::from(-22), &BigInt::from(7), p);
        assert_eq!(
            rational_reconstruct(&neg, &BigInt::from(100), &tol(40, p)),
            Some(BigRat::new((-22).into(), 7.into()))
        );
    }

    #[test]
    fn pi_fails_closed() {
        let p = bits_for_digits(60);
        let pi = BigFloat::pi(p);
        assert_eq!(rational_reconstruct(&pi, &BigInt::from(10), &tol(40, p)), None);
        // A loose tolerance accepts 22/7 but never a denominator over the bound.
        assert_eq!(
            rational_reconstruct(&pi, &BigInt::from(10), &tol(2, p)),
            Some(BigRat::new(22.into(), 7.into()))
        );
    }

    #[test]
    fn large_denominators() {
        let p = bits_for_digits(60);
        let r = BigRat::new(BigInt::from(123_456_789_012i64), BigInt::from(987_654_321_097i64));
        let x = BigFloat::from_rational(&r, p);
        assert_eq!(rational_reconstruct(&x, &BigInt::from(10).pow(20), &tol(50, p)), Some(r));
    }
}
