use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{BigComplex, BigFloat, BigRat};

/// `x + y sqrt(D)` in `K = Q(sqrt D)`, exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KElem {
    #[serde(with = "crate::serde_util::bigrat")]
    pub x: BigRat,
    #[serde(with = "crate::serde_util::bigrat")]
    pub y: BigRat,
    #[serde(skip)]
    pub d: i64,
}

impl KElem {
    pub fn new(x: BigRat, y: BigRat, d: i64) -> Self {
        KElem { x, y, d }
    }

    pub fn from_rat(x: BigRat, d: i64) -> Self {
        KElem { x, y: BigRat::zero(), d }
    }

    pub fn from_int(n: i64, d: i64) -> Self {
        Self::from_rat(BigRat::from_integer(BigInt::from(n)), d)
    }

    pub fn zero(d: i64) -> Self {
        Self::from_int(0, d)
    }

    pub fn one(d: i64) -> Self {
        Self::from_int(1, d)
    }

    /// `sqrt(D)` itself.
    pub fn sqrt_d(d: i64) -> Self {
        KElem { x: BigRat::zero(), y: BigRat::one(), d }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        KElem { x: &self.x + &o.x, y: &self.y + &o.y, d: self.d }
    }

    pub fn sub(&self, o: &Self) -> Self {
        KElem { x: &self.x - &o.x, y: &self.y - &o.y, d: self.d }
    }

    pub fn neg(&self) -> Self {
        KElem { x: -&self.x, y: -&self.y, d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = BigRat::from_integer(BigInt::from(self.d));
        KElem { x: &self.x * &o.x + &self.y * &o.y * d, y: &self.x * &o.y + &self.y * &o.x, d: self.d }
    }

    pub fn scale(&self, r: &BigRat) -> Self {
        KElem { x: &self.x * r, y: &self.y * r, d: self.d }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self.scale(&BigRat::from_integer(BigInt::from(n)))
    }

    pub fn conj(&self) -> Self {
        KElem { x: self.x.clone(), y: -&self.y, d: self.d }
    }

    pub fn norm(&self) -> BigRat {
        &self.x * &self.x - &self.y * &self.y * BigRat::from_integer(BigInt::from(self.d))
    }

    pub fn trace(&self) -> BigRat {
        &self.x * BigRat::from_integer(BigInt::from(2))
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let r = n.recip();
        Some(self.conj().scale(&r))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inv()?))
    }

    /// Complex embedding with `sqrt(D) = i sqrt|D|`.
    pub fn embed(&self, prec: u32) -> BigComplex {
        let s = BigFloat::from_i64(self.d.abs(), prec).sqrt();
        BigComplex::new(BigFloat::from_rational(&self.x, prec), BigFloat::from_rational(&self.y, prec).mul(&s))
    }

    /// Largest absolute value of a numerator or denominator.
    pub fn height_bound(&self) -> BigInt {
        [self.x.numer(), self.x.denom(), self.y.numer(), self.y.denom()].into_iter().map(|v| v.abs()).max().unwrap()
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}
