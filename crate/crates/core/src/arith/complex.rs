use std::fmt;

use super::BigFloat;

/// Complex number as a pair of [`BigFloat`]s sharing one precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        BigComplex { re, im }
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.prec();
        BigComplex { re, im: BigFloat::zero(prec) }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_real(BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(BigFloat::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::one(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        BigComplex { re, im }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        BigComplex { re: self.re.mul(k), im: self.im.mul(k) }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        BigComplex { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    pub fn mul_bigint(&self, k: &num_bigint::BigInt) -> Self {
        BigComplex { re: self.re.mul_bigint(k), im: self.im.mul_bigint(k) }
    }

    pub fn div_int(&self, k: i64) -> Self {
        BigComplex { re: self.re.div_int(k), im: self.im.div_int(k) }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        BigComplex { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex { re: self.re.div(&n), im: self.im.neg().div(&n) }
    }

    pub fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        BigComplex { re: num.re.div(&n), im: num.im.div(&n) }
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        let (s, c) = self.im.sin_cos();
        BigComplex { re: r.mul(&c), im: r.mul(&s) }
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let t = r.add(&self.re).mul_pow2(-1).sqrt();
            let im = self.im.div(&t.mul_pow2(1));
            BigComplex { re: t, im }
        } else {
            let t = r.sub(&self.re).mul_pow2(-1).sqrt();
            let re = self.im.abs().div(&t.mul_pow2(1));
            let im = if self.im.is_negative() { t.neg() } else { t };
            BigComplex { re, im }
        }
    }

    /// Approximate value as a pair of `f64`s.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Smallest `e` with `max(|re|, |im|) < 2^e`.
    pub fn magnitude_bits(&self) -> i64 {
        self.re.magnitude_bits().max(self.im.magnitude_bits())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re.to_sci_string(20), self.im.to_sci_string(20))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(30);
        write!(f, "{} + {}i", self.re.to_sci_string(d), self.im.to_sci_string(d))
    }
}
