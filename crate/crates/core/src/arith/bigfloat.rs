use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigRat;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Number of mantissa bits needed to carry `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

/// Binary floating point number `mant * 2^exp` with a fixed mantissa width.
///
/// Nonzero values always carry exactly `prec` mantissa bits, so equal values
/// at equal precision are structurally equal. Every operation rounds to
/// nearest, ties to even, and returns a value at the precision of its
/// left operand.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

/// Shift `m` right by `s` bits, rounding to nearest with ties to even.
fn round_shift(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let mag = m.magnitude();
    let mut q: BigUint = mag >> s;
    let half_bit = mag.bit(s - 1);
    if half_bit {
        let below = mag.trailing_zeros().is_some_and(|tz| tz < s - 1);
        if below || q.bit(0) {
            q += 1u32;
        }
    }
    BigInt::from_biguint(m.sign(), q)
}

impl BigFloat {
    fn normalize(mant: BigInt, exp: i64, prec: u32) -> Self {
        if mant.is_zero() {
            return BigFloat { mant, exp: 0, prec };
        }
        let bits = mant.bits();
        let p = prec as u64;
        if bits > p {
            let s = bits - p;
            let mut m = round_shift(&mant, s);
            let mut e = exp + s as i64;
            if m.bits() > p {
                m >>= 1;
                e += 1;
            }
            BigFloat { mant: m, exp: e, prec }
        } else {
            let s = p - bits;
            BigFloat { mant: mant << s, exp: exp - s as i64, prec }
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::normalize(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::normalize(v.clone(), 0, prec)
    }

    /// `num / den` correctly rounded.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        Self::div_scaled(num << shift as u64, den, -shift, prec)
    }

    pub fn from_rational(r: &BigRat, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    /// Exact conversion from a finite `f64`, then rounded to `prec`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Self::normalize(BigInt::from(m) * sign, e, prec)
    }

    /// `(num / den) * 2^exp` where `num` already carries enough bits.
    fn div_scaled(num: BigInt, den: &BigInt, exp: i64, prec: u32) -> Self {
        let (q, r) = num.div_rem(den);
        if r.is_zero() {
            return Self::normalize(q, exp, prec);
        }
        // A sticky bit below the quotient makes the final rounding exact.
        let neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        let mag = (q.magnitude() << 1u32) + 1u32;
        let sticky = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, mag);
        Self::normalize(sticky, exp - 1, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Smallest `e` with `|self| < 2^e`; `i64::MIN` for zero.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// Re-round to a different precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::normalize(self.mant.clone(), self.exp, prec)
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec, "mixed precision");
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.with_prec(self.prec);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let diff = (hi.exp - lo.exp) as u64;
        if diff > self.prec as u64 + 2 {
            return hi.with_prec(self.prec);
        }
        Self::normalize((&hi.mant << diff) + &lo.mant, lo.exp, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec, "mixed precision");
        Self::normalize(&self.mant * &other.mant, self.exp + other.exp, self.prec)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::normalize(&self.mant * k, self.exp, self.prec)
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        Self::normalize(&self.mant * k, self.exp, self.prec)
    }

    pub fn div(&self, other: &Self) -> Self {
        debug_assert_eq!(self.prec, other.prec, "mixed precision");
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero(self.prec);
        }
        let shift = self.prec as u64 + 2 + other.mant.bits();
        let shift = shift.saturating_sub(self.mant.bits());
        Self::div_scaled(
            &self.mant << shift,
            &other.mant,
            self.exp - other.exp - shift as i64,
            self.prec,
        )
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.div(&Self::from_i64(k, self.prec))
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec).div(self)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    /// Correctly rounded square root. Panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let mut t = self.prec as i64 + 4;
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let n = &self.mant << t as u64;
        let s = n.sqrt();
        let half = (self.exp - t) / 2;
        if &s * &s == n {
            Self::normalize(s, half, self.prec)
        } else {
            Self::normalize((s << 1u32) + 1, half - 1, self.prec)
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (a, b) = (self.signum(), other.signum());
        if a != b {
            return a.cmp(&b);
        }
        match self.sub(other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn max_abs<'a>(&'a self, other: &'a Self) -> &'a Self {
        if self.abs().cmp_value(&other.abs()) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Exact value as a rational number.
    pub fn to_rational(&self) -> BigRat {
        if self.exp >= 0 {
            BigRat::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRat::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// `round(self * 2^w)`.
    pub fn to_fixed(&self, w: u32) -> BigInt {
        let s = self.exp + w as i64;
        if s >= 0 {
            &self.mant << s as u64
        } else {
            round_shift(&self.mant, (-s) as u64)
        }
    }

    pub fn from_fixed(v: BigInt, w: u32, prec: u32) -> Self {
        Self::normalize(v, -(w as i64), prec)
    }

    pub fn round_to_bigint(&self) -> BigInt {
        self.to_fixed(0)
    }

    pub fn floor_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (round_shift(&self.mant, s), self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        ldexp(mf, e)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let log10 = (self.magnitude_bits() - 1) as f64 / LOG2_10;
        let mut k = log10.floor() as i64;
        for _ in 0..4 {
            let n = self.scaled_decimal(digits as i64 - 1 - k);
            let s = n.magnitude().to_string();
            if s.len() > digits {
                k += 1;
                continue;
            }
            if s.len() < digits {
                k -= 1;
                continue;
            }
            let sign = if self.is_negative() { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{k}")
            } else {
                format!("{sign}{head}.{tail}e{k}")
            };
        }
        format!("{:e}", self.to_f64())
    }

    /// `round(self * 10^e)`.
    fn scaled_decimal(&self, e: i64) -> BigInt {
        let ten = BigInt::from(10);
        let (mut num, mut den) = (self.mant.abs(), BigInt::one());
        if e >= 0 {
            num *= ten.pow(e as u32);
        } else {
            den *= ten.pow((-e) as u32);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        let two = BigInt::from(2);
        let (q, r) = num.div_mod_floor(&den);
        let q = if &r * &two >= den { q + 1 } else { q };
        if self.is_negative() {
            -q
        } else {
            q
        }
    }

    // ----- transcendental functions -----

    pub fn pi(prec: u32) -> Self {
        let w = prec + 32;
        Self::from_fixed(pi_fixed(w), w, prec)
    }

    pub fn ln2(prec: u32) -> Self {
        let w = prec + 32;
        Self::from_fixed(ln2_fixed(w), w, prec)
    }

    /// `e^self`. Arguments must be of moderate size (|x| < 2^40).
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return Self::one(prec);
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e12, "exp argument too large");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let halvings = halving_steps(prec);
        let k_bits = 64 - k.unsigned_abs().leading_zeros();
        let w = prec + 2 * halvings + 40 + k_bits;
        let r = self.to_fixed(w) - ln2_fixed(w) * k;
        // `r` read at scale w + halvings is r / 2^halvings.
        let big_w = w + halvings;
        let one = BigInt::one() << big_w;
        let mut sum = one.clone();
        let mut term = one;
        let mut n = 1i64;
        loop {
            term = (term * &r) >> big_w;
            term /= n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..halvings {
            sum = (&sum * &sum) >> big_w;
        }
        Self::normalize(sum, k - big_w as i64, prec)
    }

    /// `(sin self, cos self)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        if self.is_zero() {
            return (Self::zero(prec), Self::one(prec));
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e12, "sin/cos argument too large");
        let k = (xf / std::f64::consts::TAU).round() as i64;
        let halvings = halving_steps(prec);
        let k_bits = 64 - k.unsigned_abs().leading_zeros();
        let w = prec + 2 * halvings + 40 + k_bits;
        let r = self.to_fixed(w) - (pi_fixed(w) << 1u32) * k;
        let big_w = w + halvings;
        let one = BigInt::one() << big_w;
        let mut s = r.clone();
        let mut c = one;
        let mut term = r.clone();
        let mut n = 1i64;
        loop {
            n += 1;
            term = ((term * &r) >> big_w) / n;
            if term.is_zero() {
                break;
            }
            match n % 4 {
                0 => c += &term,
                1 => s += &term,
                2 => c -= &term,
                _ => s -= &term,
            }
        }
        for _ in 0..halvings {
            let s2 = (&s * &c) >> (big_w - 1);
            let c2 = ((&c * &c) - (&s * &s)) >> big_w;
            s = s2;
            c = c2;
        }
        (
            Self::normalize(s, -(big_w as i64), prec),
            Self::normalize(c, -(big_w as i64), prec),
        )
    }

    /// Natural logarithm of a positive number, by Newton iteration on `exp`.
    pub fn ln(&self) -> Self {
        assert!(self.signum() > 0, "ln of nonpositive BigFloat");
        let prec = self.prec;
        let work = prec + 32;
        let x = self.with_prec(work);
        // Split off the binary exponent so the Newton start is accurate.
        let e = self.magnitude_bits();
        let m = x.mul_pow2(-e);
        let mut y = Self::from_f64(m.to_f64().ln(), work);
        let mut last = None;
        for _ in 0..64 {
            let ey = y.exp();
            let next = y.add(&m.sub(&ey).div(&ey));
            if last.as_ref() == Some(&next) || next == y {
                y = next;
                break;
            }
            last = Some(y);
            y = next;
        }
        y.add(&Self::ln2(work).mul_int(e)).with_prec(prec)
    }
}

fn halving_steps(prec: u32) -> u32 {
    ((prec as f64).sqrt() / 2.0).ceil().max(4.0) as u32
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// `round(2^w * atan(1/x))` for an integer `x > 1`, with extra guard bits.
fn atan_inv_fixed(x: u64, w: u32) -> BigInt {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << w) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn cached(cache: &'static OnceLock<Mutex<HashMap<u32, BigInt>>>, w: u32, f: impl Fn(u32) -> BigInt) -> BigInt {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("constant cache").get(&w) {
        return v.clone();
    }
    let v = f(w);
    map.lock().expect("constant cache").insert(w, v.clone());
    v
}

fn pi_fixed(w: u32) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    cached(&CACHE, w, |w| {
        let g = w + 16;
        let v = atan_inv_fixed(5, g) * 16 - atan_inv_fixed(239, g) * 4;
        round_shift(&v, 16)
    })
}

fn ln2_fixed(w: u32) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    cached(&CACHE, w, |w| {
        // ln 2 = 2 atanh(1/3)
        let g = w + 16;
        let nine = BigInt::from(9);
        let mut power = (BigInt::one() << g) / BigInt::from(3);
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            sum += &power / BigInt::from(2 * k + 1);
            power /= &nine;
            k += 1;
        }
        round_shift(&(sum << 1u32), 16)
    })
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, prec={})", self.to_sci_string(20), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(((self.prec as f64) / LOG2_10) as usize);
        f.write_str(&self.to_sci_string(digits))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                BigFloat::$inner(self, rhs)
            }
        }
        impl std::ops::$tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                BigFloat::$inner(&self, &rhs)
            }
        }
        impl std::ops::$tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                BigFloat::$inner(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);
forward_binop!(Div, div, div);

impl std::ops::Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::neg(self)
    }
}

impl std::ops::Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn f(x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn close(a: &BigFloat, b: &BigFloat, bits: i64) -> bool {
        let d = a.sub(b);
        d.is_zero() || d.magnitude_bits() < a.magnitude_bits().max(b.magnitude_bits()) - bits
    }

    #[test]
    fn normalization_is_canonical() {
        let a = BigFloat::from_i64(6, P);
        let b = BigFloat::from_i64(3, P).mul_pow2(1);
        assert_eq!(a, b);
        assert_eq!(BigFloat::from_i64(0, P), BigFloat::zero(P));
    }

    #[test]
    fn exact_small_arithmetic() {
        let third = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), P);
        let one = third.mul_int(3);
        assert!(close(&one, &BigFloat::one(P), P as i64 - 2));
        let x = f(1.5).add(&f(-0.25));
        assert_eq!(x.to_f64(), 1.25);
        assert!(f(2.0).sqrt().sqr().sub(&f(2.0)).magnitude_bits() < -(P as i64) + 4);
        assert_eq!(f(9.0).sqrt(), f(3.0));
        assert_eq!(f(7.0).div(&f(2.0)), f(3.5));
    }

    #[test]
    fn rounding_ties_to_even() {
        // 2^4 + 1 at 4 bits is a tie between 16 and 18; even mantissa wins.
        let x = BigFloat::from_i64(17, 4);
        assert_eq!(x, BigFloat::from_i64(16, 4));
        let y = BigFloat::from_i64(19, 4);
        assert_eq!(y, BigFloat::from_i64(20, 4));
        let z = BigFloat::from_i64(-17, 4);
        assert_eq!(z, BigFloat::from_i64(-16, 4));
    }

    #[test]
    fn deterministic_ops() {
        let a = BigFloat::pi(P);
        let b = BigFloat::ln2(P);
        assert_eq!(a.mul(&b), a.mul(&b));
        assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn pi_and_ln2_digits() {
        let pi = BigFloat::pi(P).to_sci_string(50);
        assert_eq!(pi, "3.1415926535897932384626433832795028841971693993751e0");
        let ln2 = BigFloat::ln2(P).to_sci_string(40);
        assert_eq!(ln2, "6.931471805599453094172321214581765680755e-1");
    }

    #[test]
    fn exp_and_trig_identities() {
        let one = BigFloat::one(P);
        let e = one.exp();
        assert_eq!(e.to_sci_string(40), "2.718281828459045235360287471352662497757e0");
        for &x in &[0.1, -3.7, 12.5, 100.25, -250.0] {
            let bx = f(x);
            let prod = bx.exp().mul(&bx.neg().exp());
            assert!(close(&prod, &one, P as i64 - 8), "exp({x})");
            let (s, c) = bx.sin_cos();
            let id = s.sqr().add(&c.sqr());
            assert!(close(&id, &one, P as i64 - 8), "sin^2+cos^2 at {x}");
            assert!((s.to_f64() - x.sin()).abs() < 1e-12);
        }
        let (s, c) = BigFloat::pi(P).div_int(6).sin_cos();
        assert!(close(&s, &f(0.5), P as i64 - 8));
        assert!(close(&c.sqr(), &f(0.75), P as i64 - 8));
    }

    #[test]
    fn ln_inverts_exp() {
        for &x in &[0.5, 2.0, 1e-30, 12345.678] {
            let bx = f(x);
            assert!(close(&bx.ln().exp(), &bx, P as i64 - 8));
        }
    }

    #[test]
    fn sci_string_rounding() {
        assert_eq!(f(0.5).to_sci_string(3), "5.00e-1");
        assert_eq!(f(-1234.5).to_sci_string(4), "-1.235e3");
        assert_eq!(f(9.9996).to_sci_string(4), "1.000e1");
    }
}
