use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{ComplexOut, HeegnerError};
use crate::arith::{agm, bits_for_digits, BigComplex, BigFloat};
use crate::elliptic::CurveQ;

/// Guard bits carried on top of the requested decimal precision.
pub const GUARD_BITS: u32 = 64;

/// Period lattice of the Néron differential on the minimal model, with the
/// analytic map `C/Lambda -> E(C)` and its inverse.
#[derive(Clone, Debug)]
pub struct PeriodLattice {
    /// Decimal digits requested.
    pub prec: u32,
    pub bits: u32,
    /// `omega1` is real; `Im(omega2 / omega1) > 0`.
    pub omega1: BigComplex,
    pub omega2: BigComplex,
    pub tau: BigComplex,
    /// Basis with `tau` in the standard fundamental domain, used for evaluation.
    w1: BigComplex,
    w2: BigComplex,
    tau_red: BigComplex,
    q_red: BigComplex,
    a1: BigFloat,
    a3: BigFloat,
    b2: BigFloat,
    /// Relative error of `c4, c6` recomputed from the lattice.
    pub roundtrip_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodSummary {
    pub prec: u32,
    pub omega1: ComplexOut,
    pub omega2: ComplexOut,
    pub tau: ComplexOut,
    pub roundtrip_error: f64,
}

pub(crate) fn two_pi_i(bits: u32) -> BigComplex {
    BigComplex::new(BigFloat::zero(bits), BigFloat::pi(bits).mul_pow2(1))
}

/// `e^(2 pi i t)`.
pub(crate) fn e_2pi_i(t: &BigComplex) -> BigComplex {
    two_pi_i(t.prec()).mul(t).exp()
}

fn bf(v: &BigInt, bits: u32) -> BigFloat {
    BigFloat::from_bigint(v, bits)
}

/// Real roots of `4x^3 + b2 x^2 + 2 b4 x + b6`, in decreasing order.
fn real_roots(b2: &BigFloat, b4: &BigFloat, b6: &BigFloat) -> Vec<BigFloat> {
    let bits = b2.prec();
    let (c2, c1, c0) = (b2.to_f64() / 4.0, b4.to_f64() / 2.0, b6.to_f64() / 4.0);
    // one real root of the monic cubic by bisection, then deflate
    let bound = 1.0 + c2.abs().max(c1.abs()).max(c0.abs());
    let f = |x: f64| ((x + c2) * x + c1) * x + c0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let (p, q) = (c2 + r, c1 + r * (c2 + r));
    let disc = p * p - 4.0 * q;
    let mut approx = vec![r];
    if disc > 0.0 {
        let s = disc.sqrt();
        approx.push((-p + s) / 2.0);
        approx.push((-p - s) / 2.0);
    }
    let four = BigFloat::from_i64(4, bits);
    let poly = |x: &BigFloat| four.mul(x).add(b2).mul(x).add(&b4.mul_int(2)).mul(x).add(b6);
    let dpoly = |x: &BigFloat| four.mul_int(3).mul(x).add(&b2.mul_int(2)).mul(x).add(&b4.mul_int(2));
    let mut roots: Vec<BigFloat> = approx
        .into_iter()
        .map(|a| {
            let mut x = BigFloat::from_f64(a, bits);
            for _ in 0..(bits + 64) {
                let d = dpoly(&x);
                if d.is_zero() {
                    break;
                }
                let step = poly(&x).div(&d);
                x = x.sub(&step);
                if step.is_zero() || step.magnitude_bits() < x.magnitude_bits().max(0) - bits as i64 {
                    break;
                }
            }
            x
        })
        .collect();
    roots.sort_by(|a, b| b.cmp_value(a));
    roots
}

/// Eisenstein series `E4, E6` at `q`.
fn eisenstein(q: &BigComplex) -> (BigComplex, BigComplex) {
    let bits = q.prec();
    let mut e4 = BigComplex::zero(bits);
    let mut e6 = BigComplex::zero(bits);
    let mut qn = q.clone();
    let mut n = 1i64;
    let lq = -q.magnitude_bits().max(1) as f64;
    while (n as f64) * lq.max(1.0) < bits as f64 + 40.0 || n < 3 {
        let (s3, s5) = (1..=n).filter(|d| n % d == 0).fold((0i64, BigInt::zero()), |(a, b), d| {
            (a + d * d * d, b + BigInt::from(d).pow(5))
        });
        e4 = e4.add(&qn.mul_int(s3));
        e6 = e6.add(&qn.mul_bigint(&s5));
        qn = qn.mul(q);
        n += 1;
        if n > 4 * bits as i64 {
            break;
        }
    }
    (e4.mul_int(240).add(&BigComplex::one(bits)), BigComplex::one(bits).sub(&e6.mul_int(504)))
}

/// Reduce `(w1, w2)` so that `tau = w2 / w1` lies in the fundamental domain.
fn reduce_basis(mut w1: BigComplex, mut w2: BigComplex) -> (BigComplex, BigComplex) {
    for _ in 0..1000 {
        let tau = w2.div(&w1);
        let n = tau.re.round_to_bigint();
        if !n.is_zero() {
            w2 = w2.sub(&w1.mul_bigint(&n));
        }
        let tau = w2.div(&w1);
        if tau.norm_sqr().cmp_value(&BigFloat::one(w1.prec())).is_lt() {
            (w1, w2) = (w2, w1.neg());
        } else {
            break;
        }
    }
    (w1, w2)
}

/// Period lattice of the minimal model by AGM.
pub fn periods(e: &CurveQ, prec: u32) -> Result<PeriodLattice, HeegnerError> {
    if prec < 30 {
        return Err(HeegnerError::BadInput(format!("precision {prec} is below 30 digits")));
    }
    let bits = bits_for_digits(prec) + GUARD_BITS;
    let m = e.model();
    let (b2, b4, b6) = (bf(&m.b2, bits), bf(&m.b4, bits), bf(&m.b6, bits));
    let pi = BigFloat::pi(bits);
    let roots = real_roots(&b2, &b4, &b6);
    let (omega1, omega2) = if m.disc.is_positive() {
        if roots.len() != 3 {
            return Err(HeegnerError::PrecisionLoss("expected three real roots".into()));
        }
        let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
        let s13 = e1.sub(e3).sqrt();
        let w1 = pi.div(&agm(&s13, &e1.sub(e2).sqrt()));
        let w2 = pi.div(&agm(&s13, &e2.sub(e3).sqrt()));
        (BigComplex::from_real(w1), BigComplex::new(BigFloat::zero(bits), w2))
    } else {
        let e1 = &roots[0];
        let a = e1.mul_int(3).add(&b2.mul_pow2(-2));
        let b = e1.sqr().mul_int(3).add(&b2.mul_pow2(-1).mul(e1)).add(&b4.mul_pow2(-1)).sqrt();
        let two_sqrt_b = b.sqrt().mul_pow2(1);
        let w1 = pi.mul_pow2(1).div(&agm(&two_sqrt_b, &b.mul_pow2(1).add(&a).sqrt()));
        let im = pi.div(&agm(&two_sqrt_b, &b.mul_pow2(1).sub(&a).sqrt()));
        (BigComplex::from_real(w1.clone()), BigComplex::new(w1.mul_pow2(-1).neg(), im))
    };
    let tau = omega2.div(&omega1);
    let (w1, w2) = reduce_basis(omega1.clone(), omega2.clone());
    let tau_red = w2.div(&w1);
    let q_red = e_2pi_i(&tau_red);
    let mut lattice = PeriodLattice {
        prec,
        bits,
        omega1,
        omega2,
        tau,
        w1,
        w2,
        tau_red,
        q_red,
        a1: bf(&m.a[0], bits),
        a3: bf(&m.a[2], bits),
        b2,
        roundtrip_error: 0.0,
    };
    lattice.roundtrip_error = lattice.invariant_error(&m.c4, &m.c6);
    if lattice.roundtrip_error > 10f64.powi(-(prec as i32 - 10)) {
        return Err(HeegnerError::PrecisionLoss(format!(
            "c4, c6 recomputed from the lattice are off by {:e}",
            lattice.roundtrip_error
        )));
    }
    Ok(lattice)
}

impl PeriodLattice {
    /// Relative error of `c4 = (2 pi / w1)^4 E4(tau)`, `c6 = (2 pi / w1)^6 E6(tau)`.
    fn invariant_error(&self, c4: &BigInt, c6: &BigInt) -> f64 {
        let (e4, e6) = eisenstein(&self.q_red);
        let t = BigComplex::from_real(BigFloat::pi(self.bits).mul_pow2(1)).div(&self.w1);
        let t2 = t.sqr();
        let t4 = t2.sqr();
        let got4 = t4.mul(&e4);
        let got6 = t4.mul(&t2).mul(&e6);
        let (c4f, c6f) = (bf(c4, self.bits), bf(c6, self.bits));
        let scale4 = c4f.abs().to_f64().max(c6f.abs().to_f64().powf(2.0 / 3.0)).max(1.0);
        let scale6 = c6f.abs().to_f64().max(c4f.abs().to_f64().powf(1.5)).max(1.0);
        let err4 = got4.sub(&BigComplex::from_real(c4f)).abs().to_f64() / scale4;
        let err6 = got6.sub(&BigComplex::from_real(c6f)).abs().to_f64() / scale6;
        err4.max(err6)
    }

    pub fn summary(&self) -> PeriodSummary {
        let d = self.prec as usize;
        PeriodSummary {
            prec: self.prec,
            omega1: ComplexOut::new(&self.omega1, d),
            omega2: ComplexOut::new(&self.omega2, d),
            tau: ComplexOut::new(&self.tau, d),
            roundtrip_error: self.roundtrip_error,
        }
    }

    /// Real coordinates `(s, t)` with `z = s omega1 + t omega2`.
    pub fn coordinates(&self, z: &BigComplex) -> (BigFloat, BigFloat) {
        let w = z.div(&self.omega1);
        let t = w.im.div(&self.tau.im);
        let s = w.re.sub(&t.mul(&self.tau.re));
        (s, t)
    }

    pub fn lattice_point(&self, m: &BigInt, n: &BigInt) -> BigComplex {
        self.omega1.mul_bigint(m).add(&self.omega2.mul_bigint(n))
    }

    /// `z` minus a nearest lattice point, measured in units of `|omega1|`.
    pub fn reduce(&self, z: &BigComplex) -> (BigComplex, BigFloat) {
        let (s, t) = self.coordinates(z);
        let (m, n) = (s.round_to_bigint(), t.round_to_bigint());
        let mut best = z.sub(&self.lattice_point(&m, &n));
        let mut best_d = best.abs();
        for (dm, dn) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)] {
            let c = z.sub(&self.lattice_point(&(&m + dm), &(&n + dn)));
            let d = c.abs();
            if d.cmp_value(&best_d).is_lt() {
                (best, best_d) = (c, d);
            }
        }
        let scaled = best_d.div(&self.omega1.abs());
        (best, scaled)
    }

    /// Distance from `z` to the lattice in units of `|omega1|`.
    pub fn distance(&self, z: &BigComplex) -> BigFloat {
        self.reduce(z).1
    }

    /// `z` is within `10^-(prec/2)` of a lattice point.
    pub fn is_lattice_point(&self, z: &BigComplex) -> bool {
        let d = self.distance(z);
        d.is_zero() || d.to_f64().log10() < -(self.prec as f64) / 2.0
    }

    /// Normalized coordinate `w = z / w1` reduced to `|Im w| <= Im(tau)/2`.
    fn normalized(&self, z: &BigComplex) -> BigComplex {
        let w = z.div(&self.w1);
        let t = w.im.div(&self.tau_red.im).round_to_bigint();
        let w = w.sub(&self.tau_red.mul_bigint(&t));
        let s = w.re.round_to_bigint();
        w.sub(&BigComplex::from_real(BigFloat::from_bigint(&s, self.bits)))
    }

    /// `(wp(w), wp'(w))` for the lattice `Z + Z tau_red`, `w` already normalized.
    fn wp_normalized(&self, w: &BigComplex, bits: u32) -> (BigComplex, BigComplex) {
        let q = self.q_red.with_prec(bits);
        let one = BigComplex::one(bits);
        let u = e_2pi_i(&w.with_prec(bits));
        let uinv = u.recip();
        let f0 = |t: &BigComplex| {
            let d = one.sub(t);
            let d2 = d.sqr();
            (t.div(&d2), t.mul(&one.add(t)).div(&d2.mul(&d)))
        };
        let (mut s, mut sd) = f0(&u);
        let mut qn = q.clone();
        let cutoff = -(bits as i64) - 16;
        let lu = u.magnitude_bits().abs().max(uinv.magnitude_bits().abs());
        for n in 1..100_000 {
            let (a, b) = (qn.mul(&u), qn.mul(&uinv));
            let (pa, da) = f0(&a);
            let (pb, db) = f0(&b);
            let d = one.sub(&qn);
            s = s.add(&pa).add(&pb).sub(&qn.div(&d.sqr()).mul_int(2));
            sd = sd.add(&da).sub(&db);
            qn = qn.mul(&q);
            if qn.is_zero() || (qn.magnitude_bits() + lu < cutoff && n > 1) {
                break;
            }
        }
        let c = two_pi_i(bits);
        let c2 = c.sqr();
        let twelfth = BigComplex::from_real(BigFloat::one(bits).div_int(12));
        (c2.mul(&s.add(&twelfth)), c2.mul(&c).mul(&sd))
    }

    /// `(wp(z), wp'(z))` for the period lattice, or `None` at a lattice point.
    pub fn wp(&self, z: &BigComplex) -> Option<(BigComplex, BigComplex)> {
        self.wp_at(z, self.bits)
    }

    fn wp_at(&self, z: &BigComplex, bits: u32) -> Option<(BigComplex, BigComplex)> {
        let w = self.normalized(&z.with_prec(self.bits)).with_prec(bits);
        if w.is_zero() || w.magnitude_bits() < -(bits as i64) + 8 {
            return None;
        }
        let (p, dp) = self.wp_normalized(&w, bits);
        let w1 = self.w1.with_prec(bits);
        let w1sq = w1.sqr();
        Some((p.div(&w1sq), dp.div(&w1sq.mul(&w1))))
    }

    /// The point of `E(C)` with elliptic logarithm `z`; `None` for the origin.
    pub fn to_point(&self, z: &BigComplex) -> Option<(BigComplex, BigComplex)> {
        if self.is_lattice_point(z) {
            return None;
        }
        let (p, dp) = self.wp(z)?;
        Some(self.coords_from_wp(&p, &dp))
    }

    fn coords_from_wp(&self, p: &BigComplex, dp: &BigComplex) -> (BigComplex, BigComplex) {
        let x = p.sub(&BigComplex::from_real(self.b2.div_int(12)));
        let y = dp.sub(&x.scale(&self.a1)).sub(&BigComplex::from_real(self.a3.clone())).scale(&BigFloat::one(self.bits).mul_pow2(-1));
        (x, y)
    }

    /// `(wp, wp')` targets of the point `(x, y)`.
    fn wp_targets(&self, x: &BigComplex, y: &BigComplex) -> (BigComplex, BigComplex) {
        let p = x.add(&BigComplex::from_real(self.b2.div_int(12)));
        let dp = y.mul_int(2).add(&x.scale(&self.a1)).add(&BigComplex::from_real(self.a3.clone()));
        (p, dp)
    }

    /// Elliptic logarithm of the affine point `(x, y)`, modulo the lattice.
    pub fn elliptic_log(&self, x: &BigComplex, y: &BigComplex) -> Result<BigComplex, HeegnerError> {
        let (px, py) = self.wp_targets(x, y);
        let w1 = self.w1.clone();
        // 2-torsion: pick the half period with the right wp value
        if py.is_zero() || py.abs().to_f64() < 10f64.powi(-(self.prec as i32) / 2) * (1.0 + px.abs().to_f64()).powf(1.5) {
            let halves = [w1.mul_pow2_c(-1), self.w2.mul_pow2_c(-1), w1.add(&self.w2).mul_pow2_c(-1)];
            return halves
                .into_iter()
                .min_by(|a, b| {
                    let da = self.wp(a).map(|v| v.0.sub(&px).abs()).unwrap();
                    let db = self.wp(b).map(|v| v.0.sub(&px).abs()).unwrap();
                    da.cmp_value(&db)
                })
                .ok_or_else(|| HeegnerError::PrecisionLoss("no half period".into()));
        }
        // a rough solution at low precision, then Newton at full precision
        let lo = 96;
        let target_lo = px.with_prec(lo);
        let newton = |mut z: BigComplex, bits: u32, target: &BigComplex, iters: usize| -> Option<BigComplex> {
            for _ in 0..iters {
                let (p, dp) = self.wp_at(&z, bits)?;
                if dp.is_zero() {
                    return None;
                }
                let step = p.sub(target).div(&dp);
                z = z.sub(&step);
                let small = step.is_zero() || step.magnitude_bits() < z.magnitude_bits().max(self.w1.magnitude_bits()) - bits as i64 + 4;
                if small {
                    return Some(z);
                }
            }
            None
        };
        let mut starts: Vec<BigComplex> = Vec::new();
        let big = px.with_prec(lo).abs().to_f64() * self.w1.abs().to_f64().powi(2);
        if big > 1e3 {
            starts.push(target_lo.sqrt().recip());
        }
        let grid = 7;
        for i in 0..grid {
            for j in 0..grid {
                let s = BigFloat::from_f64((i as f64 + 0.5) / grid as f64, lo);
                let t = BigFloat::from_f64((j as f64 + 0.5) / grid as f64, lo);
                starts.push(w1.with_prec(lo).scale(&s).add(&self.w2.with_prec(lo).scale(&t)));
            }
        }
        let rough = starts
            .into_iter()
            .find_map(|s| newton(s, lo, &target_lo, 60).filter(|z| !self.is_lattice_point(&z.with_prec(self.bits))))
            .ok_or_else(|| HeegnerError::PrecisionLoss("elliptic logarithm search did not converge".into()))?;
        let z = newton(rough.with_prec(self.bits), self.bits, &px, 200)
            .ok_or_else(|| HeegnerError::PrecisionLoss("elliptic logarithm refinement did not converge".into()))?;
        // wp is even: choose the sign that matches wp'
        let (_, dp) = self.wp(&z).ok_or_else(|| HeegnerError::PrecisionLoss("log landed on the lattice".into()))?;
        let z = if dp.sub(&py).abs().cmp_value(&dp.add(&py).abs()).is_le() { z } else { z.neg() };
        Ok(self.reduce(&z).0)
    }
}

trait HalveC {
    fn mul_pow2_c(&self, k: i64) -> BigComplex;
}

impl HalveC for BigComplex {
    fn mul_pow2_c(&self, k: i64) -> BigComplex {
        BigComplex::new(self.re.mul_pow2(k), self.im.mul_pow2(k))
    }
}
