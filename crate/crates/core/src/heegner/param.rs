use std::sync::RwLock;

use num_bigint::BigInt;

use super::lattice::{e_2pi_i, periods, PeriodLattice};
use super::HeegnerError;
use crate::arith::{BigComplex, BigFloat};
use crate::elliptic::{a_n_coefficients, CurveQ};

/// Hard cap on the number of `q`-series terms.
pub const MAX_TERMS: usize = 2_000_000;

/// A curve together with its period lattice and a growing table of `a_n`,
/// i.e. everything needed to evaluate `phi: X_0(N) -> E(C)` at one precision.
#[derive(Debug)]
pub struct Uniformization {
    pub curve: CurveQ,
    pub lattice: PeriodLattice,
    an: RwLock<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct ParamValue {
    /// `sum_{n <= terms} (a_n / n) q^n`.
    pub z: BigComplex,
    pub terms: usize,
    /// `log10` of `2 sum_{n > terms} |q|^n`.
    pub tail_log10: f64,
}

impl Uniformization {
    pub fn new(e: &CurveQ, prec: u32) -> Result<Self, HeegnerError> {
        Ok(Uniformization { curve: e.clone(), lattice: periods(e, prec)?, an: RwLock::new(vec![0]) })
    }

    pub fn prec(&self) -> u32 {
        self.lattice.prec
    }

    pub fn bits(&self) -> u32 {
        self.lattice.bits
    }

    pub fn level(&self) -> u64 {
        self.curve.conductor_u64().expect("conductor fits in u64")
    }

    /// `a_1 .. a_n`, index 0 unused.
    pub fn coefficients(&self, n: usize) -> Result<Vec<i64>, HeegnerError> {
        if self.an.read().expect("lock").len() <= n {
            let fresh = a_n_coefficients(&self.curve, (2 * n).max(64))?;
            let mut w = self.an.write().expect("lock");
            if w.len() < fresh.len() {
                *w = fresh;
            }
        }
        Ok(self.an.read().expect("lock")[..=n].to_vec())
    }

    /// Terms needed so that `2 |q|^(M+1) / (1 - |q|) < 10^-prec`.
    pub fn terms_for(&self, im_tau: f64) -> Result<(usize, f64), HeegnerError> {
        if im_tau <= 0.0 {
            return Err(HeegnerError::BadInput("tau must lie in the upper half plane".into()));
        }
        let t = 2.0 * std::f64::consts::PI * im_tau;
        let log10_q = -t / std::f64::consts::LN_10;
        let log10_geom = 2f64.log10() - (-(-t).exp_m1()).log10();
        let need = (self.prec() as f64 + log10_geom) / -log10_q;
        let m = need.ceil().max(1.0);
        if m > MAX_TERMS as f64 {
            return Err(HeegnerError::ConvergenceTooSlow { im_tau, terms: m as u64 });
        }
        let m = m as usize;
        Ok((m, log10_geom + (m as f64 + 1.0) * log10_q))
    }

    /// `phi(tau)` as an elliptic logarithm, with the tail bound enforced.
    pub fn phi(&self, tau: &BigComplex) -> Result<ParamValue, HeegnerError> {
        let (m, tail) = self.terms_for(tau.im.to_f64())?;
        self.phi_terms(tau, m, tail)
    }

    /// `phi(tau)` truncated at exactly `terms` terms.
    pub fn phi_with_terms(&self, tau: &BigComplex, terms: usize) -> Result<ParamValue, HeegnerError> {
        let (_, _) = self.terms_for(tau.im.to_f64())?;
        let t = 2.0 * std::f64::consts::PI * tau.im.to_f64();
        let tail = 2f64.log10() - (-(-t).exp_m1()).log10() - (terms as f64 + 1.0) * t / std::f64::consts::LN_10;
        self.phi_terms(tau, terms, tail)
    }

    fn phi_terms(&self, tau: &BigComplex, m: usize, tail_log10: f64) -> Result<ParamValue, HeegnerError> {
        let bits = self.bits();
        let an = self.coefficients(m)?;
        let q = e_2pi_i(&tau.with_prec(bits));
        let mut acc = BigComplex::zero(bits);
        for n in (1..=m).rev() {
            if an[n] != 0 {
                let c = BigFloat::from_ratio(&BigInt::from(an[n]), &BigInt::from(n), bits);
                acc = acc.add(&BigComplex::from_real(c));
            }
            acc = acc.mul(&q);
        }
        Ok(ParamValue { z: acc, terms: m, tail_log10 })
    }
}

/// One-shot `phi(tau)`; `n_max` overrides the automatic truncation.
pub fn modular_param(e: &CurveQ, tau: &BigComplex, n_max: Option<usize>, prec: u32) -> Result<ParamValue, HeegnerError> {
    let u = Uniformization::new(e, prec)?;
    match n_max {
        Some(n) => u.phi_with_terms(tau, n),
        None => u.phi(tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(re: f64, im: f64, bits: u32) -> BigComplex {
        BigComplex::from_f64(re, im, bits)
    }

    #[test]
    fn cusp_at_infinity_maps_to_zero() {
        let u = Uniformization::new(&CurveQ::new([0, 0, 1, -1, 0]).unwrap(), 40).unwrap();
        let near = u.phi(&tau(0.1, 2.0, u.bits())).unwrap().z.abs().to_f64();
        let nearer = u.phi(&tau(0.1, 6.0, u.bits())).unwrap().z.abs().to_f64();
        assert!(nearer < near * 1e-10 && nearer < 1e-15);
    }

    #[test]
    fn tail_bound_is_honest() {
        let u = Uniformization::new(&CurveQ::new([0, 0, 1, -1, 0]).unwrap(), 40).unwrap();
        let t = tau(0.2, 0.05, u.bits());
        let auto = u.phi(&t).unwrap();
        assert!(auto.tail_log10 < -40.0);
        let more = u.phi_with_terms(&t, auto.terms + 400).unwrap();
        assert!(auto.z.sub(&more.z).abs().to_f64() < 1e-40);
        assert!(matches!(u.terms_for(1e-9), Err(HeegnerError::ConvergenceTooSlow { .. })));
    }

    #[test]
    fn fricke_involution_on_37a1() {
        // rank one: f is invariant under W_37, so phi(-1/(37 tau)) - phi(tau) is constant
        let u = Uniformization::new(&CurveQ::new([0, 0, 1, -1, 0]).unwrap(), 60).unwrap();
        let bits = u.bits();
        let n = BigComplex::from_real(BigFloat::from_i64(37, bits));
        let diff = |t: BigComplex| {
            let w = n.mul(&t).recip().neg();
            u.phi(&w).unwrap().z.sub(&u.phi(&t).unwrap().z)
        };
        let c1 = diff(tau(0.013, 0.21, bits));
        let c2 = diff(tau(-0.05, 0.17, bits));
        assert!(u.lattice.distance(&c1.sub(&c2)).to_f64() < 1e-50);
        // the opposite sign does not give a constant
        let s = |t: BigComplex| {
            let w = n.mul(&t).recip().neg();
            u.phi(&w).unwrap().z.add(&u.phi(&t).unwrap().z)
        };
        let d = s(tau(0.013, 0.21, bits)).sub(&s(tau(-0.05, 0.17, bits)));
        assert!(u.lattice.distance(&d).to_f64() > 1e-5);
    }
}
