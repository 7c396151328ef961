use num_traits::ToPrimitive;
use serde::Serialize;

use super::curve::CurveQ;
use super::series::a_p;
use super::EllipticError;
use crate::arith::{hensel_unit_root, kronecker, primes_up_to, PadicUnit};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TamagawaProduct {
    pub total: u64,
    /// `(l, c_l)` for each `l | N`.
    pub factors: Vec<(u64, u64)>,
}

/// `c_Tam = prod_{l | N} c_l`.
pub fn c_tam(e: &CurveQ) -> TamagawaProduct {
    let factors: Vec<(u64, u64)> =
        e.local_data_all().iter().filter(|r| r.conductor_exponent > 0).map(|r| (r.prime, r.tamagawa)).collect();
    TamagawaProduct { total: factors.iter().map(|f| f.1).product(), factors }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinaryData {
    pub p: u64,
    pub a_p: i64,
    /// Unit root of `X^2 - a_p X + p`, with `beta_p = a_p - alpha_p`.
    pub alpha: PadicUnit,
    pub beta_valuation: u32,
    pub eta_k: Option<i32>,
}

/// `Some` iff `p` is a prime of good ordinary reduction, i.e. `p` divides neither `N` nor `a_p`.
pub fn is_good_ordinary(e: &CurveQ, p: u64, precision: u32) -> Result<Option<OrdinaryData>, EllipticError> {
    if !e.has_good_reduction(p) {
        return Ok(None);
    }
    let ap = a_p(e, p)?;
    if ap.rem_euclid(p as i64) == 0 {
        return Ok(None);
    }
    let alpha = hensel_unit_root(ap, p, precision)?;
    Ok(Some(OrdinaryData { p, a_p: ap, beta_valuation: alpha.beta_valuation, alpha, eta_k: None }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TorsionCertificate {
    /// `p` does not divide `#E(F_lambda)` for a prime `lambda | l` of `K`, and
    /// prime-to-`l` torsion injects into the reduction.
    Certified { l: u64, eta: i32, a_l: i64, residue_count: String },
    Inconclusive { bound: u64, primes_tried: usize },
}

impl TorsionCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, TorsionCertificate::Certified { .. })
    }
}

/// Certificate that `E(K)[p] = 0` for `K = Q(sqrt d)`, from one good prime `l <= bound`.
pub fn p_torsion_free_over_k(e: &CurveQ, p: u64, d: i64, bound: u64) -> Result<TorsionCertificate, EllipticError> {
    if p.is_multiple_of(2) {
        return Err(EllipticError::BadInput("p must be odd".into()));
    }
    let n = e.conductor().to_u64();
    let mut tried = 0;
    for l in primes_up_to(bound) {
        if l == p || !e.has_good_reduction(l) || n.is_some_and(|n| n % l == 0) {
            continue;
        }
        let eta = kronecker(d, l);
        if eta == 0 {
            continue;
        }
        tried += 1;
        let al = a_p(e, l)?;
        let split = (l as i128 + 1) - al as i128;
        let count = if eta == 1 { split } else { split * ((l as i128 + 1) + al as i128) };
        if count % p as i128 != 0 {
            return Ok(TorsionCertificate::Certified { l, eta, a_l: al, residue_count: count.to_string() });
        }
    }
    Ok(TorsionCertificate::Inconclusive { bound, primes_tried: tried })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tamagawa_products() {
        assert_eq!(c_tam(&CurveQ::new([0, 0, 1, -1, 0]).unwrap()).total, 1);
        let t = c_tam(&CurveQ::new([0, -1, 1, -10, -20]).unwrap());
        assert_eq!(t.factors, vec![(11, 5)]);
    }

    #[test]
    fn ordinary_unit_root() {
        let e = CurveQ::new([0, 0, 0, 1, 1]).unwrap();
        let o = is_good_ordinary(&e, 5, 6).unwrap().unwrap();
        assert_eq!(o.a_p, -3);
        assert_eq!(o.alpha.residue_mod_p(), 2);
        let m = o.alpha.modulus();
        let check = (&o.alpha.residue * (num_bigint::BigInt::from(o.a_p) - &o.alpha.residue) - 5) % &m;
        assert_eq!(check, num_bigint::BigInt::from(0));
        // bad and supersingular primes
        assert!(is_good_ordinary(&CurveQ::new([0, 0, 1, -1, 0]).unwrap(), 37, 4).unwrap().is_none());
        let cm = CurveQ::new([0, 0, 0, -1, 0]).unwrap();
        assert!(is_good_ordinary(&cm, 3, 4).unwrap().is_none());
    }

    #[test]
    fn torsion_certificates() {
        let e = CurveQ::new([0, 0, 1, -1, 0]).unwrap();
        let c = p_torsion_free_over_k(&e, 5, -7, 100).unwrap();
        let TorsionCertificate::Certified { l, eta, a_l, residue_count } = c else { panic!("expected a certificate") };
        let count: i128 = residue_count.parse().unwrap();
        assert_ne!(count % 5, 0);
        if eta == -1 {
            assert_eq!(count, (l as i128 + 1 - a_l as i128) * (l as i128 + 1 + a_l as i128));
        }
        // 11a1 has a rational 5-torsion point
        let e = CurveQ::new([0, -1, 1, -10, -20]).unwrap();
        assert!(!p_torsion_free_over_k(&e, 5, -7, 500).unwrap().is_certified());
    }
}
