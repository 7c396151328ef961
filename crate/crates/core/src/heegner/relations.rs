use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::divisibility::{divide_once, p_divisibility_test, DivisibilityReport};
use super::param::Uniformization;
use super::points::{CurveK, PointK};
use super::trace::{heegner_trace_with, trace_log, HeegnerResult};
use super::{ComplexOut, HeegnerError, Residual};
use crate::arith::{inv_mod, mod_u64, primes_up_to, BigComplex, PadicUnit};
use crate::elliptic::{a_p, count_points, is_good_ordinary, p_torsion_free_over_k, CurveQ, TorsionCertificate};
use crate::finite_gl2::FiniteField;
use crate::quadfield::QuadField;

#[derive(Clone, Debug, Serialize)]
pub struct NormRelationReport {
    pub identity: String,
    pub q: u64,
    pub a_q: i64,
    pub eta: i32,
    pub u_k: u64,
    /// `a_q - 1 - eta_K(q)`.
    pub coefficient: i64,
    pub classes: usize,
    pub lhs: ComplexOut,
    pub rhs: ComplexOut,
    /// Distance of `lhs - rhs` to the lattice, in units of `|omega1|`.
    pub residual: Residual,
    pub tolerance_log10: f64,
    pub pass: bool,
    pub prec: u32,
}

/// `u_K Tr_{H_q/K}(y_q) = (a_q - 1 - eta_K(q)) y_K`, compared as elliptic logs mod the lattice.
pub fn norm_relation_check(u: &Uniformization, f: &QuadField, q: u64) -> Result<NormRelationReport, HeegnerError> {
    let level = u.level();
    if level.is_multiple_of(q) || f.disc.unsigned_abs().is_multiple_of(q) {
        return Err(HeegnerError::BadInput(format!("q = {q} divides N D_K")));
    }
    let y_k = trace_log(u, f, 1)?;
    let y_q = trace_log(u, f, q)?;
    let a_q = a_p(&u.curve, q)?;
    let eta = f.eta(q);
    let coefficient = a_q - 1 - eta as i64;
    let lhs = y_q.z.mul_int(f.u_k as i64);
    let rhs = y_k.z.mul_int(coefficient);
    let residual = Residual::new(u.lattice.distance(&lhs.sub(&rhs)));
    let tolerance_log10 = -(u.prec() as f64) / 2.0;
    let identity = if f.u_k == 3 {
        "3 y_{K,q} = (a_q - 1 - eta_K(q)) y_K".to_string()
    } else {
        "u_K Tr_{H_q/K}(y_q) = (a_q - 1 - eta_K(q)) y_K".to_string()
    };
    let d = u.prec() as usize;
    Ok(NormRelationReport {
        identity,
        q,
        a_q,
        eta,
        u_k: f.u_k,
        coefficient,
        classes: y_q.forms.len(),
        lhs: ComplexOut::new(&u.lattice.reduce(&lhs).0, d),
        rhs: ComplexOut::new(&u.lattice.reduce(&rhs).0, d),
        pass: residual.log10() < tolerance_log10,
        residual,
        tolerance_log10,
        prec: u.prec(),
    })
}

/// Smallest primes `q` not dividing `N D_K`.
pub fn auxiliary_primes(level: u64, f: &QuadField, count: usize, bound: u64) -> Vec<u64> {
    primes_up_to(bound).into_iter().filter(|&q| !level.is_multiple_of(q) && !f.disc.unsigned_abs().is_multiple_of(q)).take(count).collect()
}

/// `#E(F_{p^f})` by running over the field, `p^f <= 2^20`.
pub fn count_over_extension(e: &CurveQ, p: u64, f: u32) -> Result<u64, HeegnerError> {
    let k = FiniteField::build(p, f).map_err(|err| HeegnerError::BadInput(err.to_string()))?;
    let a: Vec<_> = e.ainvs().iter().map(|v| k.from_int(mod_u64(v, p) as i64)).collect();
    let mut count = 1u64;
    for x in k.elements() {
        let x2 = k.mul(x, x);
        let rhs = k.add(k.add(k.mul(x2, x), k.mul(a[1], x2)), k.add(k.mul(a[3], x), a[4]));
        let lin = k.add(k.mul(a[0], x), a[2]);
        if p == 2 {
            // y^2 + lin y = rhs has 0 or 2 solutions, or 1 when lin = 0
            count += k.elements().filter(|&y| k.add(k.mul(y, y), k.mul(lin, y)) == rhs).count() as u64;
        } else {
            let disc = k.add(k.mul(lin, lin), k.mul(k.from_int(4), rhs));
            count += if disc == 0 { 1 } else if k.is_square(disc) { 2 } else { 0 };
        }
    }
    Ok(count)
}

/// Largest field size counted directly.
pub const DIRECT_COUNT_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, Serialize)]
pub struct UniversalNormReport {
    pub p: u64,
    pub a_p: i64,
    pub eta: i32,
    pub alpha: PadicUnit,
    /// `(alpha_p - 1)(1 - alpha_p^-1 eta_K(p)) mod p`.
    pub coefficient_mod_p: u64,
    pub unit: bool,
    pub non_unit_reason: Option<String>,
    /// `(#k(v), #E(k(v)))` for each `v | p` of `K`.
    pub local_counts: Vec<(u64, u64)>,
    pub count_method: String,
    pub product_mod_p: u64,
    /// `(1 - alpha_p)(1 - alpha_p eta_K(p)) mod p`.
    pub predicted_mod_p: u64,
    pub congruence_holds: bool,
}

/// Whether the universal-norm coefficient of `y_K` is a `p`-adic unit, with the
/// local point-count congruence checked against actual counts.
pub fn universal_norm_unit(e: &CurveQ, f: &QuadField, p: u64, precision: u32) -> Result<UniversalNormReport, HeegnerError> {
    let ord = is_good_ordinary(e, p, precision.max(1))?.ok_or(HeegnerError::NotOrdinary(p))?;
    let eta = f.eta(p);
    let pi = p as i64;
    let alpha = ord.alpha.residue_mod_p() as i64;
    let alpha_inv = inv_mod(alpha, p).expect("unit") as i64;
    let coefficient_mod_p = ((alpha - 1) * (1 - alpha_inv * eta as i64)).rem_euclid(pi) as u64;
    let unit = coefficient_mod_p != 0;
    let ap = ord.a_p.rem_euclid(pi);
    let non_unit_reason = if ap == 1 % pi {
        Some("a_p = 1 mod p".to_string())
    } else if ap == (eta as i64).rem_euclid(pi) {
        Some("a_p = eta_K(p) mod p".to_string())
    } else {
        None
    };
    let n_p = count_points(e, p)?.count;
    let (local_counts, count_method) = match eta {
        1 => (vec![(p, n_p), (p, n_p)], "two primes of degree one".to_string()),
        0 => (vec![(p, n_p)], "one ramified prime".to_string()),
        _ => {
            let q = p * p;
            if q <= DIRECT_COUNT_LIMIT {
                (vec![(q, count_over_extension(e, p, 2)?)], "inert prime, counted over F_{p^2}".to_string())
            } else {
                let a = ord.a_p as i128;
                let n = (q as i128) + 1 - (a * a - 2 * p as i128);
                (vec![(q, n as u64)], "inert prime, count from a_p".to_string())
            }
        }
    };
    let product_mod_p = local_counts.iter().fold(1u64, |acc, &(_, n)| acc * (n % p) % p);
    let predicted_mod_p = ((1 - alpha) * (1 - alpha * eta as i64)).rem_euclid(pi) as u64;
    Ok(UniversalNormReport {
        p,
        a_p: ord.a_p,
        eta,
        alpha: ord.alpha,
        coefficient_mod_p,
        unit,
        non_unit_reason,
        local_counts,
        count_method,
        product_mod_p,
        predicted_mod_p,
        congruence_holds: product_mod_p == predicted_mod_p,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZkResult {
    pub q: u64,
    /// `a_q - 1 - eta_K(q)`, prime to 3.
    pub coefficient: i64,
    /// `z_K = s y_K + t y_{K,q}` with `3s + t c = 1`.
    pub s: i64,
    pub t: i64,
    pub torsion: TorsionCertificate,
    pub y_k: HeegnerResult,
    pub y_kq: HeegnerResult,
    pub z_k: PointK,
    #[serde(skip)]
    pub z_log: BigComplex,
    pub z_log_out: ComplexOut,
    /// `3 z_K = y_K` over `K`.
    pub triple_is_y_k: bool,
    /// `y_{K,q} = c z_K` over `K`.
    pub y_kq_is_multiple: bool,
}

/// `z_K` with `3 z_K = y_K` over `K = Q(sqrt -3)`, built from one auxiliary trace.
pub fn z_k_construction(u: &Uniformization, f: &QuadField, bound: u64) -> Result<ZkResult, HeegnerError> {
    if f.disc != -3 {
        return Err(HeegnerError::PreconditionUnmet("z_K needs K = Q(sqrt -3)".into()));
    }
    let torsion = p_torsion_free_over_k(&u.curve, 3, -3, bound.max(100))?;
    if !torsion.is_certified() {
        return Err(HeegnerError::PreconditionUnmet("E(K)[3] = 0 is not certified".into()));
    }
    let level = u.level();
    let mut choice = None;
    for q in primes_up_to(bound) {
        if q == 3 || level.is_multiple_of(q) {
            continue;
        }
        let c = a_p(&u.curve, q)? - 1 - f.eta(q) as i64;
        if c.rem_euclid(3) != 0 {
            choice = Some((q, c));
            break;
        }
    }
    let (q, c) = choice.ok_or(HeegnerError::NoAuxiliaryPrime { bound })?;
    let y_k = heegner_trace_with(u, f, 1)?;
    let y_kq = heegner_trace_with(u, f, q)?;
    // 3s + tc = 1
    let t = if c.rem_euclid(3) == 1 { 1 } else { 2 };
    let s = (1 - t * c) / 3;
    let curve = CurveK::new(&u.curve, -3);
    let z_k = curve.add(&curve.mul_i(s, &y_k.point), &curve.mul_i(t, &y_kq.point));
    let z_log = u.lattice.reduce(&y_k.log.mul_int(s).add(&y_kq.log.mul_int(t))).0;
    let triple_is_y_k = curve.mul_i(3, &z_k) == y_k.point;
    let y_kq_is_multiple = curve.mul(&BigInt::from(c), &z_k) == y_kq.point;
    Ok(ZkResult {
        q,
        coefficient: c,
        s,
        t,
        torsion,
        y_k,
        y_kq,
        z_k,
        z_log_out: ComplexOut::new(&z_log, u.prec() as usize),
        z_log,
        triple_is_y_k,
        y_kq_is_multiple,
    })
}

/// Divisibility of `z_K` by 3, i.e. whether `y_K` lies in `9 E(K)`.
pub fn z_k_divisible_by_three(u: &Uniformization, z: &ZkResult) -> Result<bool, HeegnerError> {
    let c = CurveK::new(&u.curve, -3);
    Ok(divide_once(u, &c, &z.z_k, &z.z_log, 3)?.0.is_some())
}

/// `y_K` is divisible by `u_K` whenever `E(K)[p] = 0` and `p | u_K`.
pub fn unit_index_divisibility(u: &Uniformization, y_k: &HeegnerResult, f: &QuadField) -> Result<Option<DivisibilityReport>, HeegnerError> {
    if f.u_k == 1 || f.u_k.is_even() {
        return Ok(None);
    }
    p_divisibility_test(u, y_k, f.u_k).map(Some)
}
