use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::param::Uniformization;
use super::points::{reconstruct_point, CurveK, PointK, ReconstructionBounds};
use super::{ComplexOut, HeegnerError, Residual};
use crate::arith::{is_prime, BigComplex, BigFloat};
use crate::elliptic::CurveQ;
use crate::quadfield::{heegner_forms, heegner_forms_of_conductor, smallest_beta, Form, QuadError, QuadField};

/// `tau = (-b + sqrt(b^2 - 4ac)) / 2a` in the upper half plane.
pub fn form_tau(f: &Form, bits: u32) -> BigComplex {
    let disc = f.disc();
    let two_a = BigFloat::from_i64(2 * f.a, bits);
    let re = BigFloat::from_i64(-f.b, bits).div(&two_a);
    let im = BigFloat::from_i64(-disc, bits).sqrt().div(&two_a);
    BigComplex::new(re, im)
}

/// Sum of `phi(tau_A)` over the Heegner forms of conductor `m`.
#[derive(Clone, Debug)]
pub struct TraceLog {
    pub conductor: u64,
    pub beta: i64,
    /// One form per class, sorted by class.
    pub forms: Vec<Form>,
    pub z: BigComplex,
    pub max_terms: usize,
}

/// Logs of the trace to `K` of the conductor-`m` Heegner point, `m = 1` or a prime not dividing `N D_K`.
pub fn trace_log(u: &Uniformization, f: &QuadField, m: u64) -> Result<TraceLog, HeegnerError> {
    let level = u.level();
    let set = if m == 1 {
        heegner_forms(f, level)?
    } else {
        if !is_prime(m) || level.is_multiple_of(m) || f.disc.unsigned_abs().is_multiple_of(m) {
            return Err(HeegnerError::BadInput(format!("conductor {m} must be 1 or a prime not dividing N D_K")));
        }
        let beta = smallest_beta(f.disc, level).ok_or(QuadError::NoSquareRoot { disc: f.disc, level })?;
        heegner_forms_of_conductor(f, level, m, beta)?
    };
    let bits = u.bits();
    let mut forms: Vec<Form> = set.forms.iter().map(|h| h.form).collect();
    forms.sort();
    let values = forms.par_iter().map(|g| u.phi(&form_tau(g, bits))).collect::<Result<Vec<_>, _>>()?;
    let mut z = BigComplex::zero(bits);
    let mut max_terms = 0;
    for v in &values {
        z = z.add(&v.z);
        max_terms = max_terms.max(v.terms);
    }
    let z = u.lattice.reduce(&z).0;
    Ok(TraceLog { conductor: m, beta: set.beta, forms, z, max_terms })
}

#[derive(Clone, Debug, Serialize)]
pub struct HeegnerResult {
    pub disc: i64,
    pub level: u64,
    pub conductor: u64,
    pub beta: i64,
    pub prec: u32,
    pub forms: Vec<String>,
    #[serde(rename = "log")]
    pub log_out: ComplexOut,
    #[serde(skip)]
    pub log: BigComplex,
    pub point: PointK,
    /// Distance between the numeric point and the embedding of `point`.
    pub residual: Residual,
    /// Same for the complex conjugate point against `exp` of the conjugate log.
    pub conjugate_residual: Residual,
    /// The log was a lattice point, so the trace is `O`.
    pub torsion_fallback: bool,
    pub max_terms: usize,
    pub bounds: ReconstructionBounds,
}

fn coord_residual(num: &(BigComplex, BigComplex), exact: &(BigComplex, BigComplex)) -> BigFloat {
    let rel = |a: &BigComplex, b: &BigComplex| {
        let s = BigFloat::one(a.prec()).add(&b.abs());
        a.sub(b).abs().div(&s)
    };
    rel(&num.0, &exact.0).max_abs(&rel(&num.1, &exact.1)).clone()
}

/// Exact point of `E(K)` with log `z`, checked against both embeddings.
pub fn exact_point(u: &Uniformization, d: i64, z: &BigComplex) -> Result<(PointK, Residual, Residual, bool), HeegnerError> {
    let bits = u.bits();
    let lat = &u.lattice;
    let Some(num) = lat.to_point(z) else {
        let zero = Residual::new(lat.distance(z));
        return Ok((PointK::Infinity, zero.clone(), zero, true));
    };
    let c = CurveK::new(&u.curve, d);
    let bounds = ReconstructionBounds::for_prec(u.prec());
    let p = reconstruct_point(&c, &num, &bounds).ok_or(HeegnerError::ReconstructionFailed { prec: u.prec() })?;
    let exact = p.embed(bits).expect("affine");
    let residual = coord_residual(&num, &exact);
    let conj_num = lat.to_point(&z.conj()).ok_or(HeegnerError::PrecisionLoss("conjugate log is a lattice point".into()))?;
    let conj_exact = p.conj().embed(bits).expect("affine");
    let conjugate = coord_residual(&conj_num, &conj_exact);
    Ok((p, Residual::new(residual), Residual::new(conjugate), false))
}

/// `y_K` (`m = 1`) or `y_{K,m}` on a prepared uniformization.
pub fn heegner_trace_with(u: &Uniformization, f: &QuadField, m: u64) -> Result<HeegnerResult, HeegnerError> {
    let t = trace_log(u, f, m)?;
    let (point, residual, conjugate_residual, torsion_fallback) = exact_point(u, f.disc, &t.z)?;
    let half = -(u.prec() as f64) / 2.0;
    if residual.log10() > half || conjugate_residual.log10() > half {
        return Err(HeegnerError::ReconstructionFailed { prec: u.prec() });
    }
    Ok(HeegnerResult {
        disc: f.disc,
        level: u.level(),
        conductor: m,
        beta: t.beta,
        prec: u.prec(),
        forms: t.forms.iter().map(|g| g.to_string()).collect(),
        log_out: ComplexOut::new(&t.z, u.prec() as usize),
        log: t.z,
        point,
        residual,
        conjugate_residual,
        torsion_fallback,
        max_terms: t.max_terms,
        bounds: ReconstructionBounds::for_prec(u.prec()),
    })
}

/// Heegner trace at `prec` digits, retried once at twice the precision.
pub fn heegner_trace(e: &CurveQ, f: &QuadField, m: u64, prec: u32) -> Result<HeegnerResult, HeegnerError> {
    let level = e.conductor_u64().ok_or_else(|| HeegnerError::BadInput("conductor too large".into()))?;
    if m.gcd(&level) != 1 {
        return Err(HeegnerError::BadInput(format!("conductor {m} is not prime to N = {level}")));
    }
    let u = Uniformization::new(e, prec)?;
    match heegner_trace_with(&u, f, m) {
        Err(HeegnerError::ReconstructionFailed { .. }) => heegner_trace_with(&Uniformization::new(e, 2 * prec)?, f, m),
        r => r,
    }
}
