use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::param::Uniformization;
use super::points::{reconstruct_point, CurveK, PointK, ReconstructionBounds};
use super::trace::HeegnerResult;
use super::{ComplexOut, HeegnerError};
use crate::arith::{is_prime, BigComplex, BigFloat};

/// How far the `m_0` iteration is pushed.
pub const M0_CAP: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivisibilityVerdict {
    /// A witness `Q` over `K` with `pQ = P` exactly.
    Divisible,
    /// No candidate reconstructed within the stated bounds.
    NumericNegative,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisibilityReport {
    pub p: u64,
    pub verdict: DivisibilityVerdict,
    pub witness: Option<PointK>,
    pub witness_log: Option<ComplexOut>,
    #[serde(skip)]
    pub witness_log_exact: Option<BigComplex>,
    pub candidates_tried: usize,
    /// Largest `m` with `P` in `p^m E(K)` found by iterating, capped at `M0_CAP`;
    /// `None` when `P = O`.
    pub m0_estimate: Option<u32>,
    pub bounds: ReconstructionBounds,
    /// Logs are taken for the optimal parametrization with Manin constant 1.
    pub manin_constant_assumed: u32,
}

impl DivisibilityReport {
    pub fn divisible(&self) -> bool {
        self.verdict == DivisibilityVerdict::Divisible
    }
}

/// One division step: some `Q` over `K` with `pQ = P`, and its log.
pub fn divide_once(
    u: &Uniformization,
    c: &CurveK,
    point: &PointK,
    log: &BigComplex,
    p: u64,
) -> Result<(Option<(PointK, BigComplex)>, usize), HeegnerError> {
    if point.is_infinity() {
        return Ok((Some((PointK::Infinity, BigComplex::zero(u.bits()))), 0));
    }
    let lat = &u.lattice;
    let bounds = ReconstructionBounds::for_prec(u.prec());
    let pb = BigInt::from(p);
    let inv_p = BigFloat::one(u.bits()).div_int(p as i64);
    let grid: Vec<(u64, u64)> = (0..p).flat_map(|i| (0..p).map(move |j| (i, j))).collect();
    let found: Vec<Option<(PointK, BigComplex)>> = grid
        .par_iter()
        .map(|&(i, j)| {
            let shift = lat.lattice_point(&BigInt::from(i), &BigInt::from(j));
            let cand = log.add(&shift).scale(&inv_p);
            let num = lat.to_point(&cand)?;
            let q = reconstruct_point(c, &num, &bounds)?;
            // exactness gate
            (c.mul(&pb, &q) == *point).then_some((q, cand))
        })
        .collect();
    Ok((found.into_iter().flatten().next(), grid.len()))
}

/// Is `P` in `pE(K)`? Positive answers are exact; negative ones are numeric.
pub fn divisibility_with_log(
    u: &Uniformization,
    d: i64,
    point: &PointK,
    log: &BigComplex,
    p: u64,
) -> Result<DivisibilityReport, HeegnerError> {
    if !is_prime(p) {
        return Err(HeegnerError::BadInput(format!("{p} is not prime")));
    }
    let c = CurveK::new(&u.curve, d);
    if !c.contains(point) {
        return Err(HeegnerError::BadInput("point is not on the curve over K".into()));
    }
    let (first, tried) = divide_once(u, &c, point, log, p)?;
    let bounds = ReconstructionBounds::for_prec(u.prec());
    let Some((witness, wlog)) = first else {
        return Ok(DivisibilityReport {
            p,
            verdict: DivisibilityVerdict::NumericNegative,
            witness: None,
            witness_log: None,
            witness_log_exact: None,
            candidates_tried: tried,
            m0_estimate: Some(0),
            bounds,
            manin_constant_assumed: 1,
        });
    };
    let m0 = if point.is_infinity() {
        None
    } else {
        let mut m = 1;
        let (mut q, mut z) = (witness.clone(), wlog.clone());
        while m < M0_CAP && !q.is_infinity() {
            match divide_once(u, &c, &q, &z, p)?.0 {
                Some((q2, z2)) => {
                    (q, z) = (q2, z2);
                    m += 1;
                }
                None => break,
            }
        }
        Some(m)
    };
    Ok(DivisibilityReport {
        p,
        verdict: DivisibilityVerdict::Divisible,
        witness: Some(witness),
        witness_log: Some(ComplexOut::new(&wlog, u.prec() as usize)),
        witness_log_exact: Some(wlog),
        candidates_tried: tried,
        m0_estimate: m0,
        bounds,
        manin_constant_assumed: 1,
    })
}

/// Divisibility of an exact point, computing its elliptic logarithm first.
pub fn divisibility_of_point(u: &Uniformization, d: i64, point: &PointK, p: u64) -> Result<DivisibilityReport, HeegnerError> {
    let log = match point.embed(u.bits()) {
        None => BigComplex::zero(u.bits()),
        Some((x, y)) => u.lattice.elliptic_log(&x, &y)?,
    };
    divisibility_with_log(u, d, point, &log, p)
}

/// Divisibility of a Heegner trace by `p` over `K`.
pub fn p_divisibility_test(u: &Uniformization, r: &HeegnerResult, p: u64) -> Result<DivisibilityReport, HeegnerError> {
    if r.prec != u.prec() {
        return Err(HeegnerError::BadInput("trace was computed at another precision".into()));
    }
    divisibility_with_log(u, r.disc, &r.point, &r.log, p)
}
