//! Heegner points by complex uniformization: periods, the modular
//! parametrization as a `q`-series, traces to `K`, exact reconstruction over
//! `K`, divisibility tests and the norm relations.

mod divisibility;
mod lattice;
mod param;
mod points;
mod relations;
mod trace;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, BigComplex, BigFloat};
use crate::elliptic::EllipticError;
use crate::quadfield::QuadError;

pub use divisibility::{
    divide_once, divisibility_of_point, divisibility_with_log, p_divisibility_test, DivisibilityReport, DivisibilityVerdict, M0_CAP,
};
pub use lattice::{periods, PeriodLattice, PeriodSummary, GUARD_BITS};
pub use param::{modular_param, ParamValue, Uniformization, MAX_TERMS};
pub use points::{point_height, reconstruct_k, reconstruct_point, CurveK, PointK, ReconstructionBounds};
pub use relations::{
    auxiliary_primes, count_over_extension, norm_relation_check, unit_index_divisibility, universal_norm_unit, z_k_construction,
    z_k_divisible_by_three, NormRelationReport, UniversalNormReport, ZkResult, DIRECT_COUNT_LIMIT,
};
pub use trace::{exact_point, form_tau, heegner_trace, heegner_trace_with, trace_log, HeegnerResult, TraceLog};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeegnerError {
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("q-series converges too slowly: Im(tau) = {im_tau:e} needs {terms} terms")]
    ConvergenceTooSlow { im_tau: f64, terms: u64 },
    #[error("no point over K matches the numeric value at {prec} digits")]
    ReconstructionFailed { prec: u32 },
    #[error("no auxiliary prime below {bound}")]
    NoAuxiliaryPrime { bound: u64 },
    #[error("p = {0} is not a prime of good ordinary reduction")]
    NotOrdinary(u64),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Decimal rendering of a complex number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexOut {
    pub re: String,
    pub im: String,
}

impl ComplexOut {
    pub fn new(z: &BigComplex, digits: usize) -> Self {
        ComplexOut { re: z.re.to_sci_string(digits), im: z.im.to_sci_string(digits) }
    }
}

/// A small nonnegative real, serialized in decimal scientific notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual(pub BigFloat);

impl Residual {
    pub fn new(v: BigFloat) -> Self {
        Residual(v.abs())
    }

    /// `log10` of the value; `-inf` for an exact zero.
    pub fn log10(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let k = self.0.magnitude_bits();
        self.0.mul_pow2(-k).to_f64().log10() + k as f64 * std::f64::consts::LOG10_2
    }
}

impl Serialize for Residual {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_sci_string(6))
    }
}
