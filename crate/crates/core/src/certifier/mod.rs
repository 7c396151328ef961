//! Hypothesis checking and certificate assembly for an input `(E, D_K, p)`.
//!
//! Every hypothesis is checked by the lower modules and recorded with its
//! evidence. Conclusions are emitted only when the hypotheses of the active
//! route all pass. Sub-errors become failed hypotheses, not crashes.

mod batch;
mod pipeline;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use batch::{batch_certify, BatchEntry, BatchOutcome, BatchReport, BatchSummary};
pub use pipeline::{certify, index_consistency_report, IndexConsistencyReport, IndexPrediction};

pub const DEFAULT_PREC: u32 = 60;
pub const DEFAULT_SCAN_BOUND: u64 = 1000;
pub const DEFAULT_DEPTH: u32 = 3;
/// Largest order of a torsion point of an elliptic curve over a quadratic field.
pub const TORSION_ORDER_BOUND: i64 = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// `[a1, a2, a3, a4, a6]`.
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub curve: Vec<BigInt>,
    pub disc: i64,
    pub prime: u64,
    pub prec: u32,
    pub scan_bound: u64,
    pub depth: u32,
    /// External assertion of `rk E(K) = 1` and `Sha(E/K)[p^inf] = 0`.
    pub assert_rank_one_sha_trivial: bool,
}

impl CertificationRequest {
    pub fn new(curve: [i64; 5], disc: i64, prime: u64) -> Self {
        CertificationRequest {
            label: None,
            curve: curve.iter().map(|&a| BigInt::from(a)).collect(),
            disc,
            prime,
            prec: DEFAULT_PREC,
            scan_bound: DEFAULT_SCAN_BOUND,
            depth: DEFAULT_DEPTH,
            assert_rank_one_sha_trivial: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisStatus {
    Verified,
    Failed,
    /// Taken from the request's assertion.
    Assumed,
    /// Rests on a bounded numeric search for a `p`-th root over `K`.
    NumericNegativeBased,
}

impl HypothesisStatus {
    pub fn passes(self) -> bool {
        self != HypothesisStatus::Failed
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub id: String,
    pub status: HypothesisStatus,
    pub evidence: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub layer: String,
    pub statement: String,
    pub basis: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    /// Conclusions hold conditionally on an asserted hypothesis.
    PartiallyCertified,
    NotCertified,
}

impl Verdict {
    /// `0` when conclusions were emitted, `2` otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified | Verdict::PartiallyCertified => 0,
            Verdict::NotCertified => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "4.8")]
    Tower,
    #[serde(rename = "4.9")]
    Generic,
    #[serde(rename = "4.17/6.10")]
    EisensteinThree,
}

impl Route {
    pub fn tag(self) -> &'static str {
        match self {
            Route::Tower => "4.8",
            Route::Generic => "4.9",
            Route::EisensteinThree => "4.17/6.10",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// The divisibility guard for `p | u_K` found `y_K` outside `pE(K)`.
    pub inconsistency: bool,
    pub guard: Option<Value>,
    pub index_consistency: Option<Value>,
    pub heegner: Option<Value>,
    pub norm_relation: Option<Value>,
    pub errors: Vec<String>,
    pub limitations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub scan_bound: u64,
    pub den_bound: String,
    pub tol_digits: u32,
    pub m0_cap: u32,
    pub torsion_order_bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub precision: u32,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub request: CertificationRequest,
    pub route: Route,
    pub verdict: Verdict,
    pub hypotheses: Vec<HypothesisRecord>,
    pub conclusions: Vec<Conclusion>,
    pub diagnostics: Diagnostics,
    pub tool: ToolInfo,
}

impl Certificate {
    pub fn hypothesis(&self, id: &str) -> Option<&HypothesisRecord> {
        self.hypotheses.iter().find(|h| h.id == id)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.hypotheses.iter().filter(|h| h.status == HypothesisStatus::Failed).map(|h| h.id.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
