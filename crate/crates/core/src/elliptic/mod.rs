//! Elliptic curves over `Q`: minimal models, Tate's algorithm, point counts,
//! Hecke coefficients, ordinary unit roots, torsion certificates over an
//! imaginary quadratic field and quadratic twists.

mod count;
mod curve;
mod local;
mod series;
mod tate;

use thiserror::Error;

pub use count::{
    count_bsgs, count_exhaustive, count_points, count_points_model, count_points_with, hasse_interval, CountMethod,
    FpCurve, FpPoint, PointCount, EXHAUSTIVE_LIMIT,
};
pub use curve::{minimal_model, quadratic_twist, CurveQ, Weierstrass};
pub use local::{c_tam, is_good_ordinary, p_torsion_free_over_k, OrdinaryData, TamagawaProduct, TorsionCertificate};
pub use series::{a_n_coefficients, a_p, ApCache};
pub use tate::{tate_local, Kodaira, ReductionData, ReductionType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("the Weierstrass equation is singular")]
    Singular,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("point count at {p} is ambiguous among {candidates:?}")]
    AmbiguousCount { p: u64, candidates: Vec<u64> },
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
    #[error("internal error: {0}")]
    Internal(String),
}
