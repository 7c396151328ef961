//! Exact and high-precision kernels for certifying Heegner-point hypotheses
//! of an elliptic curve `E/Q`, an imaginary quadratic field `K` and a prime `p`.

pub mod arith;
pub mod linalg;
pub mod finite_gl2;
pub mod cohomology;
pub mod elliptic;
pub mod quadfield;
pub mod galois_image;
pub mod heegner;
pub mod certifier;
mod serde_util;
