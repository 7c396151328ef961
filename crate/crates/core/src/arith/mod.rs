//! Exact integer and modular arithmetic, fixed-precision real and complex
//! numbers, and the small analytic kernels built on them.

mod agm;
mod bigfloat;
mod complex;
mod integer;
mod padic;
mod reconstruct;

use thiserror::Error;

pub use agm::{agm, agm_complex};
pub use bigfloat::{bits_for_digits, BigFloat};
pub use complex::BigComplex;
pub use integer::{
    factor_big, factor_u64, inv_mod, is_prime, is_prime_big, is_squarefree, isqrt, jacobi, kronecker,
    legendre_big, mod_u64, mul_mod, pow_mod, primes_up_to, sqrt_mod_prime, valuation,
};
pub use padic::{hensel_unit_root, PadicUnit};
pub use reconstruct::rational_reconstruct;

/// Reduced fraction of big integers with positive denominator.
pub type BigRat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("p = {p} divides a_p = {a_p}; the Euler polynomial has no unit root")]
    NotOrdinary { a_p: i64, p: u64 },
    #[error("Newton step lost the root modulo {p}^{precision}")]
    HenselFailure { p: u64, precision: u32 },
}
