//! Finite fields, `GL_2` over them, Cartan subgroups, the dihedral
//! representations `I(psi)` and `J(psi')`, k-exceptional integers and
//! Dickson-style bucketing of subgroups.

mod classify;
mod dihedral;
mod exceptional;
mod field;
mod mat2;

use thiserror::Error;

pub use classify::{classify_subgroup, classify_with_bound, Bucket, CartanKind, SubgroupClass};
pub use dihedral::{
    base_change_witness, make_i_psi, make_j_psi_prime, norm_one_elements, BaseChange, CartanSubgroup, DihedralKind,
    DihedralRep, K2Elem,
};
pub use exceptional::{k_exceptional, list_k_exceptional, KExceptional, KWitness};
pub use field::{FiniteField, Fq, MAX_FIELD_SIZE};
pub use mat2::{closure, Mat2, DEFAULT_CLOSURE_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gl2Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("F_{p}^{f} is too large for table arithmetic")]
    FieldTooLarge { p: u64, f: u32 },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("generator has order {actual}, expected {expected}")]
    OrderMismatch { expected: u64, actual: u64 },
    #[error("generator does not have norm one")]
    NormNotOne,
    #[error("group closure exceeded {bound} elements")]
    ClosureOverflow { bound: usize },
}
