//! Imaginary quadratic fields: reduced forms and class numbers, the Heegner
//! condition and level-compatible forms, genus factors, ring class degrees and
//! exact arithmetic in `K`.

mod field;
mod form;
mod kelem;

use thiserror::Error;

pub use field::{
    build_field, genus_decomposition, heegner_condition, heegner_forms, heegner_forms_of_conductor, is_fundamental,
    ring_class_degrees, smallest_beta, unit_index, GenusData, HeegnerCondition, HeegnerForm, HeegnerFormSet,
    QuadField, RingClassDegrees, FORM_SEARCH_CAP,
};
pub use form::{reduced_forms, Form};
pub use kelem::KElem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("{prime} divides {level} but does not split in K")]
    HeegnerConditionFails { level: u64, prime: u64 },
    #[error("{disc} has no square root modulo 4 * {level}")]
    NoSquareRoot { disc: i64, level: u64 },
    #[error("form search exhausted at leading coefficient bound {bound}")]
    SearchExhausted { bound: u64 },
    #[error("bad input: {0}")]
    BadInput(String),
}
