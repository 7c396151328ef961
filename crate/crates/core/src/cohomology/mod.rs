//! Exact group cohomology of finite groups on finite modules, invariant
//! Hom spaces, Sah witnesses, the filtration criterion and the
//! (b) <=> (c) check for irreducible subgroups of `GL_2(k)`.

mod filtration;
mod group;
mod module;
mod solve;
mod theorem;

use thiserror::Error;

pub use filtration::{filtration_check, FiltrationCheck, FiltrationGroup, LevelEvidence};
pub use group::FiniteGroup;
pub use module::{adjoint_matrix, matrix_group, restrict_scalars, EndKind, GModule, MatrixGroupModules};
pub use solve::{
    h0, h1, h1_all_pairs, h2_all_triples, h_groups, h_groups_with, hom_invariants, hom_invariants_gens,
    sah_witness, CohomologyOptions, CohomologyReport, VanishingRoute, MAX_ORDER_H1, MAX_ORDER_H2,
};
pub use theorem::{hom_end_v_invariants, theorem_5_16_check, DihedralForm, Theorem516Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("group of order {order} exceeds the limit {limit}")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("bad module: {0}")]
    BadModule(String),
    #[error("the subgroup does not act irreducibly")]
    NotIrreducible,
    #[error(transparent)]
    Gl2(#[from] crate::finite_gl2::Gl2Error),
}
