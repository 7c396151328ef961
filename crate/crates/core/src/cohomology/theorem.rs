use serde::Serialize;

use super::module::{adjoint_matrix, restrict_scalars, EndKind};
use super::{hom_invariants_gens, CohomologyError, GModule};
use crate::finite_gl2::{classify_subgroup, k_exceptional, Bucket, CartanKind, FiniteField, KExceptional, Mat2, SubgroupClass};
use crate::linalg::ModRing;

/// The three shapes of an irreducible, homothety-free subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DihedralForm {
    #[serde(rename = "C_n, J(psi')|C_n")]
    CyclicJ,
    #[serde(rename = "D_2n, I(psi)")]
    DihedralI,
    #[serde(rename = "D_2n, J(psi')")]
    DihedralJ,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem516Report {
    pub classification: SubgroupClass,
    /// `dim_{F_p} Hom(End^0_k(V), V)^H`, condition (b).
    pub hom_end0_dim: u32,
    /// `dim_{F_p} Hom(End_k(V), V)^H`.
    pub hom_end_dim: u32,
    pub form: Option<DihedralForm>,
    pub n: Option<u64>,
    pub k_exceptional: Option<KExceptional>,
    /// Verdict of (b).
    pub vanishing: bool,
    /// Verdict of (c): not one of the listed forms for a k-exceptional `n`.
    pub predicted_vanishing: bool,
    pub agree: bool,
}

/// `dim_{F_p} Hom_{F_p}(End_k(V), V)^H` (or with `End^0`), `H = <gens>`.
pub fn hom_end_v_invariants(k: &FiniteField, gens: &[Mat2], kind: EndKind) -> u32 {
    let ring = ModRing::field(k.p());
    let wa: Vec<_> = gens.iter().map(|g| adjoint_matrix(k, g, kind)).collect();
    let va: Vec<_> = gens.iter().map(|g| restrict_scalars(k, g)).collect();
    let w = GModule { ring, dim: wa[0].rows, action: wa };
    let v = GModule { ring, dim: va[0].rows, action: va };
    hom_invariants_gens(&w, &v, 0..gens.len())
}

/// Evaluates (b) by linear algebra and (c) from the Dickson bucket and the
/// k-exceptional test, for `H = <gens>` acting irreducibly on `k^2`.
pub fn theorem_5_16_check(k: &FiniteField, gens: &[Mat2]) -> Result<Theorem516Report, CohomologyError> {
    if k.p() == 2 {
        return Err(CohomologyError::BadModule("dim V = 2 must differ from p".into()));
    }
    let classification = classify_subgroup(gens, k)?;
    if !classification.irreducible {
        return Err(CohomologyError::NotIrreducible);
    }
    let hom_end0_dim = hom_end_v_invariants(k, gens, EndKind::TraceZero);
    let hom_end_dim = hom_end_v_invariants(k, gens, EndKind::Full);
    let mut form = None;
    let mut n = None;
    let mut kex = None;
    let mut predicted_vanishing = true;
    if !classification.has_nontrivial_homothety {
        if let Bucket::CartanNormalizer { kind, inside_cartan } = classification.bucket {
            form = Some(match (kind, inside_cartan) {
                (CartanKind::Nonsplit, true) => DihedralForm::CyclicJ,
                (CartanKind::Split, _) => DihedralForm::DihedralI,
                (CartanKind::Nonsplit, false) => DihedralForm::DihedralJ,
            });
            let nn = classification.cartan_intersection.expect("set for Cartan normalizers") as u64;
            n = Some(nn);
            if nn > 1 && nn % 2 == 1 {
                let e = k_exceptional(nn, k.p(), k.degree())?;
                predicted_vanishing = !e.exceptional;
                kex = Some(e);
            }
        }
    }
    let vanishing = hom_end0_dim == 0;
    Ok(Theorem516Report {
        classification,
        hom_end0_dim,
        hom_end_dim,
        form,
        n,
        k_exceptional: kex,
        vanishing,
        predicted_vanishing,
        agree: vanishing == predicted_vanishing,
    })
}
