use std::collections::BTreeSet;

use serde::Serialize;

use super::mat2::projective_line;
use super::{closure, FiniteField, Fq, Gl2Error, Mat2, DEFAULT_CLOSURE_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CartanKind {
    Split,
    Nonsplit,
}

/// Dickson bucket of a subgroup of `GL_2(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "bucket", rename_all = "snake_case")]
pub enum Bucket {
    TrivialOrScalar,
    Reducible,
    #[serde(rename = "contains_SL2_subfield")]
    ContainsSl2Subfield,
    CartanNormalizer { kind: CartanKind, inside_cartan: bool },
    #[serde(rename = "exceptional_A4_S4_A5")]
    ExceptionalA4S4A5,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupClass {
    #[serde(flatten)]
    pub bucket: Bucket,
    pub has_nontrivial_homothety: bool,
    pub irreducible: bool,
    pub order: usize,
    /// Order of the image in `PGL_2(k)`.
    pub projective_order: usize,
    pub det_image: Vec<Fq>,
    /// For Cartan normalizers: an element of maximal projective order, whose
    /// centralizer is the Cartan subgroup `C`.
    pub cartan_generator: Option<Mat2>,
    /// `#(H n C)` for Cartan normalizers.
    pub cartan_intersection: Option<usize>,
}

fn common_eigenline(gens: &[Mat2], k: &FiniteField) -> Option<[Fq; 2]> {
    projective_line(k).find(|&v| gens.iter().all(|g| g.fixes_line(v, k)))
}

/// Classifies `<gens>` by closure, an eigenline scan and the order of `PH`.
pub fn classify_subgroup(gens: &[Mat2], k: &FiniteField) -> Result<SubgroupClass, Gl2Error> {
    classify_with_bound(gens, k, DEFAULT_CLOSURE_BOUND)
}

pub fn classify_with_bound(gens: &[Mat2], k: &FiniteField, bound: usize) -> Result<SubgroupClass, Gl2Error> {
    let elements = closure(gens, k, bound)?;
    let order = elements.len();
    let scalars = elements.iter().filter(|m| m.is_scalar()).count();
    let det_image: Vec<Fq> = elements.iter().map(|m| m.det(k)).collect::<BTreeSet<_>>().into_iter().collect();
    let irreducible = common_eigenline(gens, k).is_none();
    let projective_order = order / scalars;
    let mut out = SubgroupClass {
        bucket: Bucket::Reducible,
        has_nontrivial_homothety: scalars > 1,
        irreducible,
        order,
        projective_order,
        det_image,
        cartan_generator: None,
        cartan_intersection: None,
    };
    if scalars == order {
        out.bucket = Bucket::TrivialOrScalar;
        return Ok(out);
    }
    if !irreducible {
        return Ok(out);
    }
    if (order as u64).is_multiple_of(k.p()) {
        out.bucket = Bucket::ContainsSl2Subfield;
        return Ok(out);
    }
    // p does not divide #H: PH is cyclic, dihedral, A4, S4 or A5
    let (g, max_proj) = elements
        .iter()
        .map(|m| (*m, m.projective_order(k) as usize))
        .max_by_key(|&(m, o)| (o, std::cmp::Reverse(m)))
        .unwrap();
    let exceptional = matches!((projective_order, max_proj), (12, 3) | (24, 4) | (60, 5));
    if exceptional {
        out.bucket = Bucket::ExceptionalA4S4A5;
        return Ok(out);
    }
    let disc = g.discriminant(k);
    let kind = if k.is_square(disc) { CartanKind::Split } else { CartanKind::Nonsplit };
    let inter = elements.iter().filter(|h| h.mul(&g, k) == g.mul(h, k)).count();
    out.bucket = Bucket::CartanNormalizer { kind, inside_cartan: inter == order };
    out.cartan_generator = Some(g);
    out.cartan_intersection = Some(inter);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_gl2::{make_i_psi, make_j_psi_prime, norm_one_elements};

    #[test]
    fn identity_is_trivial() {
        let k = FiniteField::build(5, 1).unwrap();
        let c = classify_subgroup(&[Mat2::identity()], &k).unwrap();
        assert_eq!(c.bucket, Bucket::TrivialOrScalar);
        assert!(!c.has_nontrivial_homothety);
        assert_eq!(c.order, 1);
    }

    #[test]
    fn sl2_f3() {
        let k = FiniteField::build(3, 1).unwrap();
        let gens = [Mat2::from_ints(&k, [1, 1, 0, 1]), Mat2::from_ints(&k, [1, 0, 1, 1])];
        let c = classify_subgroup(&gens, &k).unwrap();
        assert_eq!(c.order, 24);
        assert_eq!(c.bucket, Bucket::ContainsSl2Subfield);
        assert!(c.has_nontrivial_homothety);
        assert_eq!(c.det_image, vec![1]);
    }

    #[test]
    fn dihedral_split_image() {
        let k = FiniteField::build(7, 1).unwrap();
        let rep = make_i_psi(&k, 3, 2).unwrap();
        let c = classify_subgroup(&[rep.sigma, rep.s], &k).unwrap();
        assert_eq!(c.bucket, Bucket::CartanNormalizer { kind: CartanKind::Split, inside_cartan: false });
        assert!(c.irreducible);
        assert!(!c.has_nontrivial_homothety);
        assert_eq!(c.det_image, vec![1, 6]);
        assert_eq!(c.cartan_intersection, Some(3));
    }

    #[test]
    fn all_dihedral_images() {
        for (p, f) in [(5u64, 1u32), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2)] {
            let k = FiniteField::build(p, f).unwrap();
            let q = k.size();
            for n in (1..q).filter(|n| (q - 1).is_multiple_of(*n) && n % 2 == 1) {
                for g in k.elements().filter(|&g| g != 0 && k.order(g) == n) {
                    let rep = make_i_psi(&k, n, g).unwrap();
                    let c = classify_subgroup(&[rep.sigma, rep.s], &k).unwrap();
                    assert_eq!(c.irreducible, n != 1, "I(psi) p={p} f={f} n={n}");
                    assert!(!c.has_nontrivial_homothety);
                }
            }
            let d = k.nonsquare();
            let units = norm_one_elements(&k);
            for g in &units {
                let n = g.order(&k, d);
                if n % 2 == 0 {
                    continue;
                }
                let rep = make_j_psi_prime(&k, n, *g).unwrap();
                let c = classify_subgroup(&[rep.sigma, rep.s], &k).unwrap();
                assert_eq!(c.irreducible, n != 1, "J(psi') p={p} f={f} n={n}");
                assert!(!c.has_nontrivial_homothety);
                if n > 1 {
                    assert_eq!(c.bucket, Bucket::CartanNormalizer { kind: CartanKind::Nonsplit, inside_cartan: false });
                    let cyc = classify_subgroup(&[rep.sigma], &k).unwrap();
                    assert_eq!(cyc.bucket, Bucket::CartanNormalizer { kind: CartanKind::Nonsplit, inside_cartan: true });
                }
            }
        }
    }

    #[test]
    fn exceptional_bucket() {
        // SL_2(F_3) inside GL_2(F_5) has projective image A_4
        let k = FiniteField::build(5, 1).unwrap();
        let gens = [Mat2::from_ints(&k, [0, -1, 1, 0]), Mat2::from_ints(&k, [1, 2, 1, 3])];
        let c = classify_subgroup(&gens, &k).unwrap();
        assert_eq!(c.order, 24);
        assert_eq!(c.bucket, Bucket::ExceptionalA4S4A5);
    }

    #[test]
    fn f3_has_no_homothety_free_irreducible_subgroup() {
        let k = FiniteField::build(3, 1).unwrap();
        let all: Vec<Mat2> = (0..81u32)
            .map(|i| Mat2::new(i % 3, i / 3 % 3, i / 9 % 3, i / 27))
            .filter(|m| m.det(&k) != 0)
            .collect();
        assert_eq!(all.len(), 48);
        // every subgroup of GL_2(F_3) is generated by two elements
        let mut seen = BTreeSet::new();
        for a in &all {
            for b in &all {
                let h = closure(&[*a, *b], &k, 100).unwrap();
                if seen.insert(h.clone()) {
                    let c = classify_subgroup(&[*a, *b], &k).unwrap();
                    assert!(!(c.irreducible && !c.has_nontrivial_homothety), "{:?}", h);
                }
            }
        }
        assert!(seen.len() > 20);
    }
}
