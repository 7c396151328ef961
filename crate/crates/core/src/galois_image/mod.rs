//! Mod-`p` Galois image analysis from Frobenius traces: irreducibility
//! certificates, the reducible shape forced when every reduction has a
//! `p`-torsion point, and the decidable `H^1`-vanishing conditions over an
//! imaginary quadratic field.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, jacobi, primes_up_to};
use crate::elliptic::{ApCache, CurveQ, EllipticError};
use crate::quadfield::QuadField;

/// Default Frobenius scan bound.
pub const DEFAULT_SCAN_BOUND: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("scan bound {0} is below 10")]
    BoundTooSmall(u64),
    #[error("p = {0} must be an odd prime")]
    BadPrime(u64),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// How `x^2 - a_q x + q` factors mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Irreducible,
    Split,
    Repeated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobRow {
    pub q: u64,
    pub a_q: i64,
    pub a_q_mod_p: u64,
    /// `q + 1 - a_q mod p = det(1 - Fr(q))`.
    pub n_q_mod_p: u64,
    pub splitting: Splitting,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusTable {
    pub p: u64,
    pub bound: u64,
    pub rows: Vec<FrobRow>,
}

fn splitting(a_q: i64, q: u64, p: u64) -> Splitting {
    let disc = (a_q as i128 * a_q as i128 - 4 * q as i128).rem_euclid(p as i128) as u64;
    match jacobi(disc, p) {
        0 => Splitting::Repeated,
        1 => Splitting::Split,
        _ => Splitting::Irreducible,
    }
}

fn check_prime(p: u64) -> Result<(), GaloisError> {
    if p == 2 || !is_prime(p) {
        return Err(GaloisError::BadPrime(p));
    }
    Ok(())
}

/// Rows for every good `q <= bound` with `q` prime to `pN`.
pub fn frobenius_scan(e: &CurveQ, p: u64, bound: u64) -> Result<FrobeniusTable, GaloisError> {
    check_prime(p)?;
    if bound < 10 {
        return Err(GaloisError::BoundTooSmall(bound));
    }
    let cache = ApCache::new(e.clone());
    frobenius_scan_cached(&cache, p, bound)
}

pub fn frobenius_scan_cached(cache: &ApCache, p: u64, bound: u64) -> Result<FrobeniusTable, GaloisError> {
    check_prime(p)?;
    if bound < 10 {
        return Err(GaloisError::BoundTooSmall(bound));
    }
    let e = cache.curve();
    let qs: Vec<u64> = primes_up_to(bound).into_iter().filter(|&q| q != p && e.has_good_reduction(q)).collect();
    let rows = qs
        .par_iter()
        .map(|&q| {
            let a_q = cache.get(q)?;
            let pi = p as i64;
            Ok(FrobRow {
                q,
                a_q,
                a_q_mod_p: a_q.rem_euclid(pi) as u64,
                n_q_mod_p: (q as i64 + 1 - a_q).rem_euclid(pi) as u64,
                splitting: splitting(a_q, q, p),
            })
        })
        .collect::<Result<Vec<_>, EllipticError>>()?;
    Ok(FrobeniusTable { p, bound, rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `Fr(q)` has no eigenvalue in `F_p`, so `E[p]` has no stable line.
    IrreducibleCertified { witness: u64 },
    /// Every scanned `#E(F_q)` is divisible by `p`. Suggests a triangular shape;
    /// a finite scan proves nothing.
    ReducibleShapeSuspected { shape: String },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisImageReport {
    pub p: u64,
    pub bound: u64,
    pub rows_scanned: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Every scanned trace is `2 mod p`: the image of the scanned
    /// Frobenius elements fits in a unipotent shape.
    pub unipotent_shape: bool,
}

impl GaloisImageReport {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, Verdict::IrreducibleCertified { .. })
    }
}

pub fn verdict_from_table(t: &FrobeniusTable) -> GaloisImageReport {
    let verdict = if let Some(r) = t.rows.iter().find(|r| r.splitting == Splitting::Irreducible) {
        Verdict::IrreducibleCertified { witness: r.q }
    } else if !t.rows.is_empty() && t.rows.iter().all(|r| r.n_q_mod_p == 0) {
        Verdict::ReducibleShapeSuspected { shape: "(1,*;0,chi) or (chi,*;0,1)".into() }
    } else {
        Verdict::Inconclusive
    };
    GaloisImageReport {
        p: t.p,
        bound: t.bound,
        rows_scanned: t.rows.len(),
        verdict,
        unipotent_shape: !t.rows.is_empty() && t.rows.iter().all(|r| r.a_q_mod_p == 2 % t.p),
    }
}

pub fn certify_irreducible(e: &CurveQ, p: u64, bound: u64) -> Result<GaloisImageReport, GaloisError> {
    Ok(verdict_from_table(&frobenius_scan(e, p, bound)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityOverK {
    pub holds: bool,
    pub route: String,
    /// `D_K = p* = (-1)^((p-1)/2) p`, the only case where `rho(G_K) != rho(G_Q)`.
    pub d_k_is_p_star: bool,
    /// `p = 3`, `D_K = -3`: irreducible over `K` but possibly not absolutely.
    pub absolute_irreducibility_caveat: bool,
}

/// Irreducibility over `Q` passes to `K`.
pub fn irreducible_over_k(report: &GaloisImageReport, f: &QuadField, p: u64) -> Result<IrreducibilityOverK, GaloisError> {
    if !report.is_certified() || report.p != p {
        return Err(GaloisError::PreconditionUnmet("no irreducibility certificate over Q at this p".into()));
    }
    let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
    let d_k_is_p_star = f.disc == p_star;
    Ok(IrreducibilityOverK {
        holds: true,
        route: if d_k_is_p_star {
            "rho(G_K) has index 2 in rho(G_Q) and keeps an element with no rational eigenvalue"
        } else {
            "rho(G_K) = rho(G_Q) since K is linearly disjoint from Q(mu_p)"
        }
        .into(),
        d_k_is_p_star,
        absolute_irreducibility_caveat: p == 3 && f.disc == -3,
    })
}

/// Tags of the satisfied decidable vanishing conditions over an imaginary
/// quadratic `K`: `a''` for `p > 3`, `e'` since `k = F_p` for curves over `Q`.
/// Empty without an irreducibility certificate.
pub fn h1_vanishing_conditions(f: &QuadField, p: u64, report: &GaloisImageReport) -> Vec<&'static str> {
    if !report.is_certified() || f.disc >= 0 {
        return Vec::new();
    }
    let mut tags = Vec::new();
    if p > 3 {
        tags.push("a''");
    }
    tags.push("e'");
    tags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::build_field;

    #[test]
    fn splitting_examples() {
        // x^2 + x + 2 = x^2 - 2x + 5 mod 3, discriminant 2, a non-square
        assert_eq!(splitting(2, 5, 3), Splitting::Irreducible);
        assert_eq!(splitting(2, 1, 3), Splitting::Repeated);
    }

    #[test]
    fn curve_37a1_is_irreducible_mod_5() {
        let e = CurveQ::new([0, 0, 1, -1, 0]).unwrap();
        let r = certify_irreducible(&e, 5, 100).unwrap();
        let Verdict::IrreducibleCertified { witness } = r.verdict else { panic!("{r:?}") };
        let big = certify_irreducible(&e, 5, 500).unwrap();
        assert_eq!(big.verdict, Verdict::IrreducibleCertified { witness });
        let k = build_field(-7).unwrap();
        let o = irreducible_over_k(&r, &k, 5).unwrap();
        assert!(o.holds && !o.d_k_is_p_star);
        assert_eq!(h1_vanishing_conditions(&k, 5, &r), vec!["a''", "e'"]);
    }

    #[test]
    fn rational_torsion_blocks_a_witness() {
        // 11a1 has a rational 5-torsion point
        let e = CurveQ::new([0, -1, 1, -10, -20]).unwrap();
        let t = frobenius_scan(&e, 5, 400).unwrap();
        assert!(t.rows.iter().all(|r| r.n_q_mod_p == 0 && r.splitting != Splitting::Irreducible));
        let r = verdict_from_table(&t);
        assert!(matches!(r.verdict, Verdict::ReducibleShapeSuspected { .. }));
        assert!(irreducible_over_k(&r, &build_field(-7).unwrap(), 5).is_err());
        assert!(h1_vanishing_conditions(&build_field(-7).unwrap(), 5, &r).is_empty());
    }

    #[test]
    fn caveat_at_three() {
        let e = CurveQ::new([0, 0, 1, -1, 0]).unwrap();
        let r = certify_irreducible(&e, 3, 200).unwrap();
        assert!(r.is_certified());
        let o = irreducible_over_k(&r, &build_field(-3).unwrap(), 3).unwrap();
        assert!(o.absolute_irreducibility_caveat && o.d_k_is_p_star);
        assert_eq!(h1_vanishing_conditions(&build_field(-3).unwrap(), 3, &r), vec!["e'"]);
        assert!(matches!(frobenius_scan(&e, 2, 100), Err(GaloisError::BadPrime(2))));
        assert!(matches!(frobenius_scan(&e, 3, 5), Err(GaloisError::BoundTooSmall(5))));
    }
}
