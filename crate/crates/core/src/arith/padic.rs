use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

/// A unit of `Z_p` known modulo `p^k`, together with the co-root
/// `beta = a_p - alpha` of the Euler polynomial it was lifted from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicUnit {
    pub p: u64,
    pub k: u32,
    #[serde(with = "crate::serde_util::bigint")]
    pub residue: BigInt,
    #[serde(with = "crate::serde_util::bigint")]
    pub beta: BigInt,
    /// `v_p(beta mod p^k)`, capped at `k`.
    pub beta_valuation: u32,
}

impl PadicUnit {
    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k)
    }

    pub fn residue_mod_p(&self) -> u64 {
        (&self.residue % BigInt::from(self.p)).to_u64().unwrap_or(0)
    }

    /// Inverse modulo `p^k`.
    pub fn inverse(&self) -> BigInt {
        let m = self.modulus();
        let e = self.residue.extended_gcd(&m);
        e.x.mod_floor(&m)
    }
}

/// Lifts the unit root of `X^2 - a_p X + p` to precision `p^k`.
///
/// Newton's method starts at `a_p mod p`; each step doubles the precision and
/// is checked against the exact residue before continuing.
pub fn hensel_unit_root(a_p: i64, p: u64, k: u32) -> Result<PadicUnit, ArithError> {
    let bp = BigInt::from(p);
    let a = BigInt::from(a_p);
    if a.mod_floor(&bp).is_zero() {
        return Err(ArithError::NotOrdinary { a_p, p });
    }
    let k = k.max(1);
    let f = |x: &BigInt| x * x - &a * x + &bp;
    let mut alpha = a.mod_floor(&bp);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = bp.pow(prec);
        let fx = f(&alpha);
        let dfx = (BigInt::from(2) * &alpha - &a).mod_floor(&m);
        let inv = dfx.extended_gcd(&m).x.mod_floor(&m);
        alpha = (&alpha - fx * inv).mod_floor(&m);
        if !f(&alpha).mod_floor(&m).is_zero() {
            return Err(ArithError::HenselFailure { p, precision: prec });
        }
    }
    let m = bp.pow(k);
    debug_assert!(f(&alpha).mod_floor(&m).is_zero());
    let beta = (&a - &alpha).mod_floor(&m);
    let beta_valuation = if beta.is_zero() {
        k
    } else {
        super::valuation(&beta, p).min(k)
    };
    Ok(PadicUnit { p, k, residue: alpha, beta, beta_valuation })
}

impl std::fmt::Display for PadicUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k == 1 {
            write!(f, "{} mod {}", self.residue, self.p)
        } else {
            write!(f, "{} mod {}^{}", self.residue, self.p, self.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_and_examples() {
        let r = hensel_unit_root(1, 5, 1).unwrap();
        assert_eq!(r.residue, BigInt::from(1));
        let r = hensel_unit_root(-2, 3, 2).unwrap();
        assert_eq!(r.residue, BigInt::from(4));
        assert_eq!(hensel_unit_root(2, 2, 1), Err(ArithError::NotOrdinary { a_p: 2, p: 2 }));
    }

    #[test]
    fn exhaustive_root_oracle() {
        for p in [3u64, 5, 7, 11] {
            for a_p in -10i64..=10 {
                if a_p.rem_euclid(p as i64) == 0 {
                    continue;
                }
                for k in 1..=4u32 {
                    let m = p.pow(k) as i64;
                    let r = hensel_unit_root(a_p, p, k).unwrap();
                    let roots: Vec<i64> = (0..m)
                        .filter(|x| (x * x - a_p * x + p as i64).rem_euclid(m) == 0)
                        .filter(|x| (x - a_p).rem_euclid(p as i64) == 0)
                        .collect();
                    assert_eq!(roots, vec![r.residue.to_i64().unwrap()]);
                    let prod = (&r.residue * &r.beta).mod_floor(&BigInt::from(m));
                    assert_eq!(prod, BigInt::from(p as i64 % m));
                    if k >= 2 {
                        assert_eq!(r.beta_valuation, 1);
                    } else {
                        assert!(r.beta_valuation >= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn long_precision() {
        let r = hensel_unit_root(-2, 3, 40).unwrap();
        let m = r.modulus();
        let a = BigInt::from(-2);
        let f: BigInt = (&r.residue * &r.residue - &a * &r.residue + BigInt::from(3)).mod_floor(&m);
        assert!(f.is_zero());
        let unit: BigInt = &r.residue * r.inverse() - BigInt::from(1);
        assert!(unit.mod_floor(&m).is_zero());
    }
}
