use serde::Serialize;

use super::Gl2Error;
use crate::arith::{is_prime, pow_mod};

/// Which congruence made `n` exceptional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum KWitness {
    /// `n | p^f - 1` and `p^i = 2 eps (mod n)`.
    Split { i: u32, eps: i8 },
    /// `n | p^f + 1` and `p^i = 2 (mod n)` with `i` taken mod `2f`.
    Nonsplit { i: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KExceptional {
    pub n: u64,
    pub exceptional: bool,
    pub witness: Option<KWitness>,
}

/// Decides whether the odd integer `n > 1` is `F_{p^f}`-exceptional.
pub fn k_exceptional(n: u64, p: u64, f: u32) -> Result<KExceptional, Gl2Error> {
    if n <= 1 || n.is_multiple_of(2) {
        return Err(Gl2Error::BadInput(format!("n = {n} must be odd and greater than 1")));
    }
    if p == 2 || !is_prime(p) {
        return Err(Gl2Error::BadInput(format!("p = {p} must be an odd prime")));
    }
    if f == 0 {
        return Err(Gl2Error::BadInput("f must be at least 1".into()));
    }
    let q = pow_mod(p, f as u64, n);
    let two = 2 % n;
    let minus_two = (n - two) % n;
    let mut witness = None;
    if q == 1 % n {
        'outer: for i in 0..f {
            let pi = pow_mod(p, i as u64, n);
            for (eps, target) in [(1i8, two), (-1i8, minus_two)] {
                if pi == target {
                    witness = Some(KWitness::Split { i, eps });
                    break 'outer;
                }
            }
        }
    } else if (q + 1).is_multiple_of(n) {
        for i in 0..2 * f {
            if pow_mod(p, i as u64, n) == two {
                witness = Some(KWitness::Nonsplit { i });
                break;
            }
        }
    }
    Ok(KExceptional { n, exceptional: witness.is_some(), witness })
}

/// All `F_{p^f}`-exceptional `n <= bound`, in increasing order.
pub fn list_k_exceptional(p: u64, f: u32, bound: u64) -> Result<Vec<u64>, Gl2Error> {
    let mut out = Vec::new();
    for n in (3..=bound).step_by(2) {
        if k_exceptional(n, p, f)?.exceptional {
            out.push(n);
        }
    }
    Ok(out)
}
