use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;

use super::count::count_points;
use super::curve::CurveQ;
use super::EllipticError;
use crate::arith::{is_prime, primes_up_to};

/// `a_p` at any prime: `p + 1 - #E(F_p)` when good, else from the reduction type.
pub fn a_p(e: &CurveQ, p: u64) -> Result<i64, EllipticError> {
    if !is_prime(p) {
        return Err(EllipticError::BadInput(format!("{p} is not prime")));
    }
    if e.has_good_reduction(p) {
        Ok(count_points(e, p)?.a_p)
    } else {
        Ok(e.local_data(p)?.a_l)
    }
}

/// `v[n] = a_n` for `1 <= n <= n_max`; `v[0] = 0`.
pub fn a_n_coefficients(e: &CurveQ, n_max: usize) -> Result<Vec<i64>, EllipticError> {
    if n_max == 0 {
        return Err(EllipticError::BadInput("n_max must be at least 1".into()));
    }
    let primes = primes_up_to(n_max as u64);
    let aps: Vec<i64> = primes.par_iter().map(|&p| a_p(e, p)).collect::<Result<_, _>>()?;
    let mut spf = vec![0usize; n_max + 1];
    let mut ap_of = vec![0i64; n_max + 1];
    for (&p, &a) in primes.iter().zip(&aps) {
        ap_of[p as usize] = a;
        for m in (p as usize..=n_max).step_by(p as usize) {
            if spf[m] == 0 {
                spf[m] = p as usize;
            }
        }
    }
    let mut a = vec![0i64; n_max + 1];
    a[1] = 1;
    for n in 2..=n_max {
        let p = spf[n];
        let mut pk = p;
        while n % (pk * p) == 0 {
            pk *= p;
        }
        let m = n / pk;
        if m > 1 {
            a[n] = a[pk] * a[m];
            continue;
        }
        // n is a prime power
        let ap = ap_of[p];
        a[n] = if pk == p {
            ap
        } else if e.has_good_reduction(p as u64) {
            ap * a[pk / p] - p as i64 * a[pk / (p * p)]
        } else {
            ap * a[pk / p]
        };
    }
    Ok(a)
}

/// Memoised `a_p`; concurrent readers see the same value for a key.
pub struct ApCache {
    curve: CurveQ,
    map: RwLock<HashMap<u64, i64>>,
}

impl ApCache {
    pub fn new(curve: CurveQ) -> Self {
        ApCache { curve, map: RwLock::new(HashMap::new()) }
    }

    pub fn curve(&self) -> &CurveQ {
        &self.curve
    }

    pub fn get(&self, p: u64) -> Result<i64, EllipticError> {
        if let Some(&v) = self.map.read().expect("cache lock").get(&p) {
            return Ok(v);
        }
        let v = a_p(&self.curve, p)?;
        Ok(*self.map.write().expect("cache lock").entry(p).or_insert(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn curve_37a1_coefficients() {
        let e = CurveQ::new([0, 0, 1, -1, 0]).unwrap();
        let a = a_n_coefficients(&e, 40).unwrap();
        assert_eq!(&a[1..12], &[1, -2, -3, 2, -2, 6, -1, 0, 6, 4, -5]);
        assert_eq!(a[37], -1);
    }

    #[test]
    fn multiplicativity() {
        let e = CurveQ::new([1, -1, 1, -2, 0]).unwrap();
        let a = a_n_coefficients(&e, 200).unwrap();
        for m in 1..=200usize {
            for n in 1..=200 / m {
                if m.gcd(&n) == 1 {
                    assert_eq!(a[m * n], a[m] * a[n]);
                }
            }
        }
    }

    #[test]
    fn cache_is_idempotent() {
        let cache = ApCache::new(CurveQ::new([0, 0, 1, -1, 0]).unwrap());
        let vals: Vec<i64> = (0..8).into_par_iter().map(|_| cache.get(101).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(cache.get(37).unwrap(), -1);
    }
}
