use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::curve::{CurveQ, Weierstrass};
use super::EllipticError;
use crate::arith::{factor_u64, inv_mod, isqrt, mod_u64, mul_mod, sqrt_mod_prime};

/// Above this prime, counting switches from enumeration to baby-step giant-step.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000;

const MAX_SAMPLES: usize = 48;
const CLOSURE_LIMIT: u64 = 1 << 20;

/// Affine point or the point at infinity.
pub type FpPoint = Option<(u64, u64)>;

/// A Weierstrass curve over `F_p` with general coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpCurve {
    pub p: u64,
    pub a: [u64; 5],
}

impl FpCurve {
    pub fn reduce(w: &Weierstrass, p: u64) -> Self {
        FpCurve { p, a: std::array::from_fn(|i| mod_u64(&w.a[i], p)) }
    }

    fn add_m(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }

    fn sub_m(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y % self.p) % self.p
    }

    fn mul_m(&self, x: u64, y: u64) -> u64 {
        mul_mod(x, y, self.p)
    }

    pub fn contains(&self, pt: &FpPoint) -> bool {
        let Some((x, y)) = *pt else { return true };
        let [a1, a2, a3, a4, a6] = self.a;
        let lhs = self.add_m(self.mul_m(y, y), self.add_m(self.mul_m(self.mul_m(a1, x), y), self.mul_m(a3, y)));
        let x2 = self.mul_m(x, x);
        let rhs = [self.mul_m(x2, x), self.mul_m(a2, x2), self.mul_m(a4, x), a6].into_iter().fold(0, |s, v| self.add_m(s, v));
        lhs == rhs
    }

    pub fn neg(&self, pt: &FpPoint) -> FpPoint {
        pt.map(|(x, y)| {
            let [a1, _, a3, _, _] = self.a;
            (x, self.sub_m(self.sub_m(0, y), self.add_m(self.mul_m(a1, x), a3)))
        })
    }

    pub fn add(&self, p1: &FpPoint, p2: &FpPoint) -> FpPoint {
        let (Some((x1, y1)), Some((x2, y2))) = (*p1, *p2) else {
            return p1.or(*p2);
        };
        let [a1, a2, a3, a4, a6] = self.a;
        let p = self.p;
        let (lambda, nu);
        if x1 == x2 {
            let y2neg = self.sub_m(self.sub_m(0, y2), self.add_m(self.mul_m(a1, x2), a3));
            if y1 == y2neg {
                return None;
            }
            // tangent
            let num = self.add_m(
                self.sub_m(self.add_m(self.mul_m(3, self.mul_m(x1, x1)), self.mul_m(2 * a2 % p, x1)), self.mul_m(a1, y1)),
                a4,
            );
            let den = self.add_m(self.add_m(self.mul_m(2, y1), self.mul_m(a1, x1)), a3);
            let dinv = inv_mod(den as i64, p).expect("nonzero denominator");
            lambda = self.mul_m(num, dinv);
            let x13 = self.mul_m(self.mul_m(x1, x1), x1);
            let num_nu = self.sub_m(
                self.add_m(self.add_m(self.sub_m(0, x13), self.mul_m(a4, x1)), self.mul_m(2, a6)),
                self.mul_m(a3, y1),
            );
            nu = self.mul_m(num_nu, dinv);
        } else {
            let dinv = inv_mod(self.sub_m(x2, x1) as i64, p).expect("distinct abscissae");
            lambda = self.mul_m(self.sub_m(y2, y1), dinv);
            nu = self.mul_m(self.sub_m(self.mul_m(y1, x2), self.mul_m(y2, x1)), dinv);
        }
        let x3 = self.sub_m(
            self.sub_m(self.add_m(self.add_m(self.mul_m(lambda, lambda), self.mul_m(a1, lambda)), p - a2 % p), x1),
            x2,
        );
        let y3 = self.sub_m(self.sub_m(0, self.mul_m(self.add_m(lambda, a1), x3)), self.add_m(nu, a3));
        Some((x3, y3))
    }

    pub fn mul(&self, k: u64, pt: &FpPoint) -> FpPoint {
        let mut acc = None;
        let mut base = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Point with abscissa `x`, if any.
    pub fn lift_x(&self, x: u64) -> FpPoint {
        let [a1, a2, a3, a4, a6] = self.a;
        let p = self.p;
        if p == 2 {
            return (0..2).map(|y| Some((x, y))).find(|pt| self.contains(pt)).flatten();
        }
        // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        let b2 = self.add_m(self.mul_m(a1, a1), self.mul_m(4, a2));
        let b4 = self.add_m(self.mul_m(2, a4), self.mul_m(a1, a3));
        let b6 = self.add_m(self.mul_m(a3, a3), self.mul_m(4, a6));
        let x2 = self.mul_m(x, x);
        let rhs = [self.mul_m(4, self.mul_m(x2, x)), self.mul_m(b2, x2), self.mul_m(2 * b4 % p, x), b6]
            .into_iter()
            .fold(0, |s, v| self.add_m(s, v));
        let r = sqrt_mod_prime(rhs, p)?;
        let half = inv_mod(2, p).expect("odd p");
        let y = self.mul_m(self.sub_m(r, self.add_m(self.mul_m(a1, x), a3)), half);
        Some((x, y))
    }

    /// The quadratic twist: by a non-square for odd `p`, Artin-Schreier at 2.
    pub fn twist(&self) -> FpCurve {
        let [a1, a2, a3, a4, a6] = self.a;
        let p = self.p;
        if p == 2 {
            return FpCurve { p, a: [a1, (a2 + a1 * a1) % 2, a3, a4, (a6 + a3 * a3) % 2] };
        }
        let d = (2..p).find(|&d| sqrt_mod_prime(d, p).is_none()).expect("non-square exists");
        let inv2 = inv_mod(2, p).unwrap();
        let inv4 = mul_mod(inv2, inv2, p);
        let b2 = self.add_m(self.mul_m(a1, a1), self.mul_m(4, a2));
        let b4 = self.add_m(self.mul_m(2, a4), self.mul_m(a1, a3));
        let b6 = self.add_m(self.mul_m(a3, a3), self.mul_m(4, a6));
        let d2 = self.mul_m(d, d);
        FpCurve {
            p,
            a: [
                0,
                self.mul_m(d, self.mul_m(b2, inv4)),
                0,
                self.mul_m(d2, self.mul_m(b4, inv2)),
                self.mul_m(self.mul_m(d2, d), self.mul_m(b6, inv4)),
            ],
        }
    }

    /// A random point; the point at infinity if no affine point turns up
    /// (over `F_2` and `F_3` there may be none).
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> FpPoint {
        for _ in 0..8 * self.p + 64 {
            let x = rng.gen_range(0..self.p);
            if let Some((x, y)) = self.lift_x(x) {
                // either root, so both points of a fibre are reached
                let pt = Some((x, y));
                return if rng.gen_bool(0.5) { self.neg(&pt) } else { pt };
            }
        }
        None
    }

    /// Exact order of `pt`, given a multiple `m` that annihilates it.
    pub fn order_from_multiple(&self, pt: &FpPoint, m: u64) -> u64 {
        let mut ord = m;
        for (q, _) in factor_u64(m) {
            while ord.is_multiple_of(q) && self.mul(ord / q, pt).is_none() {
                ord /= q;
            }
        }
        ord
    }

    /// All `m` in `[lo, hi]` with `m pt = O`, by baby-step giant-step.
    pub fn annihilators_in(&self, pt: &FpPoint, lo: u64, hi: u64) -> Vec<u64> {
        let width = hi - lo + 1;
        let b = isqrt(width) + 1;
        let mut baby: HashMap<FpPoint, Vec<u64>> = HashMap::new();
        let mut cur = None;
        for j in 0..b {
            baby.entry(cur).or_default().push(j);
            cur = self.add(&cur, pt);
        }
        let step = self.mul(b, pt);
        let mut giant = self.mul(lo, pt);
        let mut out = Vec::new();
        let mut i = 0;
        while lo + i * b <= hi {
            if let Some(js) = baby.get(&self.neg(&giant)) {
                out.extend(js.iter().map(|j| lo + i * b + j).filter(|&m| m <= hi));
            }
            giant = self.add(&giant, &step);
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Order of the subgroup generated by `gens`, when it is at most `limit`.
    fn subgroup_order(&self, gens: &[FpPoint], limit: u64) -> Option<u64> {
        let mut seen: HashSet<FpPoint> = HashSet::from([None]);
        let mut queue = VecDeque::from([None]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y) {
                    if seen.len() as u64 > limit {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(seen.len() as u64)
    }
}

/// `[p + 1 - 2 sqrt p, p + 1 + 2 sqrt p]` in integers.
pub fn hasse_interval(p: u64) -> (u64, u64) {
    let r = isqrt(4 * p);
    ((p + 1).saturating_sub(r).max(1), p + 1 + r)
}

/// `#E(F_p)` by enumeration with the quadratic character.
pub fn count_exhaustive(c: &FpCurve) -> u64 {
    let p = c.p;
    if p == 2 {
        return 1 + (0..2).flat_map(|x| (0..2).map(move |y| Some((x, y)))).filter(|pt| c.contains(pt)).count() as u64;
    }
    let mut square = vec![false; p as usize];
    for y in 0..p {
        square[mul_mod(y, y, p) as usize] = true;
    }
    let [a1, a2, a3, a4, a6] = c.a;
    let b2 = (mul_mod(a1, a1, p) + mul_mod(4, a2, p)) % p;
    let b4 = (mul_mod(2, a4, p) + mul_mod(a1, a3, p)) % p;
    let b6 = (mul_mod(a3, a3, p) + mul_mod(4, a6, p)) % p;
    let mut count = 1;
    for x in 0..p {
        let v = ((mul_mod(4, x, p) + b2) % p * x % p + 2 * b4 % p) % p;
        let v = (mul_mod(v, x, p) + b6) % p;
        count += if v == 0 {
            1
        } else if square[v as usize] {
            2
        } else {
            0
        };
    }
    count
}

/// `#E(F_p)` from point orders on the curve and its quadratic twist.
///
/// Candidates are the `N` in the Hasse interval with `lcm(orders on E) | N` and
/// `lcm(orders on E') | 2p + 2 - N`. If sampling leaves several, the orders of
/// the sampled subgroups replace the lcms; these reach the full groups, and
/// full-group orders pin `N` down. Ambiguity after that is reported.
pub fn count_bsgs(c: &FpCurve, seed: u64) -> Result<u64, EllipticError> {
    let p = c.p;
    let (lo, hi) = hasse_interval(p);
    let twist = c.twist();
    let total = 2 * p + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17));
    let (mut l_e, mut l_t) = (1u64, 1u64);
    let (mut pts_e, mut pts_t) = (Vec::new(), Vec::new());
    let cands = |de: &dyn Fn(u64) -> bool| (lo..=hi).filter(|&n| de(n)).collect::<Vec<u64>>();
    for _ in 0..MAX_SAMPLES {
        for (curve, l, pts, shift) in [(c, &mut l_e, &mut pts_e, false), (&twist, &mut l_t, &mut pts_t, true)] {
            let pt = curve.random_point(&mut rng);
            let (a, b) = if shift { (total - hi, total - lo) } else { (lo, hi) };
            let ms = curve.annihilators_in(&pt, a, b);
            let m = *ms.first().ok_or_else(|| EllipticError::Internal(format!("no annihilator in the Hasse interval at {p}")))?;
            let ord = curve.order_from_multiple(&pt, m);
            *l = num_integer::lcm(*l, ord);
            pts.push(pt);
        }
        let cs = cands(&|n| n % l_e == 0 && (total - n).is_multiple_of(l_t));
        if cs.len() == 1 {
            return Ok(cs[0]);
        }
    }
    if hi <= CLOSURE_LIMIT {
        if let (Some(s_e), Some(s_t)) = (c.subgroup_order(&pts_e, CLOSURE_LIMIT), twist.subgroup_order(&pts_t, CLOSURE_LIMIT)) {
            let cs = cands(&|n| n % s_e == 0 && (total - n).is_multiple_of(s_t));
            if cs.len() == 1 {
                return Ok(cs[0]);
            }
        }
    }
    Err(EllipticError::AmbiguousCount { p, candidates: cands(&|n| n % l_e == 0 && (total - n).is_multiple_of(l_t)) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    Exhaustive,
    Bsgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub p: u64,
    pub count: u64,
    pub a_p: i64,
    pub method: CountMethod,
}

/// `(#E(F_p), a_p)` on a model with good reduction at `p`.
pub fn count_points_model(w: &Weierstrass, p: u64) -> Result<(u64, i64), EllipticError> {
    let r = count_points_with(w, p, if p <= EXHAUSTIVE_LIMIT { CountMethod::Exhaustive } else { CountMethod::Bsgs })?;
    Ok((r.count, r.a_p))
}

pub fn count_points_with(w: &Weierstrass, p: u64, method: CountMethod) -> Result<PointCount, EllipticError> {
    if !crate::arith::is_prime(p) {
        return Err(EllipticError::BadInput(format!("{p} is not prime")));
    }
    if mod_u64(&w.disc, p) == 0 {
        return Err(EllipticError::BadReduction(p));
    }
    let c = FpCurve::reduce(w, p);
    let count = match method {
        CountMethod::Exhaustive => count_exhaustive(&c),
        CountMethod::Bsgs => count_bsgs(&c, 0x5eed)?,
    };
    let a_p = (p + 1) as i64 - count as i64;
    assert!((a_p as i128).pow(2) <= 4 * p as i128, "Hasse bound violated at {p}");
    Ok(PointCount { p, count, a_p, method })
}

/// `#E(F_p)` and `a_p` at a prime of good reduction.
pub fn count_points(e: &CurveQ, p: u64) -> Result<PointCount, EllipticError> {
    count_points_with(e.model(), p, if p <= EXHAUSTIVE_LIMIT { CountMethod::Exhaustive } else { CountMethod::Bsgs })
}
