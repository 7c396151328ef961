use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::tate::{tate_local, ReductionData};
use super::EllipticError;
use crate::arith::{factor_big, valuation, BigRat};

/// Integral Weierstrass coefficients `[a1, a2, a3, a4, a6]` and their covariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a: [BigInt; 5],
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

impl Weierstrass {
    pub fn new(a: [BigInt; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = &a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = 36 * &b2 * &b4 - 216 * &b6 - &b2 * &b2 * &b2;
        let disc = BigInt::zero() - &b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        Weierstrass { a, b2, b4, b6, b8, c4, c6, disc }
    }

    pub fn from_ints(a: [i64; 5]) -> Self {
        Self::new(a.map(BigInt::from))
    }

    /// `x = x' + r`, `y = y' + s x' + t` (unit scaling).
    pub fn rst(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let [a1, a2, a3, a4, a6] = &self.a;
        let na1 = a1 + 2 * s;
        let na2 = a2 - s * a1 + 3 * r - s * s;
        let na3 = a3 + r * a1 + 2 * t;
        let na4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let na6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        Self::new([na1, na2, na3, na4, na6])
    }

    /// Divides `a_i` by `u^i`; the caller guarantees exactness.
    pub fn scale_down(&self, u: &BigInt) -> Self {
        let pw = [1u32, 2, 3, 4, 6];
        let a = std::array::from_fn(|i| {
            let d = u.pow(pw[i]);
            debug_assert!(self.a[i].is_multiple_of(&d));
            &self.a[i] / d
        });
        Self::new(a)
    }

    /// The reduced model with covariants `(c4, c6)`, if one is integral:
    /// `a1, a3 in {0, 1}` and `a2 in {-1, 0, 1}`.
    pub fn from_c4_c6(c4: &BigInt, c6: &BigInt) -> Option<Self> {
        let twelve = BigInt::from(12);
        let mut b2 = (-c6).mod_floor(&twelve);
        if b2 > BigInt::from(6) {
            b2 -= &twelve;
        }
        let num4 = &b2 * &b2 - c4;
        if !num4.is_multiple_of(&BigInt::from(24)) {
            return None;
        }
        let b4: BigInt = num4 / 24;
        let num6: BigInt = 36 * &b2 * &b4 - c6 - &b2 * &b2 * &b2;
        if !num6.is_multiple_of(&BigInt::from(216)) {
            return None;
        }
        let b6: BigInt = num6 / 216;
        let two = BigInt::from(2);
        let a1 = b2.mod_floor(&two);
        let a3 = b6.mod_floor(&two);
        let (q2, r2) = (&b2 - &a1).div_rem(&BigInt::from(4));
        let (q4, r4) = (&b4 - &a1 * &a3).div_rem(&two);
        let (q6, r6) = (&b6 - &a3).div_rem(&BigInt::from(4));
        if !(r2.is_zero() && r4.is_zero() && r6.is_zero()) {
            return None;
        }
        let w = Self::new([a1, q2, a3, q4, q6]);
        (&w.c4 == c4 && &w.c6 == c6).then_some(w)
    }

    pub fn is_singular(&self) -> bool {
        self.disc.is_zero()
    }

    /// `y^2 + a1 xy + a3 y - (x^3 + a2 x^2 + a4 x + a6)`.
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let [a1, a2, a3, a4, a6] = &self.a;
        y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6)
    }
}

impl fmt::Display for Weierstrass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", a.join(","))
    }
}

/// An elliptic curve over `Q`, stored on its reduced globally minimal model.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct CurveQ {
    model: Weierstrass,
    /// The model the curve was given on was already minimal.
    input_minimal: bool,
    j: BigRat,
    conductor: BigInt,
    /// Local data at the primes dividing the minimal discriminant.
    local: Vec<ReductionData>,
}

/// Curves are equal when their reduced minimal models are.
impl PartialEq for CurveQ {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
    }
}

impl Eq for CurveQ {}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    #[serde(with = "crate::serde_util::bigint_vec")]
    ainvs: Vec<BigInt>,
    #[serde(with = "crate::serde_util::bigint", default)]
    discriminant: BigInt,
    #[serde(with = "crate::serde_util::bigint", default)]
    conductor: BigInt,
    #[serde(with = "crate::serde_util::bigrat", default)]
    j_invariant: BigRat,
}

impl From<CurveQ> for CurveRepr {
    fn from(e: CurveQ) -> Self {
        CurveRepr {
            ainvs: e.model.a.to_vec(),
            discriminant: e.model.disc.clone(),
            conductor: e.conductor,
            j_invariant: e.j,
        }
    }
}

impl TryFrom<CurveRepr> for CurveQ {
    type Error = EllipticError;

    fn try_from(r: CurveRepr) -> Result<Self, Self::Error> {
        let a: [BigInt; 5] = r.ainvs.try_into().map_err(|_| EllipticError::BadInput("expected five coefficients".into()))?;
        CurveQ::from_bigints(a)
    }
}

impl CurveQ {
    pub fn new(a: [i64; 5]) -> Result<Self, EllipticError> {
        Self::from_bigints(a.map(BigInt::from))
    }

    pub fn from_bigints(a: [BigInt; 5]) -> Result<Self, EllipticError> {
        let w = Weierstrass::new(a);
        if w.is_singular() {
            return Err(EllipticError::Singular);
        }
        let min = minimal_model(&w)?;
        let input_minimal = min.disc.abs() == w.disc.abs();
        let local: Vec<ReductionData> = factor_big(&min.disc)
            .into_iter()
            .map(|(p, _)| {
                let p = p.to_u64().ok_or_else(|| EllipticError::BadInput("prime factor beyond 64 bits".into()))?;
                Ok(tate_local(&min, p)?.0)
            })
            .collect::<Result<_, EllipticError>>()?;
        let conductor = local.iter().fold(BigInt::one(), |acc, r| acc * BigInt::from(r.prime).pow(r.conductor_exponent));
        let j = BigRat::new(&min.c4 * &min.c4 * &min.c4, min.disc.clone());
        Ok(CurveQ { model: min, input_minimal, j, conductor, local })
    }

    /// Parses `"a1,a2,a3,a4,a6"`.
    pub fn parse(s: &str) -> Result<Self, EllipticError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(EllipticError::BadInput(format!("expected five coefficients, got {}", parts.len())));
        }
        let mut a: [BigInt; 5] = Default::default();
        for (slot, p) in a.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| EllipticError::BadInput(format!("not an integer: {p:?}")))?;
        }
        Self::from_bigints(a)
    }

    pub fn model(&self) -> &Weierstrass {
        &self.model
    }

    pub fn ainvs(&self) -> &[BigInt; 5] {
        &self.model.a
    }

    pub fn input_minimal(&self) -> bool {
        self.input_minimal
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.model.disc
    }

    pub fn c4(&self) -> &BigInt {
        &self.model.c4
    }

    pub fn c6(&self) -> &BigInt {
        &self.model.c6
    }

    pub fn j_invariant(&self) -> &BigRat {
        &self.j
    }

    pub fn conductor(&self) -> &BigInt {
        &self.conductor
    }

    /// Conductor as a machine integer, when it fits.
    pub fn conductor_u64(&self) -> Option<u64> {
        self.conductor.to_u64()
    }

    pub fn bad_primes(&self) -> Vec<u64> {
        self.local.iter().filter(|r| r.conductor_exponent > 0).map(|r| r.prime).collect()
    }

    /// Local data at `p`: cached for primes of bad reduction, computed otherwise.
    pub fn local_data(&self, p: u64) -> Result<ReductionData, EllipticError> {
        match self.local.iter().find(|r| r.prime == p) {
            Some(r) => Ok(r.clone()),
            None => Ok(tate_local(&self.model, p)?.0),
        }
    }

    pub fn local_data_all(&self) -> &[ReductionData] {
        &self.local
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        !self.model.disc.is_multiple_of(&BigInt::from(p))
    }

    /// Whether `(x, y)` lies on the minimal model.
    pub fn contains(&self, x: &BigRat, y: &BigRat) -> bool {
        let [a1, a2, a3, a4, a6] = self.model.a.clone().map(BigRat::from_integer);
        let lhs = y * y + &a1 * x * y + &a3 * y;
        let rhs = x * x * x + &a2 * x * x + &a4 * x + &a6;
        lhs == rhs
    }
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.model)
    }
}

/// Reduced globally minimal model, by local minimalisation at each prime with
/// `p^12 | disc` followed by reconstruction from the scaled `(c4, c6)`.
pub fn minimal_model(w: &Weierstrass) -> Result<Weierstrass, EllipticError> {
    let mut u = BigInt::one();
    for (p, e) in factor_big(&w.disc) {
        if e < 12 {
            continue;
        }
        let pu = p.to_u64().ok_or_else(|| EllipticError::BadInput("prime factor beyond 64 bits".into()))?;
        let (_, local) = tate_local(w, pu)?;
        let drop = e - valuation(&local.disc, pu);
        debug_assert_eq!(drop % 12, 0);
        u *= p.pow(drop / 12);
    }
    let c4 = &w.c4 / u.pow(4);
    let c6 = &w.c6 / u.pow(6);
    Weierstrass::from_c4_c6(&c4, &c6).ok_or(EllipticError::Internal("no integral model for the minimal covariants".into()))
}

/// Minimal model of the quadratic twist by the fundamental discriminant `d`.
pub fn quadratic_twist(e: &CurveQ, d: i64) -> Result<CurveQ, EllipticError> {
    let d = BigInt::from(d);
    let a4 = -27 * e.c4() * &d * &d;
    let a6 = -54 * e.c6() * &d * &d * &d;
    CurveQ::from_bigints([BigInt::zero(), BigInt::zero(), BigInt::zero(), a4, a6])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariant_identity() {
        for a in [[0, 0, 1, -1, 0], [1, -1, 1, -2, 0], [0, 0, 0, -1, 0], [1, 0, 1, 4, -6]] {
            let w = Weierstrass::from_ints(a);
            assert_eq!(&w.c4 * &w.c4 * &w.c4 - &w.c6 * &w.c6, 1728 * &w.disc);
            assert_eq!(4 * &w.b8, &w.b2 * &w.b6 - &w.b4 * &w.b4);
        }
    }

    #[test]
    fn known_minimal_models() {
        let e = CurveQ::new([0, 0, 1, -1, 0]).unwrap();
        assert_eq!(e.discriminant(), &BigInt::from(37));
        assert_eq!(e.conductor(), &BigInt::from(37));
        assert!(e.input_minimal());
        // 11a1 given on a model scaled by u = 2
        let w = Weierstrass::from_ints([0, -1, 1, -10, -20]);
        let scaled = Weierstrass::from_ints([0, -4, 8, -160, -1280]);
        assert_eq!(&scaled.disc, &(&w.disc * BigInt::from(4096)));
        let e = CurveQ::from_bigints(scaled.a.clone()).unwrap();
        assert!(!e.input_minimal());
        assert_eq!(e.ainvs(), &w.a);
        assert_eq!(e.conductor(), &BigInt::from(11));
    }

    #[test]
    fn rst_preserves_discriminant() {
        let w = Weierstrass::from_ints([1, -1, 1, -2, 3]);
        let v = w.rst(&BigInt::from(5), &BigInt::from(-3), &BigInt::from(7));
        assert_eq!(v.disc, w.disc);
        assert_eq!(v.c4, w.c4);
        assert_eq!(Weierstrass::from_c4_c6(&w.c4, &w.c6).unwrap().disc, w.disc);
    }

    #[test]
    fn twists() {
        let e = CurveQ::new([0, 0, 1, -1, 0]).unwrap();
        assert_eq!(quadratic_twist(&e, 1).unwrap(), e);
        let t = quadratic_twist(&e, -7).unwrap();
        assert_eq!(t.j_invariant(), e.j_invariant());
        assert_eq!(quadratic_twist(&t, -7).unwrap(), e);
    }

    #[test]
    fn conductors_of_small_curves() {
        let table: [([i64; 5], u64); 18] = [
            ([0, -1, 1, -10, -20], 11),
            ([1, 0, 1, 4, -6], 14),
            ([1, 1, 1, -10, -10], 15),
            ([1, -1, 1, -1, -14], 17),
            ([0, 1, 1, -9, -15], 19),
            ([0, 1, 0, 4, 4], 20),
            ([1, 0, 0, -4, -1], 21),
            ([0, -1, 0, -4, 4], 24),
            ([1, 0, 1, -5, -8], 26),
            ([0, 0, 1, 0, -7], 27),
            ([1, 0, 1, 1, 2], 30),
            ([0, 0, 0, 4, 0], 32),
            ([0, 0, 0, 0, 1], 36),
            ([0, 0, 1, -1, 0], 37),
            ([1, -1, 0, -2, -1], 49),
            ([0, 0, 0, -4, 0], 64),
            ([0, 1, 1, -2, 0], 389),
            ([0, 0, 1, -7, 6], 5077),
        ];
        for (a, n) in table {
            let e = CurveQ::new(a).unwrap();
            assert_eq!(e.conductor_u64(), Some(n), "{a:?}");
        }
        let e = CurveQ::new([1, 0, 1, 4, -6]).unwrap();
        let c: Vec<u64> = e.local_data_all().iter().map(|r| r.tamagawa).collect();
        assert_eq!(c, vec![2, 3]);
    }

    #[test]
    fn parse_and_json() {
        let e = CurveQ::parse("0, 0, 1, -1, 0").unwrap();
        let s = serde_json::to_string(&e).unwrap();
        let back: CurveQ = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(CurveQ::parse("0,0,0,0,0").is_err());
        assert!(CurveQ::parse("1,2,3").is_err());
    }
}
