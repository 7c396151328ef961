use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{rational_reconstruct, BigComplex, BigFloat, BigRat};
use crate::elliptic::CurveQ;
use crate::quadfield::KElem;

/// A point of `E(K)` with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointK {
    Infinity,
    Affine { x: KElem, y: KElem },
}

impl PointK {
    pub fn is_infinity(&self) -> bool {
        matches!(self, PointK::Infinity)
    }

    pub fn conj(&self) -> Self {
        match self {
            PointK::Infinity => PointK::Infinity,
            PointK::Affine { x, y } => PointK::Affine { x: x.conj(), y: y.conj() },
        }
    }

    pub fn is_rational(&self) -> bool {
        match self {
            PointK::Infinity => true,
            PointK::Affine { x, y } => x.is_rational() && y.is_rational(),
        }
    }

    /// Complex embedding with `sqrt(D) = i sqrt|D|`.
    pub fn embed(&self, bits: u32) -> Option<(BigComplex, BigComplex)> {
        match self {
            PointK::Infinity => None,
            PointK::Affine { x, y } => Some((x.embed(bits), y.embed(bits))),
        }
    }
}

impl fmt::Display for PointK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointK::Infinity => write!(f, "O"),
            PointK::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// `E` base-changed to `K = Q(sqrt d)`, with the group law over `K`.
#[derive(Clone, Debug)]
pub struct CurveK {
    pub d: i64,
    a: [KElem; 5],
}

impl CurveK {
    pub fn new(e: &CurveQ, d: i64) -> Self {
        let a = e.ainvs().clone().map(|v| KElem::from_rat(BigRat::from_integer(v), d));
        CurveK { d, a }
    }

    pub fn contains(&self, p: &PointK) -> bool {
        match p {
            PointK::Infinity => true,
            PointK::Affine { x, y } => {
                let [a1, a2, a3, a4, a6] = &self.a;
                let lhs = y.mul(y).add(&a1.mul(x).mul(y)).add(&a3.mul(y));
                let rhs = x.mul(x).mul(x).add(&a2.mul(x).mul(x)).add(&a4.mul(x)).add(a6);
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, p: &PointK) -> PointK {
        match p {
            PointK::Infinity => PointK::Infinity,
            PointK::Affine { x, y } => {
                PointK::Affine { x: x.clone(), y: y.neg().sub(&self.a[0].mul(x)).sub(&self.a[2]) }
            }
        }
    }

    pub fn add(&self, p: &PointK, q: &PointK) -> PointK {
        let (PointK::Affine { x: x1, y: y1 }, PointK::Affine { x: x2, y: y2 }) = (p, q) else {
            return if p.is_infinity() { q.clone() } else { p.clone() };
        };
        let [a1, a2, a3, a4, a6] = &self.a;
        let lambda;
        let nu;
        if x1 == x2 {
            let denom = y1.mul_int(2).add(&a1.mul(x1)).add(a3);
            if y1.add(y2).add(&a1.mul(x2)).add(a3).is_zero() || denom.is_zero() {
                return PointK::Infinity;
            }
            let num = x1.mul(x1).mul_int(3).add(&a2.mul(x1).mul_int(2)).add(a4).sub(&a1.mul(y1));
            lambda = num.div(&denom).expect("nonzero");
            let num_nu = x1.mul(x1).mul(x1).neg().add(&a4.mul(x1)).add(&a6.mul_int(2)).sub(&a3.mul(y1));
            nu = num_nu.div(&denom).expect("nonzero");
        } else {
            let dx = x2.sub(x1);
            lambda = y2.sub(y1).div(&dx).expect("nonzero");
            nu = y1.mul(x2).sub(&y2.mul(x1)).div(&dx).expect("nonzero");
        }
        let x3 = lambda.mul(&lambda).add(&a1.mul(&lambda)).sub(a2).sub(x1).sub(x2);
        let y3 = lambda.add(a1).mul(&x3).add(&nu).add(a3).neg();
        PointK::Affine { x: x3, y: y3 }
    }

    pub fn mul(&self, n: &BigInt, p: &PointK) -> PointK {
        if n.is_negative() {
            return self.mul(&-n, &self.neg(p));
        }
        let mut acc = PointK::Infinity;
        let mut base = p.clone();
        let mut k = n.clone();
        while !k.is_zero() {
            if k.bit(0) {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if !k.is_zero() {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    pub fn mul_i(&self, n: i64, p: &PointK) -> PointK {
        self.mul(&BigInt::from(n), p)
    }
}

/// Parameters of the exactification step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructionBounds {
    /// Decimal digits of the numeric input.
    pub prec: u32,
    /// Largest denominator tried, `10^(prec/3)` by default.
    #[serde(with = "crate::serde_util::bigint")]
    pub den_bound: BigInt,
    /// Agreement required, in decimal digits relative to the coordinate size.
    pub tol_digits: u32,
}

impl ReconstructionBounds {
    pub fn for_prec(prec: u32) -> Self {
        ReconstructionBounds { prec, den_bound: BigInt::from(10).pow(prec / 3), tol_digits: prec / 2 }
    }
}

fn reconstruct_real(v: &BigFloat, b: &ReconstructionBounds) -> Option<BigRat> {
    let bits = v.prec();
    let scale = v.abs().to_f64().max(1.0);
    let tol = BigFloat::from_f64(scale, bits).div(&BigFloat::from_bigint(&BigInt::from(10).pow(b.tol_digits), bits));
    if v.abs().cmp_value(&tol).is_le() {
        return Some(BigRat::zero());
    }
    rational_reconstruct(v, &b.den_bound, &tol)
}

/// `x + y sqrt(d)` from its complex embedding, if both parts are rationals of bounded height.
pub fn reconstruct_k(z: &BigComplex, d: i64, b: &ReconstructionBounds) -> Option<KElem> {
    let bits = z.prec();
    let s = BigFloat::from_i64(d.abs(), bits).sqrt();
    let x = reconstruct_real(&z.re, b)?;
    let y = reconstruct_real(&z.im.div(&s), b)?;
    Some(KElem::new(x, y, d))
}

/// Exact point over `K` matching a numeric point, checked on the curve.
pub fn reconstruct_point(c: &CurveK, pt: &(BigComplex, BigComplex), b: &ReconstructionBounds) -> Option<PointK> {
    let x = reconstruct_k(&pt.0, c.d, b)?;
    let y = reconstruct_k(&pt.1, c.d, b)?;
    let p = PointK::Affine { x, y };
    c.contains(&p).then_some(p)
}

/// Largest coordinate height, for reporting.
pub fn point_height(p: &PointK) -> BigInt {
    match p {
        PointK::Infinity => BigInt::one(),
        PointK::Affine { x, y } => x.height_bound().max(y.height_bound()),
    }
}
