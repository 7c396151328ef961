use super::{BigComplex, BigFloat};

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &BigFloat, b: &BigFloat) -> BigFloat {
    assert!(a.signum() > 0 && b.signum() > 0, "agm needs positive arguments");
    let prec = a.prec();
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..(prec as usize + 64) {
        let d = a.sub(&b);
        if d.is_zero() || d.magnitude_bits() < a.magnitude_bits() - prec as i64 + 1 {
            break;
        }
        let next_a = a.add(&b).mul_pow2(-1);
        b = a.mul(&b).sqrt();
        a = next_a;
    }
    a.add(&b).mul_pow2(-1)
}

/// Complex AGM taking the "right" square root at every step, i.e. the one
/// with `|a' - b'| <= |a' + b'|`.
pub fn agm_complex(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let prec = a.prec();
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..(prec as usize + 64) {
        let d = a.sub(&b);
        if d.is_zero() || d.magnitude_bits() < a.magnitude_bits() - prec as i64 + 1 {
            break;
        }
        let next_a = a.add(&b).scale(&BigFloat::from_f64(0.5, prec));
        let mut next_b = a.mul(&b).sqrt();
        if next_a.sub(&next_b).norm_sqr().cmp_value(&next_a.add(&next_b).norm_sqr()).is_gt() {
            next_b = next_b.neg();
        }
        a = next_a;
        b = next_b;
    }
    a.add(&b).scale(&BigFloat::from_f64(0.5, prec))
}
