use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::count::count_points_model;
use super::curve::Weierstrass;
use super::EllipticError;
use crate::arith::{inv_mod, is_prime, legendre_big, mod_u64, valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionType {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

/// Kodaira symbol of the special fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

impl std::str::FromStr for Kodaira {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "I0" => Kodaira::I0,
            "II" => Kodaira::II,
            "III" => Kodaira::III,
            "IV" => Kodaira::IV,
            "I0*" => Kodaira::I0Star,
            "IV*" => Kodaira::IVStar,
            "III*" => Kodaira::IIIStar,
            "II*" => Kodaira::IIStar,
            _ => {
                let body = s.strip_prefix('I').ok_or_else(|| format!("bad Kodaira symbol {s:?}"))?;
                match body.strip_suffix('*') {
                    Some(n) => Kodaira::InStar(n.parse().map_err(|_| format!("bad Kodaira symbol {s:?}"))?),
                    None => Kodaira::In(body.parse().map_err(|_| format!("bad Kodaira symbol {s:?}"))?),
                }
            }
        })
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Kodaira {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionData {
    pub prime: u64,
    pub reduction: ReductionType,
    pub kodaira: Kodaira,
    pub tamagawa: u64,
    pub a_l: i64,
    pub conductor_exponent: u32,
    /// `v_p` of the minimal discriminant.
    pub disc_valuation: u32,
}

fn md(x: &BigInt, p: u64) -> u64 {
    mod_u64(x, p)
}

fn divisible(x: &BigInt, p: u64, k: u32) -> bool {
    x.is_multiple_of(&BigInt::from(p).pow(k))
}

/// Whether `a T^2 + b T + c` has a root mod `p`.
fn quad_roots(a: &BigInt, b: &BigInt, c: &BigInt, p: u64) -> bool {
    let (a, b, c) = (md(a, p), md(b, p), md(c, p));
    if p == 2 {
        return c == 0 || (a + b + c) % 2 == 0;
    }
    if a == 0 {
        return b != 0 || c == 0;
    }
    let disc = BigInt::from(b) * b - BigInt::from(4) * a * c;
    legendre_big(&disc, p) >= 0
}

/// Roots of `T^3 + b T^2 + c T + d` mod `p`, counted without multiplicity.
fn cubic_root_count(b: &BigInt, c: &BigInt, d: &BigInt, p: u64) -> u64 {
    let (b, c, d) = (md(b, p) as u128, md(c, p) as u128, md(d, p) as u128);
    let q = p as u128;
    (0..q).filter(|&t| (((t + b) % q * t % q + c) % q * t % q + d).is_multiple_of(q)).count() as u64
}

/// A residue `r mod p` with `f(r) == 0`: the closed form for `p >= 5`, a search below.
fn residue_with(p: u64, closed: impl Fn() -> BigInt, test: impl Fn(&BigInt) -> bool) -> Result<BigInt, EllipticError> {
    if p >= 5 {
        let r = closed().mod_floor(&BigInt::from(p));
        if test(&r) {
            return Ok(r);
        }
    }
    (0..p)
        .map(BigInt::from)
        .find(|r| test(r))
        .ok_or_else(|| EllipticError::Internal(format!("Tate's algorithm found no admissible residue at {p}")))
}

fn inv(x: i64, p: u64) -> BigInt {
    BigInt::from(inv_mod(x.rem_euclid(p as i64), p).expect("invertible"))
}

/// Tate's algorithm at `p`. Returns the local data and a `p`-minimal model.
pub fn tate_local(w: &Weierstrass, p: u64) -> Result<(ReductionData, Weierstrass), EllipticError> {
    if !is_prime(p) {
        return Err(EllipticError::BadInput(format!("{p} is not prime")));
    }
    let bp = BigInt::from(p);
    let zero = BigInt::zero();
    let mut c = w.clone();
    loop {
        let n = valuation(&c.disc, p);
        let data = |reduction, kodaira, tamagawa, f: u32, a_l| ReductionData {
            prime: p,
            reduction,
            kodaira,
            tamagawa,
            a_l,
            conductor_exponent: f,
            disc_valuation: n,
        };
        if n == 0 {
            let (count, _) = count_points_model(&c, p)?;
            let a_l = (p + 1) as i64 - count as i64;
            return Ok((data(ReductionType::Good, Kodaira::I0, 1, 0, a_l), c));
        }

        // move the singular point of the reduction to (0, 0)
        let (x0, y0) = singular_point(&c, p)?;
        c = c.rst(&x0, &zero, &y0);
        let [a1, a2, a3, a4, a6] = c.a.clone();
        debug_assert!(divisible(&a3, p, 1) && divisible(&a4, p, 1) && divisible(&a6, p, 1));

        if !divisible(&c.b2, p, 1) {
            let split = quad_roots(&BigInt::from(1), &a1, &(-&a2), p);
            let (reduction, tam, a_l) = if split {
                (ReductionType::MultiplicativeSplit, n as u64, 1)
            } else {
                (ReductionType::MultiplicativeNonsplit, if n.is_multiple_of(2) { 2 } else { 1 }, -1)
            };
            return Ok((data(reduction, Kodaira::In(n), tam, 1, a_l), c));
        }
        if !divisible(&a6, p, 2) {
            return Ok((data(ReductionType::Additive, Kodaira::II, 1, n, 0), c));
        }
        if !divisible(&c.b8, p, 3) {
            return Ok((data(ReductionType::Additive, Kodaira::III, 2, n - 1, 0), c));
        }
        if !divisible(&c.b6, p, 3) {
            let tam = if quad_roots(&BigInt::from(1), &(&a3 / &bp), &(-(&a6 / (&bp * &bp))), p) { 3 } else { 1 };
            return Ok((data(ReductionType::Additive, Kodaira::IV, tam, n - 2, 0), c));
        }

        // p | a1, a2; p^2 | a3, a4; p^3 | a6
        let (s, t) = if p == 2 {
            let mut found = None;
            'search: for s in 0..2 {
                for t in 0..4 {
                    let v = c.rst(&zero, &BigInt::from(s), &BigInt::from(t));
                    if deep_shape(&v, p) {
                        found = Some((BigInt::from(s), BigInt::from(t)));
                        break 'search;
                    }
                }
            }
            found.ok_or_else(|| EllipticError::Internal("no shift to the deep shape at 2".into()))?
        } else {
            let half = BigInt::from(p.div_ceil(2));
            (-&a1 * &half, -&a3 * &half)
        };
        c = c.rst(&zero, &s, &t);
        if !deep_shape(&c, p) {
            return Err(EllipticError::Internal(format!("deep shape not reached at {p}")));
        }
        let [_, a2, _, a4, a6] = c.a.clone();
        let p2 = &bp * &bp;
        let p3 = &p2 * &bp;
        let b = &a2 / &bp;
        let cc = &a4 / &p2;
        let d = &a6 / &p3;
        let wdisc = 27 * &d * &d - &b * &b * &cc * &cc + 4 * &b * &b * &b * &d - 18 * &b * &cc * &d + 4 * &cc * &cc * &cc;
        let x = 3 * &cc - &b * &b;
        if !divisible(&wdisc, p, 1) {
            let tam = 1 + cubic_root_count(&b, &cc, &d, p);
            return Ok((data(ReductionType::Additive, Kodaira::I0Star, tam, n - 4, 0), c));
        }

        if !divisible(&x, p, 1) {
            // double root: move it to 0, then peel off one level at a time
            let is_double = |r: &BigInt| {
                let f = ((r + &b) * r + &cc) * r + &d;
                let df = (3 * r + 2 * &b) * r + &cc;
                divisible(&f, p, 1) && divisible(&df, p, 1)
            };
            let r = residue_with(p, || (&b * &cc - 9 * &d) * inv((2 * md(&x, p)) as i64, p), is_double)?;
            c = c.rst(&(&bp * r), &zero, &zero);
            let mut ix = 3u32;
            let mut iy = 3u32;
            let mut mx = p2.clone();
            let mut my = p2.clone();
            let tam;
            loop {
                let [_, a2, a3, _, a6] = c.a.clone();
                let a2t = &a2 / &bp;
                let a3t = &a3 / &my;
                let a6t = &a6 / (&mx * &my);
                if !divisible(&(&a3t * &a3t + 4 * &a6t), p, 1) {
                    tam = if quad_roots(&BigInt::from(1), &a3t, &(-&a6t), p) { 4 } else { 2 };
                    break;
                }
                let root = residue_with(
                    p,
                    || -&a3t * inv(2, p),
                    |t| divisible(&(t * t + &a3t * t - &a6t), p, 1),
                )?;
                c = c.rst(&zero, &zero, &(&my * root));
                my *= &bp;
                iy += 1;
                let [_, _, _, a4, a6] = c.a.clone();
                let a4t = &a4 / (&bp * &mx);
                let a6t = &a6 / (&mx * &my);
                if !divisible(&(&a4t * &a4t - 4 * &a6t * &a2t), p, 1) {
                    tam = if quad_roots(&a2t, &a4t, &a6t, p) { 4 } else { 2 };
                    break;
                }
                let a2u = md(&a2t, p);
                let root = residue_with(
                    p,
                    || -&a4t * inv((2 * a2u) as i64, p),
                    |r| divisible(&(&a2t * r * r + &a4t * r + &a6t), p, 1),
                )?;
                c = c.rst(&(&mx * root), &zero, &zero);
                mx *= &bp;
                ix += 1;
            }
            let m = ix + iy - 5;
            return Ok((data(ReductionType::Additive, Kodaira::InStar(m), tam, n - m - 4, 0), c));
        }

        // triple root
        let is_triple = |r: &BigInt| {
            let nb = &b + 3 * r;
            let nc = &cc + 2 * &b * r + 3 * r * r;
            let nd = ((r + &b) * r + &cc) * r + &d;
            divisible(&nb, p, 1) && divisible(&nc, p, 1) && divisible(&nd, p, 1)
        };
        let r = residue_with(p, || -&b * inv(3, p), is_triple)?;
        c = c.rst(&(&bp * r), &zero, &zero);
        let [_, _, a3, _, a6] = c.a.clone();
        let a3t = &a3 / &p2;
        let a6t = &a6 / (&p2 * &p2);
        if !divisible(&(&a3t * &a3t + 4 * &a6t), p, 1) {
            let tam = if quad_roots(&BigInt::from(1), &a3t, &(-&a6t), p) { 3 } else { 1 };
            return Ok((data(ReductionType::Additive, Kodaira::IVStar, tam, n - 6, 0), c));
        }
        let root = residue_with(p, || -&a3t * inv(2, p), |t| divisible(&(t * t + &a3t * t - &a6t), p, 1))?;
        c = c.rst(&zero, &zero, &(&p2 * root));
        if !divisible(&c.a[3], p, 4) {
            return Ok((data(ReductionType::Additive, Kodaira::IIIStar, 2, n - 7, 0), c));
        }
        if !divisible(&c.a[4], p, 6) {
            return Ok((data(ReductionType::Additive, Kodaira::IIStar, 1, n - 8, 0), c));
        }
        // not minimal at p
        c = c.scale_down(&bp);
    }
}

fn deep_shape(v: &Weierstrass, p: u64) -> bool {
    let [a1, a2, a3, a4, a6] = &v.a;
    divisible(a1, p, 1) && divisible(a2, p, 1) && divisible(a3, p, 2) && divisible(a4, p, 2) && divisible(a6, p, 3)
}

/// A singular point of the reduction mod `p`, lifted to integers.
fn singular_point(c: &Weierstrass, p: u64) -> Result<(BigInt, BigInt), EllipticError> {
    let [a1, a2, a3, a4, _] = &c.a;
    let ok = |x: &BigInt, y: &BigInt| {
        let f = c.eval(x, y);
        let fx = a1 * y - (3 * x * x + 2 * a2 * x + a4);
        let fy = 2 * y + a1 * x + a3;
        divisible(&f, p, 1) && divisible(&fx, p, 1) && divisible(&fy, p, 1)
    };
    if p >= 5 {
        let bp = BigInt::from(p);
        let r = if divisible(&c.c4, p, 1) {
            -&c.b2 * inv(12, p)
        } else {
            -(&c.c6 + &c.b2 * &c.c4) * inv((12 * md(&c.c4, p) % p) as i64, p)
        }
        .mod_floor(&bp);
        let t = (-(a1 * &r + a3) * inv(2, p)).mod_floor(&bp);
        if ok(&r, &t) {
            return Ok((r, t));
        }
    }
    for x in 0..p {
        for y in 0..p {
            let (x, y) = (BigInt::from(x), BigInt::from(y));
            if ok(&x, &y) {
                return Ok((x, y));
            }
        }
    }
    Err(EllipticError::Internal(format!("no singular point mod {p}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn local(a: [i64; 5], p: u64) -> ReductionData {
        tate_local(&Weierstrass::from_ints(a), p).unwrap().0
    }

    #[test]
    fn conductor_37_and_11() {
        let r = local([0, 0, 1, -1, 0], 37);
        assert_eq!(r.kodaira, Kodaira::In(1));
        assert_eq!(r.tamagawa, 1);
        assert_eq!(r.conductor_exponent, 1);
        // 11a1: split I5 at 11
        let r = local([0, -1, 1, -10, -20], 11);
        assert_eq!(r.kodaira, Kodaira::In(5));
        assert_eq!(r.reduction, ReductionType::MultiplicativeSplit);
        assert_eq!(r.tamagawa, 5);
        assert_eq!(r.a_l, 1);
    }

    #[test]
    fn additive_types() {
        // y^2 = x^3 + p, y^2 = x^3 + p^2, ... cycle through II, IV, I0*, IV*, II*
        let p = 5i64;
        let cases = [
            ([0, 0, 0, 0, p], Kodaira::II),
            ([0, 0, 0, 0, p * p], Kodaira::IV),
            ([0, 0, 0, 0, p.pow(3)], Kodaira::I0Star),
            ([0, 0, 0, 0, p.pow(4)], Kodaira::IVStar),
            ([0, 0, 0, 0, p.pow(5)], Kodaira::IIStar),
            ([0, 0, 0, p, 0], Kodaira::III),
            ([0, 0, 0, p.pow(3), 0], Kodaira::IIIStar),
        ];
        for (a, k) in cases {
            let r = local(a, p as u64);
            assert_eq!(r.kodaira, k, "{a:?}");
            assert_eq!(r.conductor_exponent, 2);
            assert!(r.tamagawa <= 4);
        }
        // p^6 on a6 is not minimal: back to good reduction
        assert_eq!(local([0, 0, 0, 0, p.pow(6)], 5).kodaira, Kodaira::I0);
    }

    #[test]
    fn in_star() {
        // y^2 = x^3 + p x^2 + p^(k+2) x ... here y^2 = x (x - p)(x - p^2 a) style
        let r = local([0, -(5 + 25), 0, 125, 0], 5);
        assert!(matches!(r.kodaira, Kodaira::InStar(_)), "{:?}", r.kodaira);
        assert_eq!(r.conductor_exponent, 2);
        assert!([2, 4].contains(&r.tamagawa));
    }

    #[test]
    fn kodaira_strings_round_trip() {
        for k in [Kodaira::I0, Kodaira::In(7), Kodaira::InStar(3), Kodaira::IIStar, Kodaira::I0Star] {
            assert_eq!(k.to_string().parse::<Kodaira>().unwrap(), k);
        }
    }
}
