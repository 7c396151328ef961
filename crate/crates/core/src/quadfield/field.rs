use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use super::form::{reduced_forms, Form};
use super::QuadError;
use crate::arith::{factor_u64, is_squarefree, kronecker};

/// Start of the Heegner form search: `4 N sqrt|D|`.
fn initial_bound(level: u64, disc: i64) -> u64 {
    4 * level * ((disc.unsigned_abs() as f64).sqrt().ceil() as u64).max(1)
}

/// Hard cap on the leading coefficient in the Heegner form search.
pub const FORM_SEARCH_CAP: u64 = 1 << 20;

pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// `u_K = #(O_K^x / Z^x)`.
pub fn unit_index(d: i64) -> u64 {
    match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

/// An imaginary quadratic field `K = Q(sqrt D)` with its class group as reduced forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadField {
    pub disc: i64,
    pub u_k: u64,
    pub class_number: usize,
    pub forms: Vec<Form>,
}

impl QuadField {
    /// `eta_K(l)`: `+1` split, `-1` inert, `0` ramified.
    pub fn eta(&self, l: u64) -> i32 {
        kronecker(self.disc, l)
    }
}

pub fn build_field(d: i64) -> Result<QuadField, QuadError> {
    if !is_fundamental(d) {
        return Err(QuadError::NotFundamental(d));
    }
    let forms = reduced_forms(d);
    Ok(QuadField { disc: d, u_k: unit_index(d), class_number: forms.len(), forms })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeegnerCondition {
    pub holds: bool,
    /// `(l, eta_K(l))` for each prime `l | N`.
    pub evidence: Vec<(u64, i32)>,
}

/// Every prime dividing `N` splits in `K`.
pub fn heegner_condition(level: u64, f: &QuadField) -> HeegnerCondition {
    let evidence: Vec<(u64, i32)> = factor_u64(level).into_iter().map(|(l, _)| (l, f.eta(l))).collect();
    HeegnerCondition { holds: evidence.iter().all(|&(_, e)| e == 1), evidence }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeegnerForm {
    /// `(a, b, c)` with `N | a` and `b = beta (mod 2N)`.
    pub form: Form,
    /// Reduced representative of its class.
    pub class: Form,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeegnerFormSet {
    pub level: u64,
    /// Conductor `m` of the order; the discriminant is `m^2 D_K`.
    pub conductor: u64,
    pub disc: i64,
    /// `beta^2 = disc (mod 4N)`, `0 <= beta < 2N`.
    pub beta: i64,
    pub forms: Vec<HeegnerForm>,
    /// Leading-coefficient bound at which every class was hit.
    pub search_bound: u64,
}

/// Smallest `beta >= 0` with `beta^2 = d (mod 4N)`.
pub fn smallest_beta(d: i64, level: u64) -> Option<i64> {
    let n = level as i64;
    (0..2 * n).find(|b| (b * b - d).rem_euclid(4 * n) == 0)
}

/// One Heegner form per class of discriminant `D_K`, with the smallest `beta`.
pub fn heegner_forms(f: &QuadField, level: u64) -> Result<HeegnerFormSet, QuadError> {
    let beta = smallest_beta(f.disc, level).ok_or(QuadError::NoSquareRoot { disc: f.disc, level })?;
    heegner_forms_of_conductor(f, level, 1, beta)
}

/// Heegner forms for the order of conductor `m`, compatible with the choice
/// `beta` made for `O_K`: the middle coefficients are `m beta (mod 2N)`.
pub fn heegner_forms_of_conductor(f: &QuadField, level: u64, m: u64, beta: i64) -> Result<HeegnerFormSet, QuadError> {
    let hc = heegner_condition(level, f);
    if !hc.holds {
        let l = hc.evidence.iter().find(|e| e.1 != 1).map(|e| e.0).unwrap_or(0);
        return Err(QuadError::HeegnerConditionFails { level, prime: l });
    }
    if m == 0 || m.gcd(&level) != 1 {
        return Err(QuadError::BadInput(format!("conductor {m} must be positive and prime to {level}")));
    }
    let n = level as i64;
    let disc = f.disc * (m * m) as i64;
    let beta_m = (beta * m as i64).rem_euclid(2 * n);
    if (beta_m * beta_m - disc).rem_euclid(4 * n) != 0 {
        return Err(QuadError::BadInput(format!("beta = {beta} is not a square root of {} mod {}", f.disc, 4 * n)));
    }
    let classes = reduced_forms(disc);
    let mut found: BTreeMap<Form, Form> = BTreeMap::new();
    let mut bound = initial_bound(level, disc);
    let mut a = n;
    loop {
        while a as u64 <= bound {
            // b in (-a, a] with b = beta_m (mod 2N); 2N | 2a so this is one residue class mod 2N
            let mut b = -a + 1 + (beta_m - (-a + 1)).rem_euclid(2 * n);
            while b <= a {
                let num = b * b - disc;
                if num % (4 * a) == 0 {
                    let form = Form::new(a, b, num / (4 * a));
                    if form.is_primitive() {
                        found.entry(form.reduce()).or_insert(form);
                    }
                }
                b += 2 * n;
            }
            if found.len() == classes.len() {
                let forms = classes.iter().map(|c| HeegnerForm { form: found[c], class: *c }).collect();
                return Ok(HeegnerFormSet { level, conductor: m, disc, beta: beta_m, forms, search_bound: bound });
            }
            a += n;
        }
        if bound >= FORM_SEARCH_CAP {
            return Err(QuadError::SearchExhausted { bound });
        }
        bound = (2 * bound).min(FORM_SEARCH_CAP);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusData {
    pub ramified: Vec<u64>,
    /// `(q, D_q)` with `prod D_q = D_K`.
    pub factors: Vec<(u64, i64)>,
}

pub fn genus_decomposition(f: &QuadField) -> GenusData {
    let d = f.disc;
    let ramified: Vec<u64> = factor_u64(d.unsigned_abs()).into_iter().map(|(q, _)| q).collect();
    let mut factors = Vec::new();
    let mut odd_part = 1i64;
    for &q in ramified.iter().filter(|&&q| q != 2) {
        let qs = if q % 4 == 1 { q as i64 } else { -(q as i64) };
        odd_part *= qs;
        factors.push((q, qs));
    }
    if d % 2 == 0 {
        factors.insert(0, (2, d / odd_part));
    }
    debug_assert_eq!(factors.iter().map(|f| f.1).product::<i64>(), d);
    debug_assert!(factors.iter().all(|f| f.1.rem_euclid(4) <= 1));
    GenusData { ramified, factors }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingClassDegrees {
    pub p: u64,
    pub eta: i32,
    /// `[H_1 : K] = h_K`.
    pub h1_over_k: u64,
    /// `[H_p : H_1] = (p - eta_K(p)) / u_K`.
    pub hp_over_h1: u64,
    /// `[H_{p^(n+1)} : H_{p^n}] = p` for `n >= 1`.
    pub step: u64,
}

impl RingClassDegrees {
    /// `#Pic(O_{p^n}) = h_K p^(n-1) (p - eta) / u_K` for `n >= 1`, `h_K` for `n = 0`.
    pub fn pic_order(&self, n: u32) -> u64 {
        if n == 0 {
            self.h1_over_k
        } else {
            self.h1_over_k * self.hp_over_h1 * self.p.pow(n - 1)
        }
    }
}

pub fn ring_class_degrees(f: &QuadField, p: u64) -> RingClassDegrees {
    let eta = f.eta(p);
    let num = (p as i64 - eta as i64) as u64;
    debug_assert_eq!(num % f.u_k, 0);
    RingClassDegrees { p, eta, h1_over_k: f.class_number as u64, hp_over_h1: num / f.u_k, step: p }
}
