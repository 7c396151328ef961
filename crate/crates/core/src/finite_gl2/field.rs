use serde::Serialize;

use super::Gl2Error;
use crate::arith::is_prime;

/// Element of a [`FiniteField`]: the coefficient vector `(c_0, .., c_{f-1})`
/// of `c_0 + c_1 x + ..` packed as the base-`p` integer `sum c_i p^i`.
pub type Fq = u32;

/// Largest field size for which log tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// `F_{p^f}` as `F_p[x]/(g)` for the lexicographically smallest monic
/// irreducible `g` of degree `f`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<Fq>,
    log: Vec<u32>,
}

impl Serialize for FiniteField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FiniteField", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("polynomial", &self.polynomial_string())?;
        st.end()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

// Polynomials over F_p, coefficients low to high, no trailing zeros.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mulmod(a: &[u32], b: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    poly_rem(prod.into_iter().map(|x| x as u32).collect(), g, p)
}

fn poly_rem(mut a: Vec<u32>, g: &[u32], p: u32) -> Vec<u32> {
    let n = g.len() - 1;
    let lead_inv = crate::arith::inv_mod(g[n] as i64, p as u64).expect("unit lead");
    let p64 = p as u64;
    while a.len() > n {
        let top = a.len() - 1;
        let c = a[top] as u64 * lead_inv % p64;
        if c != 0 {
            for (k, &gk) in g.iter().enumerate() {
                let idx = top - n + k;
                a[idx] = ((a[idx] as u64 + p64 - c * gk as u64 % p64) % p64) as u32;
            }
        }
        a.pop();
    }
    trim(a)
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_pow_p(a: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut base = a.to_vec();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, g, p);
        }
        base = poly_mulmod(&base, &base, g, p);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic `g` of degree `n` over `F_p`.
pub(crate) fn is_irreducible(g: &[u32], p: u32) -> bool {
    let n = g.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // frob[i] = x^{p^i} mod g
    let mut frob = vec![poly_rem(x.clone(), g, p)];
    for i in 0..n {
        let next = poly_pow_p(&frob[i], g, p);
        frob.push(next);
    }
    if !poly_sub(&frob[n], &frob[0], p).is_empty() {
        return false;
    }
    for (r, _) in crate::arith::factor_u64(n as u64) {
        let h = poly_sub(&frob[n / r as usize], &x, p);
        if poly_gcd(g, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    pub fn build(p: u64, f: u32) -> Result<Self, Gl2Error> {
        if !is_prime(p) {
            return Err(Gl2Error::CompositeCharacteristic(p));
        }
        if f == 0 {
            return Err(Gl2Error::BadInput("field degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(f)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or(Gl2Error::FieldTooLarge { p, f })?;
        let p32 = p as u32;
        // Candidates in lexicographic order of (c_{f-1}, .., c_0).
        let mut modulus = None;
        for t in 0..q {
            let mut coeffs = vec![0u32; f as usize + 1];
            let mut rest = t;
            for i in 0..f as usize {
                coeffs[i] = (rest % p) as u32;
                rest /= p;
            }
            coeffs[f as usize] = 1;
            if is_irreducible(&coeffs, p32) {
                modulus = Some(coeffs);
                break;
            }
        }
        let modulus = modulus.expect("irreducible polynomials exist in every degree");
        let mut field = FiniteField { p: p32, f, q: q as u32, modulus, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(field)
    }

    fn to_poly(&self, a: Fq) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.f as usize);
        let mut a = a;
        for _ in 0..self.f {
            out.push(a % self.p);
            a /= self.p;
        }
        trim(out)
    }

    fn from_poly(&self, v: &[u32]) -> Fq {
        v.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn build_tables(&mut self) {
        let order = self.q - 1;
        let mut log = vec![0u32; self.q as usize];
        for cand in 1..self.q {
            let g = self.to_poly(cand);
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = vec![1u32];
            let mut ok = true;
            for i in 0..order {
                let idx = self.from_poly(&cur);
                if i > 0 && idx == 1 {
                    ok = false;
                    break;
                }
                exp.push(idx);
                cur = poly_mulmod(&cur, &g, &self.modulus, self.p);
            }
            if ok && self.from_poly(&cur) == 1 {
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.q as u64
    }

    /// Defining polynomial, low-degree coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn polynomial_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join("+")
    }

    /// Coordinates `(c_0, .., c_{f-1})` on the basis `1, x, .., x^{f-1}`.
    pub fn coefficients(&self, a: Fq) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.f as usize);
        let mut a = a;
        for _ in 0..self.f {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Fq {
        self.from_poly(c)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q
    }

    pub fn zero(&self) -> Fq {
        0
    }

    pub fn one(&self) -> Fq {
        1
    }

    /// The image of the integer `n` in the prime field.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as Fq
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Fq {
        self.exp[1 % self.exp.len()]
    }

    /// The class of `x`, which generates the field over `F_p`.
    pub fn generator(&self) -> Fq {
        if self.f == 1 {
            self.from_int(-(self.modulus[0] as i64))
        } else {
            self.p
        }
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.f == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.f {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.f == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.f {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        self.exp[l as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        n / num_integer::gcd(n, l)
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a == 0 || self.log[a as usize].is_multiple_of(2) || self.p == 2
    }

    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return Some(0);
        }
        if self.p == 2 {
            let l = self.log[a as usize] as u64;
            let n = (self.q - 1) as u64;
            // squaring is a bijection; halve the log modulo the odd order
            let half = l * num_integer::Integer::extended_gcd(&2i64, &(n as i64)).x.rem_euclid(n as i64) as u64 % n;
            return Some(self.exp[half as usize]);
        }
        let l = self.log[a as usize];
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    /// Smallest non-square (by element index) for odd `p`.
    pub fn nonsquare(&self) -> Fq {
        self.elements().find(|&a| a != 0 && !self.is_square(a)).expect("odd characteristic")
    }

    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as i64)
    }

    /// Whether `a` lies in the prime field.
    pub fn is_prime_field_element(&self, a: Fq) -> bool {
        a < self.p
    }

    /// Embedding of this field into `big` (whose degree is a multiple),
    /// sending `x` to the smallest root of the defining polynomial.
    pub fn embedding_into(&self, big: &FiniteField) -> Option<Vec<Fq>> {
        if big.p != self.p || !big.f.is_multiple_of(self.f) {
            return None;
        }
        let root = big.elements().find(|&r| {
            let mut acc = 0;
            for &c in self.modulus.iter().rev() {
                acc = big.add(big.mul(acc, r), c);
            }
            acc == 0
        })?;
        let map = self
            .elements()
            .map(|a| {
                let coeffs = self.to_poly(a);
                let mut acc = 0;
                for &c in coeffs.iter().rev() {
                    acc = big.add(big.mul(acc, root), c);
                }
                acc
            })
            .collect();
        Some(map)
    }

    pub fn display(&self, a: Fq) -> String {
        if self.f == 1 {
            return a.to_string();
        }
        let c = self.to_poly(a);
        if c.is_empty() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            terms.push(match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "x".into(),
                (1, _) => format!("{ci}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{ci}x^{i}"),
            });
        }
        terms.join("+")
    }
}
