use serde::Serialize;

use super::{closure, CartanKind, FiniteField, Fq, Gl2Error, Mat2, DEFAULT_CLOSURE_BOUND};
use crate::arith::factor_u64;

/// `a + b*alpha` in `k_2 = k[alpha]/(alpha^2 - d)`, `d` the field's smallest non-square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct K2Elem {
    pub a: Fq,
    pub b: Fq,
}

impl K2Elem {
    pub fn one() -> Self {
        K2Elem { a: 1, b: 0 }
    }

    pub fn mul(&self, o: &K2Elem, k: &FiniteField, d: Fq) -> K2Elem {
        K2Elem {
            a: k.add(k.mul(self.a, o.a), k.mul(d, k.mul(self.b, o.b))),
            b: k.add(k.mul(self.a, o.b), k.mul(self.b, o.a)),
        }
    }

    pub fn norm(&self, k: &FiniteField, d: Fq) -> Fq {
        k.sub(k.mul(self.a, self.a), k.mul(d, k.mul(self.b, self.b)))
    }

    pub fn pow(&self, mut e: u64, k: &FiniteField, d: Fq) -> K2Elem {
        let mut acc = K2Elem::one();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k, d);
            }
            base = base.mul(&base, k, d);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order; the element must be nonzero.
    pub fn order(&self, k: &FiniteField, d: Fq) -> u64 {
        let mut n = k.size() * k.size() - 1;
        for (r, _) in factor_u64(n) {
            while n.is_multiple_of(r) && self.pow(n / r, k, d) == K2Elem::one() {
                n /= r;
            }
        }
        n
    }
}

/// A Cartan subgroup of `GL_2(k)`: the diagonal torus, or `j(k_2^x)` with
/// `j(a + b alpha) = [[a, b d], [b, a]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CartanSubgroup {
    pub kind: CartanKind,
    pub d: Option<Fq>,
}

impl CartanSubgroup {
    pub fn split() -> Self {
        CartanSubgroup { kind: CartanKind::Split, d: None }
    }

    pub fn nonsplit(k: &FiniteField) -> Self {
        CartanSubgroup { kind: CartanKind::Nonsplit, d: Some(k.nonsquare()) }
    }

    pub fn j(&self, x: K2Elem, k: &FiniteField) -> Mat2 {
        let d = self.d.expect("j is defined for the nonsplit Cartan");
        Mat2::new(x.a, k.mul(x.b, d), x.b, x.a)
    }

    pub fn contains(&self, m: &Mat2, k: &FiniteField) -> bool {
        let [a, b, c, e] = m.0;
        match self.kind {
            CartanKind::Split => b == 0 && c == 0,
            CartanKind::Nonsplit => a == e && b == k.mul(c, self.d.unwrap()),
        }
    }

    pub fn order(&self, k: &FiniteField) -> u64 {
        let q = k.size();
        match self.kind {
            CartanKind::Split => (q - 1) * (q - 1),
            CartanKind::Nonsplit => q * q - 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DihedralKind {
    IPsi,
    JPsiPrime,
}

/// `D_{2n} -> GL_2(k)` given on the rotation `sigma` and the reflection `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralRep {
    pub kind: DihedralKind,
    pub n: u64,
    /// `psi(sigma)`; for `I(psi)` only the `a` part is used.
    pub psi: K2Elem,
    pub sigma: Mat2,
    pub s: Mat2,
    pub cartan: CartanSubgroup,
}

impl DihedralRep {
    /// Image of `D_{2n}`, sorted.
    pub fn image(&self, k: &FiniteField) -> Vec<Mat2> {
        closure(&[self.sigma, self.s], k, DEFAULT_CLOSURE_BOUND).expect("dihedral image is small")
    }

    /// Image of `C_n`, sorted.
    pub fn cyclic_image(&self, k: &FiniteField) -> Vec<Mat2> {
        closure(&[self.sigma], k, DEFAULT_CLOSURE_BOUND).expect("cyclic image is small")
    }
}

/// `I(psi)` with `psi(sigma) = g`, `g` of exact order `n` in `k^x`.
pub fn make_i_psi(k: &FiniteField, n: u64, g: Fq) -> Result<DihedralRep, Gl2Error> {
    if n == 0 || !(k.size() - 1).is_multiple_of(n) {
        return Err(Gl2Error::BadInput(format!("{n} does not divide #k^x = {}", k.size() - 1)));
    }
    if g == 0 {
        return Err(Gl2Error::OrderMismatch { expected: n, actual: 0 });
    }
    let actual = k.order(g);
    if actual != n {
        return Err(Gl2Error::OrderMismatch { expected: n, actual });
    }
    Ok(DihedralRep {
        kind: DihedralKind::IPsi,
        n,
        psi: K2Elem { a: g, b: 0 },
        sigma: Mat2::diag(g, k.inv(g).unwrap()),
        s: Mat2::new(0, 1, 1, 0),
        cartan: CartanSubgroup::split(),
    })
}

/// `J(psi')` with `psi'(sigma) = g`, a norm-one element of `k_2^x` of order `n`.
pub fn make_j_psi_prime(k: &FiniteField, n: u64, g: K2Elem) -> Result<DihedralRep, Gl2Error> {
    if k.p() == 2 {
        return Err(Gl2Error::BadInput("J(psi') needs odd characteristic".into()));
    }
    if n == 0 || !(k.size() + 1).is_multiple_of(n) {
        return Err(Gl2Error::BadInput(format!("{n} does not divide #k + 1 = {}", k.size() + 1)));
    }
    let cartan = CartanSubgroup::nonsplit(k);
    let d = cartan.d.unwrap();
    if g.norm(k, d) != 1 {
        return Err(Gl2Error::NormNotOne);
    }
    let actual = g.order(k, d);
    if actual != n {
        return Err(Gl2Error::OrderMismatch { expected: n, actual });
    }
    Ok(DihedralRep {
        kind: DihedralKind::JPsiPrime,
        n,
        psi: g,
        sigma: cartan.j(g, k),
        s: Mat2::diag(1, k.neg(1)),
        cartan,
    })
}

/// Norm-one elements of `k_2^x`, the kernel of `N: k_2^x -> k^x`.
pub fn norm_one_elements(k: &FiniteField) -> Vec<K2Elem> {
    let d = k.nonsquare();
    let mut out = Vec::new();
    for a in k.elements() {
        // d b^2 = a^2 - 1
        let rhs = k.div(k.sub(k.mul(a, a), 1), d).unwrap();
        if let Some(b) = k.sqrt(rhs) {
            out.push(K2Elem { a, b });
            if b != 0 {
                out.push(K2Elem { a, b: k.neg(b) });
            }
        }
    }
    out.sort_by_key(|x| (x.a, x.b));
    out
}

/// Solution space of `sum_j rows[i][j] x_j = 0` over `k`.
pub(crate) fn nullspace(rows: &[Vec<Fq>], cols: usize, k: &FiniteField) -> Vec<Vec<Fq>> {
    let mut m: Vec<Vec<Fq>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = k.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = k.sub(m[i][j], k.mul(f, m[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m[i][fc]);
            }
            v
        })
        .collect()
}

/// Witness for `J(psi') (x) k_2 = I(psi')`: the quadratic extension `k_2`
/// as a table field and an `X in GL_2(k_2)` with `X J(g) X^-1 = I(g)` on
/// both generators.
#[derive(Clone, Debug)]
pub struct BaseChange {
    pub big: FiniteField,
    pub conjugator: Mat2,
    pub j_sigma: Mat2,
    pub j_s: Mat2,
    pub i_sigma: Mat2,
    pub i_s: Mat2,
}

pub fn base_change_witness(k: &FiniteField, rep: &DihedralRep) -> Result<Option<BaseChange>, Gl2Error> {
    if rep.kind != DihedralKind::JPsiPrime {
        return Err(Gl2Error::BadInput("base change applies to J(psi')".into()));
    }
    let big = FiniteField::build(k.p(), 2 * k.degree())?;
    let emb = k.embedding_into(&big).expect("degree divides");
    let d = rep.cartan.d.unwrap();
    let alpha = big.sqrt(emb[d as usize]).expect("d becomes a square in k_2");
    let lam = big.add(emb[rep.psi.a as usize], big.mul(emb[rep.psi.b as usize], alpha));
    let i_sigma = Mat2::diag(lam, big.inv(lam).unwrap());
    let i_s = Mat2::new(0, 1, 1, 0);
    let j_sigma = rep.sigma.map_entries(&emb);
    let j_s = rep.s.map_entries(&emb);

    // X A - B X = 0 for (A, B) = (J(g), I(g)); unknowns x_{rc} at index 2r + c.
    let mut rows = Vec::new();
    for (a, b) in [(j_sigma, i_sigma), (j_s, i_s)] {
        for r in 0..2 {
            for c in 0..2 {
                let mut row = vec![0; 4];
                for t in 0..2 {
                    row[2 * r + t] = big.add(row[2 * r + t], a.0[2 * t + c]);
                    row[2 * t + c] = big.sub(row[2 * t + c], b.0[2 * r + t]);
                }
                rows.push(row);
            }
        }
    }
    let basis = nullspace(&rows, 4, &big);
    let to_mat = |v: &[Fq]| Mat2::new(v[0], v[1], v[2], v[3]);
    let mut found = basis.iter().map(|v| to_mat(v)).find(|m| m.det(&big) != 0);
    if found.is_none() && basis.len() >= 2 {
        'search: for c in big.elements() {
            let v: Vec<Fq> = (0..4).map(|i| big.add(basis[0][i], big.mul(c, basis[1][i]))).collect();
            let m = to_mat(&v);
            if m.det(&big) != 0 {
                found = Some(m);
                break 'search;
            }
        }
    }
    Ok(found.map(|conjugator| BaseChange { big, conjugator, j_sigma, j_s, i_sigma, i_s }))
}
