use std::collections::{HashSet, VecDeque};

use super::{CohomologyError, FiniteGroup};
use crate::finite_gl2::{FiniteField, Mat2};
use crate::linalg::{invert, Matrix, ModRing};

/// A finite `Z/p^m[G]`-module `(Z/p^m)^dim`, one action matrix per group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    pub ring: ModRing,
    pub dim: usize,
    pub action: Vec<Matrix>,
}

impl GModule {
    /// Validates the action: identity acts trivially and `rho(g) rho(s) = rho(gs)`
    /// for every element `g` and generator `s`.
    pub fn new(ring: ModRing, dim: usize, action: Vec<Matrix>, g: &FiniteGroup) -> Result<Self, CohomologyError> {
        if action.len() != g.order() {
            return Err(CohomologyError::BadModule(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                g.order()
            )));
        }
        if action.iter().any(|m| m.rows != dim || m.cols != dim) {
            return Err(CohomologyError::BadModule("action matrix has the wrong shape".into()));
        }
        if !action[g.identity() as usize].is_identity() {
            return Err(CohomologyError::BadModule("identity does not act trivially".into()));
        }
        for x in 0..g.order() as u32 {
            for &s in g.generators() {
                let lhs = action[x as usize].mul(&action[s as usize], &ring);
                if lhs != action[g.mul(x, s) as usize] {
                    return Err(CohomologyError::BadModule("action is not a homomorphism".into()));
                }
            }
        }
        Ok(GModule { ring, dim, action })
    }

    /// Trivial action on `(Z/p^m)^dim`.
    pub fn trivial(ring: ModRing, dim: usize, g: &FiniteGroup) -> Self {
        GModule { ring, dim, action: vec![Matrix::identity(dim); g.order()] }
    }

    /// `log_p #M`.
    pub fn length(&self) -> u32 {
        self.ring.m * self.dim as u32
    }

    /// `Maps(G, M) / M`, realised on the functions vanishing at the identity.
    /// Its `H^i` is `H^{i+1}(G, M)` for `i >= 1`.
    pub fn dimension_shift(&self, g: &FiniteGroup) -> GModule {
        let n = g.order();
        let d = self.dim;
        let r = self.ring;
        let others: Vec<u32> = (0..n as u32).filter(|&x| x != g.identity()).collect();
        let slot: Vec<Option<usize>> = {
            let mut s = vec![None; n];
            for (i, &x) in others.iter().enumerate() {
                s[x as usize] = Some(i);
            }
            s
        };
        let qd = others.len() * d;
        let action = (0..n as u32)
            .map(|h| {
                // (h.phi)(x) = h phi(h^-1 x) - h phi(h^-1)
                let hinv = g.inv(h);
                let rho = &self.action[h as usize];
                let mut m = Matrix::zeros(qd, qd);
                for &x in &others {
                    let out = slot[x as usize].unwrap();
                    let src = g.mul(hinv, x);
                    for (sign, y) in [(1u64, src), (r.modulus - 1, hinv)] {
                        if let Some(inp) = slot[y as usize] {
                            for a in 0..d {
                                for b in 0..d {
                                    let v = r.mul(sign % r.modulus, rho.get(a, b));
                                    let cur = m.get(out * d + a, inp * d + b);
                                    m.set(out * d + a, inp * d + b, r.add(cur, v));
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        GModule { ring: r, dim: qd, action }
    }

    /// Internal Hom: `Hom(W, V)` with `(g.phi) = rho_V(g) phi rho_W(g)^-1`,
    /// coordinates `phi_{ij}` row-major.
    pub fn hom(w: &GModule, v: &GModule) -> GModule {
        let r = v.ring;
        let action = w
            .action
            .iter()
            .zip(&v.action)
            .map(|(aw, av)| {
                let winv = invert(aw, &r).expect("action matrices are invertible");
                // vec(A X B) = (A kron B^T) vec(X) for row-major vec
                av.kron(&winv.transpose(), &r)
            })
            .collect();
        GModule { ring: r, dim: v.dim * w.dim, action }
    }
}

/// `F_p`-matrix of multiplication by `c` on `k = F_{p^f}` in the basis `1, x, ..`.
fn scalar_block(k: &FiniteField, c: u32) -> Vec<Vec<u64>> {
    let f = k.degree() as usize;
    let mut cols = Vec::with_capacity(f);
    for t in 0..f {
        let mut basis = vec![0u32; f];
        basis[t] = 1;
        let e = k.from_coefficients(&basis);
        cols.push(k.coefficients(k.mul(c, e)));
    }
    (0..f).map(|i| (0..f).map(|j| cols[j][i] as u64).collect()).collect()
}

/// Restriction of scalars of a `k`-matrix to a `2f x 2f` matrix over `F_p`.
pub fn restrict_scalars(k: &FiniteField, m: &Mat2) -> Matrix {
    let f = k.degree() as usize;
    let mut out = Matrix::zeros(2 * f, 2 * f);
    for bi in 0..2 {
        for bj in 0..2 {
            let block = scalar_block(k, m.0[2 * bi + bj]);
            for i in 0..f {
                for j in 0..f {
                    out.set(bi * f + i, bj * f + j, block[i][j]);
                }
            }
        }
    }
    out
}

/// Which piece of `End_k(V)` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndKind {
    Full,
    TraceZero,
}

/// `End_k(V)` (or its trace-zero part) under conjugation, as an `F_p`-matrix.
pub fn adjoint_matrix(k: &FiniteField, g: &Mat2, kind: EndKind) -> Matrix {
    let f = k.degree() as usize;
    let ginv = g.inv(k).expect("invertible");
    // k-basis of the piece, as Mat2 with entries in k
    let kbasis: Vec<Mat2> = match kind {
        EndKind::Full => vec![Mat2::new(1, 0, 0, 0), Mat2::new(0, 1, 0, 0), Mat2::new(0, 0, 1, 0), Mat2::new(0, 0, 0, 1)],
        EndKind::TraceZero => vec![Mat2::new(1, 0, 0, k.neg(1)), Mat2::new(0, 1, 0, 0), Mat2::new(0, 0, 1, 0)],
    };
    let coords = |x: &Mat2| -> Vec<u32> {
        match kind {
            EndKind::Full => x.0.to_vec(),
            EndKind::TraceZero => vec![x.0[0], x.0[1], x.0[2]],
        }
    };
    let r = kbasis.len();
    let dim = r * f;
    let mut out = Matrix::zeros(dim, dim);
    for (bi, b) in kbasis.iter().enumerate() {
        for t in 0..f {
            let mut unit = vec![0u32; f];
            unit[t] = 1;
            let e = k.from_coefficients(&unit);
            let x = Mat2(b.0.map(|v| k.mul(v, e)));
            let y = g.mul(&x, k).mul(&ginv, k);
            for (ci, c) in coords(&y).into_iter().enumerate() {
                for (s, v) in k.coefficients(c).into_iter().enumerate() {
                    out.set(ci * f + s, bi * f + t, v as u64);
                }
            }
        }
    }
    out
}

/// Modules attached to a subgroup `H` of `GL_2(k)` given by its sorted elements.
pub struct MatrixGroupModules {
    pub group: FiniteGroup,
    pub elements: Vec<Mat2>,
}

impl MatrixGroupModules {
    pub fn new(k: &FiniteField, elements: Vec<Mat2>) -> Result<Self, CohomologyError> {
        let group = FiniteGroup::from_elements(&elements, |a, b| a.mul(b, k))?;
        Ok(MatrixGroupModules { group, elements })
    }

    /// `V = k^2` viewed over `F_p`.
    pub fn natural(&self, k: &FiniteField) -> GModule {
        let action = self.elements.iter().map(|m| restrict_scalars(k, m)).collect();
        GModule { ring: ModRing::field(k.p()), dim: 2 * k.degree() as usize, action }
    }

    pub fn adjoint(&self, k: &FiniteField, kind: EndKind) -> GModule {
        let action: Vec<Matrix> = self.elements.iter().map(|m| adjoint_matrix(k, m, kind)).collect();
        let dim = action[0].rows;
        GModule { ring: ModRing::field(k.p()), dim, action }
    }
}

/// The subgroup of `GL_dim(Z/p^m)` generated by `gens`, with its natural module.
pub fn matrix_group(ring: ModRing, dim: usize, gens: &[Matrix], limit: usize) -> Result<(FiniteGroup, GModule), CohomologyError> {
    if gens.iter().any(|g| g.rows != dim || g.cols != dim) {
        return Err(CohomologyError::BadModule(format!("generators must be {dim} x {dim}")));
    }
    if gens.iter().any(|g| invert(g, &ring).is_none()) {
        return Err(CohomologyError::NotAGroup("generator is not invertible".into()));
    }
    let id = Matrix::identity(dim);
    let mut elements = vec![id.clone()];
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g, &ring);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return Err(CohomologyError::GroupTooLarge { order: seen.len(), limit });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let group = FiniteGroup::from_elements(&elements, |a, b| a.mul(b, &ring))?;
    Ok((group, GModule { ring, dim, action: elements }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_gl2::closure;

    #[test]
    fn restriction_is_multiplicative() {
        let k = FiniteField::build(3, 2).unwrap();
        let r = ModRing::field(3);
        let a = Mat2::new(2, 5, 7, 1);
        let b = Mat2::new(4, 0, 3, 8);
        assert_eq!(restrict_scalars(&k, &a.mul(&b, &k)), restrict_scalars(&k, &a).mul(&restrict_scalars(&k, &b), &r));
        assert!(restrict_scalars(&k, &Mat2::identity()).is_identity());
    }

    #[test]
    fn adjoint_modules_are_modules() {
        let k = FiniteField::build(5, 1).unwrap();
        let elems = closure(&[Mat2::from_ints(&k, [0, -1, 1, 0]), Mat2::from_ints(&k, [1, 2, 1, 3])], &k, 1000).unwrap();
        let mg = MatrixGroupModules::new(&k, elems).unwrap();
        for kind in [EndKind::Full, EndKind::TraceZero] {
            let m = mg.adjoint(&k, kind);
            assert!(GModule::new(m.ring, m.dim, m.action.clone(), &mg.group).is_ok());
        }
        let v = mg.natural(&k);
        let h = GModule::hom(&mg.adjoint(&k, EndKind::Full), &v);
        assert!(GModule::new(h.ring, h.dim, h.action.clone(), &mg.group).is_ok());
        let q = v.dimension_shift(&mg.group);
        assert!(GModule::new(q.ring, q.dim, q.action.clone(), &mg.group).is_ok());
    }

    #[test]
    fn unipotent_group_from_a_generator() {
        let r = ModRing::field(3);
        let (g, m) = matrix_group(r, 2, &[Matrix::from_rows(&[vec![1, 1], vec![0, 1]])], 100).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(crate::cohomology::h1(&g, &m, false).0, 1);
        assert!(matrix_group(r, 2, &[Matrix::from_rows(&[vec![1, 1], vec![1, 1]])], 100).is_err());
    }
}
