use num_integer::Integer;
use serde::Serialize;

use super::{CohomologyError, FiniteGroup, GModule};
use crate::linalg::{Matrix, ModRing, RowSpace};

pub const MAX_ORDER_H1: usize = 500;
pub const MAX_ORDER_H2: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum VanishingRoute {
    /// `p` does not divide `#G`.
    CoprimeOrder,
    /// A central element acts by the scalar `lambda`, `lambda != 1 (mod p)`.
    SahWitness { element: u32, lambda: u64 },
    BruteForce,
}

/// Lengths (`log_p` of orders; dimensions when `pM = 0`) of `H^0`, `H^1`
/// and optionally `H^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub h0: u32,
    pub h1: u32,
    pub h2: Option<u32>,
    #[serde(flatten)]
    pub route: VanishingRoute,
    /// Cocycles `G -> M` (values listed element by element) whose classes
    /// span `H^1`; only filled over `F_p` on request.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug)]
pub struct CohomologyOptions {
    pub max_degree: u8,
    pub fast_paths: bool,
    pub basis: bool,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        CohomologyOptions { max_degree: 1, fast_paths: true, basis: false }
    }
}

/// `H^0(G, M)` length: the kernel of the stacked `rho(s) - 1`.
pub fn h0(g: &FiniteGroup, m: &GModule) -> u32 {
    let r = m.ring;
    let mut rs = RowSpace::new(r, m.dim);
    for &s in g.generators() {
        let a = &m.action[s as usize];
        for i in 0..m.dim {
            let row = (0..m.dim).map(|j| r.sub(a.get(i, j), u64::from(i == j))).collect();
            rs.insert(row);
        }
    }
    rs.kernel_length()
}

/// Cocycle data over the generators: `f(g) = E_g x` for the unknown values
/// `x = (f(s))_s`, with `E` built along a spanning tree.
struct TreeCocycles {
    cols: usize,
    e: Vec<Matrix>,
    constraints: RowSpace,
}

fn tree_cocycles(g: &FiniteGroup, m: &GModule) -> TreeCocycles {
    let r = m.ring;
    let d = m.dim;
    let gens = g.generators();
    let cols = gens.len() * d;
    let (order, parent) = g.spanning_tree();
    let mut e = vec![Matrix::zeros(d, cols); g.order()];
    // rho(x) X_s as a d x cols block matrix
    let place = |x: u32, si: usize| -> Matrix {
        let mut out = Matrix::zeros(d, cols);
        let a = &m.action[x as usize];
        for i in 0..d {
            for j in 0..d {
                out.set(i, si * d + j, a.get(i, j));
            }
        }
        out
    };
    for &y in order.iter().skip(1) {
        let (x, si) = parent[y as usize].unwrap();
        let add = place(x, si);
        let mut ey = e[x as usize].clone();
        for (a, b) in ey.data.iter_mut().zip(&add.data) {
            *a = r.add(*a, *b);
        }
        e[y as usize] = ey;
    }
    let mut constraints = RowSpace::new(r, cols);
    for x in 0..g.order() as u32 {
        for (si, &s) in gens.iter().enumerate() {
            let xs = g.mul(x, s);
            if parent[xs as usize] == Some((x, si)) {
                continue;
            }
            let add = place(x, si);
            for i in 0..d {
                let row: Vec<u64> = (0..cols)
                    .map(|c| r.sub(r.add(e[x as usize].get(i, c), add.get(i, c)), e[xs as usize].get(i, c)))
                    .collect();
                if row.iter().any(|&v| v != 0) {
                    constraints.insert(row);
                }
            }
        }
    }
    TreeCocycles { cols, e, constraints }
}

/// `H^1(G, M)` length together with an optional spanning set of cocycles.
pub fn h1(g: &FiniteGroup, m: &GModule, want_basis: bool) -> (u32, Vec<Vec<u64>>) {
    let tc = tree_cocycles(g, m);
    let z1 = tc.constraints.kernel_length();
    let b1 = m.length() - h0(g, m);
    let h = z1 - b1;
    let mut basis = Vec::new();
    if want_basis && m.ring.m == 1 && h > 0 {
        let r = m.ring;
        let n = g.order();
        let d = m.dim;
        let mut span = RowSpace::new(r, n * d);
        for j in 0..d {
            let cob: Vec<u64> = (0..n)
                .flat_map(|x| {
                    let a = &m.action[x];
                    (0..d).map(move |i| r.sub(a.get(i, j), u64::from(i == j)))
                })
                .collect();
            span.insert(cob);
        }
        for xv in tc.constraints.nullspace() {
            let cocycle: Vec<u64> = (0..n).flat_map(|y| tc.e[y].apply(&xv, &r)).collect();
            if !span.contains(&cocycle) {
                span.insert(cocycle.clone());
                basis.push(cocycle);
            }
        }
        debug_assert_eq!(basis.len() as u32, h);
    }
    debug_assert_eq!(tc.cols, g.generators().len() * m.dim);
    (h, basis)
}

/// `H^1` by imposing `f(gh) = f(g) + g f(h)` on every pair, unknowns `f(g)` for all `g`.
pub fn h1_all_pairs(g: &FiniteGroup, m: &GModule) -> Result<u32, CohomologyError> {
    let n = g.order();
    if n > MAX_ORDER_H2 {
        return Err(CohomologyError::GroupTooLarge { order: n, limit: MAX_ORDER_H2 });
    }
    let r = m.ring;
    let d = m.dim;
    let cols = n * d;
    let mut rs = RowSpace::new(r, cols);
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let ab = g.mul(a, b) as usize;
            let rho = &m.action[a as usize];
            for i in 0..d {
                let mut row = vec![0u64; cols];
                row[ab * d + i] = r.add(row[ab * d + i], 1);
                row[a as usize * d + i] = r.sub(row[a as usize * d + i], 1);
                for j in 0..d {
                    let c = b as usize * d + j;
                    row[c] = r.sub(row[c], rho.get(i, j));
                }
                rs.insert(row);
            }
        }
    }
    let z1 = rs.kernel_length();
    Ok(z1 - (m.length() - h0(g, m)))
}

/// `H^2` from the inhomogeneous 2-cocycle condition on all triples.
pub fn h2_all_triples(g: &FiniteGroup, m: &GModule) -> Result<u32, CohomologyError> {
    let n = g.order();
    if n > 12 {
        return Err(CohomologyError::GroupTooLarge { order: n, limit: 12 });
    }
    let r = m.ring;
    let d = m.dim;
    let idx = |a: u32, b: u32, i: usize| ((a as usize * n + b as usize) * d) + i;
    let cols = n * n * d;
    // Z^2: a.f(b,c) - f(ab,c) + f(a,bc) - f(a,b) = 0
    let mut z = RowSpace::new(r, cols);
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            for c in 0..n as u32 {
                let rho = &m.action[a as usize];
                for i in 0..d {
                    let mut row = vec![0u64; cols];
                    for j in 0..d {
                        let t = idx(b, c, j);
                        row[t] = r.add(row[t], rho.get(i, j));
                    }
                    let t = idx(g.mul(a, b), c, i);
                    row[t] = r.sub(row[t], 1);
                    let t = idx(a, g.mul(b, c), i);
                    row[t] = r.add(row[t], 1);
                    let t = idx(a, b, i);
                    row[t] = r.sub(row[t], 1);
                    z.insert(row);
                }
            }
        }
    }
    // B^2: images of the 1-cochains u: (a,b) -> a.u(b) - u(ab) + u(a)
    let mut bspan = RowSpace::new(r, cols);
    for y in 0..n as u32 {
        for j in 0..d {
            let mut img = vec![0u64; cols];
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    for i in 0..d {
                        let mut v = 0;
                        if b == y {
                            v = r.add(v, m.action[a as usize].get(i, j));
                        }
                        if g.mul(a, b) == y && i == j {
                            v = r.sub(v, 1);
                        }
                        if a == y && i == j {
                            v = r.add(v, 1);
                        }
                        img[idx(a, b, i)] = v;
                    }
                }
            }
            bspan.insert(img);
        }
    }
    Ok(z.kernel_length() - bspan.length())
}

/// Central element acting by a scalar `lambda` with `lambda - 1` a unit.
pub fn sah_witness(g: &FiniteGroup, m: &GModule) -> Option<(u32, u64)> {
    let r = m.ring;
    (0..g.order() as u32).filter(|&z| g.is_central(z)).find_map(|z| {
        let a = &m.action[z as usize];
        let lam = a.get(0, 0);
        let scalar = (0..m.dim).all(|i| (0..m.dim).all(|j| a.get(i, j) == if i == j { lam } else { 0 }));
        (scalar && r.val(r.sub(lam, 1)) == 0).then_some((z, lam))
    })
}

pub fn h_groups(g: &FiniteGroup, m: &GModule, max_degree: u8) -> Result<CohomologyReport, CohomologyError> {
    h_groups_with(g, m, CohomologyOptions { max_degree, ..Default::default() })
}

pub fn h_groups_with(g: &FiniteGroup, m: &GModule, opts: CohomologyOptions) -> Result<CohomologyReport, CohomologyError> {
    let n = g.order();
    let limit = if opts.max_degree >= 2 { MAX_ORDER_H2 } else { MAX_ORDER_H1 };
    if n > limit {
        return Err(CohomologyError::GroupTooLarge { order: n, limit });
    }
    let want_h2 = opts.max_degree >= 2;
    if opts.fast_paths {
        if let Some((element, lambda)) = sah_witness(g, m) {
            return Ok(CohomologyReport {
                h0: 0,
                h1: 0,
                h2: want_h2.then_some(0),
                route: VanishingRoute::SahWitness { element, lambda },
                basis: Vec::new(),
            });
        }
        if (n as u64).gcd(&m.ring.p) == 1 {
            return Ok(CohomologyReport {
                h0: h0(g, m),
                h1: 0,
                h2: want_h2.then_some(0),
                route: VanishingRoute::CoprimeOrder,
                basis: Vec::new(),
            });
        }
    }
    let (h1v, basis) = h1(g, m, opts.basis);
    let h2 = want_h2.then(|| h1(g, &m.dimension_shift(g), false).0);
    Ok(CohomologyReport { h0: h0(g, m), h1: h1v, h2, route: VanishingRoute::BruteForce, basis })
}

/// Length of `Hom(W, V)^G` with `G` acting on both sides.
pub fn hom_invariants(w: &GModule, v: &GModule, g: &FiniteGroup) -> u32 {
    hom_invariants_gens(w, v, g.generators().iter().map(|&s| s as usize))
}

/// As [`hom_invariants`], given the generator indices directly.
pub fn hom_invariants_gens(w: &GModule, v: &GModule, gens: impl Iterator<Item = usize>) -> u32 {
    let r: ModRing = v.ring;
    let (dv, dw) = (v.dim, w.dim);
    let cols = dv * dw;
    let mut rs = RowSpace::new(r, cols);
    for s in gens {
        let a = &v.action[s];
        let b = &w.action[s];
        // (A Phi - Phi B)_{ij}
        for i in 0..dv {
            for j in 0..dw {
                let mut row = vec![0u64; cols];
                for k in 0..dv {
                    let t = k * dw + j;
                    row[t] = r.add(row[t], a.get(i, k));
                }
                for l in 0..dw {
                    let t = i * dw + l;
                    row[t] = r.sub(row[t], b.get(l, j));
                }
                rs.insert(row);
            }
        }
    }
    rs.kernel_length()
}
