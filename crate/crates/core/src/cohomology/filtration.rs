use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::{h1, hom_invariants_gens, CohomologyError, FiniteGroup, GModule, MAX_ORDER_H1};
use crate::linalg::{invert, Matrix, ModRing, RowSpace};

type M2 = [u64; 4];

fn mul_mod(a: &M2, b: &M2, q: u64) -> M2 {
    [
        (a[0] * b[0] + a[1] * b[2]) % q,
        (a[0] * b[1] + a[1] * b[3]) % q,
        (a[2] * b[0] + a[3] * b[2]) % q,
        (a[2] * b[1] + a[3] * b[3]) % q,
    ]
}

const CLOSURE_LIMIT: usize = 200_000;

/// A subgroup `G/G_n` of `GL_2(Z/p^n)`, with `G_m` the kernel of reduction mod `p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationGroup {
    pub p: u64,
    pub level: u32,
    pub elements: Vec<M2>,
}

impl FiltrationGroup {
    /// Closure of `gens` (entries reduced mod `p^level`).
    pub fn generated(p: u64, level: u32, gens: &[[i64; 4]]) -> Result<Self, CohomologyError> {
        let q = p.pow(level);
        let gens: Vec<M2> = gens.iter().map(|g| g.map(|x| x.rem_euclid(q as i64) as u64)).collect();
        for g in &gens {
            let det = (g[0] * g[3] + q * q - g[1] * g[2] % (q * q)) % q;
            if det.is_multiple_of(p) {
                return Err(CohomologyError::NotAGroup("generator is not invertible".into()));
            }
        }
        let id: M2 = [1, 0, 0, 1];
        let mut seen: HashSet<M2> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = mul_mod(&x, g, q);
                if seen.insert(y) {
                    if seen.len() > CLOSURE_LIMIT {
                        return Err(CohomologyError::GroupTooLarge { order: seen.len(), limit: CLOSURE_LIMIT });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<M2> = seen.into_iter().collect();
        elements.sort();
        Ok(FiltrationGroup { p, level, elements })
    }

    /// Full preimage in `GL_2(Z/p^level)` of a subgroup of `GL_2(F_p)`.
    pub fn full_preimage(p: u64, level: u32, residues: &[[i64; 4]]) -> Self {
        let q = p.pow(level);
        let lifts = p.pow(level - 1);
        let mut elements = Vec::new();
        let count = lifts.pow(4);
        for h in residues {
            let h = h.map(|x| x.rem_euclid(p as i64) as u64);
            for t in 0..count {
                let mut e = [0u64; 4];
                let mut rest = t;
                for i in 0..4 {
                    e[i] = (h[i] + p * (rest % lifts)) % q;
                    rest /= lifts;
                }
                elements.push(e);
            }
        }
        elements.sort();
        elements.dedup();
        FiltrationGroup { p, level, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Image `G/G_m` in `GL_2(Z/p^m)`, sorted.
    pub fn quotient(&self, m: u32) -> Vec<M2> {
        let q = self.p.pow(m.min(self.level));
        let set: BTreeSet<M2> = self.elements.iter().map(|e| e.map(|x| x % q)).collect();
        set.into_iter().collect()
    }

    /// `G_m / G_{m+1}` inside `M_2(F_p)` via `1 + p^m A -> A`, as a list of `A`.
    pub fn graded_piece(&self, m: u32) -> Vec<M2> {
        assert!(m >= 1 && m < self.level, "graded piece needs 1 <= m < level");
        let pm = self.p.pow(m);
        let q = pm * self.p;
        let mut out: BTreeSet<M2> = BTreeSet::new();
        for e in self.quotient(m + 1) {
            let d = [e[0] + q - 1, e[1], e[2], e[3] + q - 1].map(|x| x % q);
            if d.iter().all(|x| x % pm == 0) {
                out.insert(d.map(|x| x / pm));
            }
        }
        out.into_iter().collect()
    }

    /// `(G/G_m, (Z/p^c)^2)` with the action through reduction, `c <= m`.
    pub fn group_module(&self, m: u32, c: u32) -> Result<(FiniteGroup, GModule), CohomologyError> {
        let elems = self.quotient(m);
        if elems.len() > MAX_ORDER_H1 {
            return Err(CohomologyError::GroupTooLarge { order: elems.len(), limit: MAX_ORDER_H1 });
        }
        let qm = self.p.pow(m.min(self.level));
        let g = FiniteGroup::from_elements(&elems, |a, b| mul_mod(a, b, qm))?;
        let ring = ModRing::new(self.p, c.min(m));
        let action = elems
            .iter()
            .map(|e| Matrix::from_rows(&[vec![e[0] % ring.modulus, e[1] % ring.modulus], vec![e[2] % ring.modulus, e[3] % ring.modulus]]))
            .collect();
        Ok((g, GModule { ring, dim: 2, action }))
    }

    /// `log_p #H^1(G/G_m, T/p^c)`.
    pub fn h1(&self, m: u32, c: u32) -> Result<u32, CohomologyError> {
        let (g, module) = self.group_module(m, c)?;
        Ok(h1(&g, &module, false).0)
    }

    /// `dim Hom_{F_p}(G_m/G_{m+1}, V)^{G/G_1}` and `dim G_m/G_{m+1}`.
    pub fn graded_hom_dim(&self, m: u32) -> (u32, u32) {
        let ring = ModRing::field(self.p);
        let mut span = RowSpace::new(ring, 4);
        for a in self.graded_piece(m) {
            span.insert(a.to_vec());
        }
        let basis = span.rref();
        let w_dim = basis.len();
        if w_dim == 0 {
            return (0, 0);
        }
        let bar = self.quotient(1);
        let mut w_action = Vec::new();
        let mut v_action = Vec::new();
        for g in &bar {
            let gm = Matrix::from_rows(&[vec![g[0], g[1]], vec![g[2], g[3]]]);
            let ginv = invert(&gm, &ring).expect("invertible mod p");
            let mut act = Matrix::zeros(w_dim, w_dim);
            for (j, (_, row)) in basis.iter().enumerate() {
                let x = Matrix::from_rows(&[vec![row[0], row[1]], vec![row[2], row[3]]]);
                let y = gm.mul(&x, &ring).mul(&ginv, &ring);
                // coordinates on an rref basis are the entries at the pivot columns
                for (i, (pc, _)) in basis.iter().enumerate() {
                    act.set(i, j, y.data[*pc]);
                }
            }
            w_action.push(act);
            v_action.push(gm);
        }
        let w = GModule { ring, dim: w_dim, action: w_action };
        let v = GModule { ring, dim: 2, action: v_action };
        (hom_invariants_gens(&w, &v, 0..bar.len()), w_dim as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelEvidence {
    pub level: u32,
    pub graded_dim: u32,
    pub hom_invariant_dim: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationCheck {
    /// `dim H^1(G/G_1, V)`.
    pub h1_residual: u32,
    pub levels: Vec<LevelEvidence>,
    /// All hypotheses hold, so `H^1(G/G_n, T/p^m) = 0`.
    pub conclusion: bool,
    /// Direct `log_p #H^1(G/G_n, T/p^m)` when the group is small enough.
    pub direct_h1: Option<u32>,
    /// The direct value does not contradict the conclusion.
    pub consistent: bool,
}

/// The filtration criterion: `H^1(G/G_1, V) = 0` and
/// `Hom(G_j/G_{j+1}, V)^{G/G_1} = 0` for `1 <= j < n` give `H^1(G/G_n, T/p^m) = 0`.
pub fn filtration_check(g: &FiltrationGroup, n: u32, m: u32) -> Result<FiltrationCheck, CohomologyError> {
    if !(1 <= m && m <= n && n <= g.level) {
        return Err(CohomologyError::BadModule(format!("need 1 <= m = {m} <= n = {n} <= level {}", g.level)));
    }
    let h1_residual = g.h1(1, 1)?;
    let levels: Vec<LevelEvidence> = (1..n)
        .map(|j| {
            let (hom, dim) = g.graded_hom_dim(j);
            LevelEvidence { level: j, graded_dim: dim, hom_invariant_dim: hom }
        })
        .collect();
    let conclusion = h1_residual == 0 && levels.iter().all(|l| l.hom_invariant_dim == 0);
    let direct_h1 = match g.h1(n, m) {
        Ok(v) => Some(v),
        Err(CohomologyError::GroupTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let consistent = !(conclusion && direct_h1.is_some_and(|v| v != 0));
    Ok(FiltrationCheck { h1_residual, levels, conclusion, direct_h1, consistent })
}
