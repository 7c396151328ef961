use std::collections::HashMap;
use std::hash::Hash;

use super::CohomologyError;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    gens: Vec<u32>,
}

impl FiniteGroup {
    /// Builds the table of a list of elements closed under `mul`.
    pub fn from_elements<T, F>(elems: &[T], mul: F) -> Result<Self, CohomologyError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let n = elems.len();
        if n == 0 {
            return Err(CohomologyError::NotAGroup("empty element list".into()));
        }
        let index: HashMap<&T, u32> = elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        if index.len() != n {
            return Err(CohomologyError::NotAGroup("repeated element".into()));
        }
        let mut table = vec![0u32; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let c = mul(a, b);
                table[i * n + j] = *index
                    .get(&c)
                    .ok_or_else(|| CohomologyError::NotAGroup("element list is not closed".into()))?;
            }
        }
        Self::from_table(n, table)
    }

    pub fn from_table(n: usize, table: Vec<u32>) -> Result<Self, CohomologyError> {
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| CohomologyError::NotAGroup("no identity".into()))? as u32;
        let mut inverse = vec![0u32; n];
        for (a, slot) in inverse.iter_mut().enumerate() {
            *slot = (0..n)
                .find(|&b| table[a * n + b] == identity)
                .ok_or_else(|| CohomologyError::NotAGroup("missing inverse".into()))? as u32;
        }
        let mut g = FiniteGroup { n, table, inverse, identity, gens: Vec::new() };
        g.gens = g.greedy_generators();
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.n];
        inside[self.identity as usize] = true;
        for x in 0..self.n as u32 {
            if inside[x as usize] {
                continue;
            }
            gens.push(x);
            let sub = self.subgroup_generated(&gens);
            for s in sub {
                inside[s as usize] = true;
            }
        }
        gens
    }

    /// Elements of the subgroup generated by `gens`, in discovery order.
    pub fn subgroup_generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        let mut out = vec![self.identity];
        seen[self.identity as usize] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn is_central(&self, a: u32) -> bool {
        self.gens.iter().all(|&s| self.mul(a, s) == self.mul(s, a))
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// BFS spanning tree over the generators: for each element other than the
    /// identity, its parent and the generator used to reach it.
    pub(crate) fn spanning_tree(&self) -> (Vec<u32>, Vec<Option<(u32, usize)>>) {
        let mut order = vec![self.identity];
        let mut parent: Vec<Option<(u32, usize)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[self.identity as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (si, &s) in self.gens.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((x, si));
                    order.push(y);
                }
            }
            i += 1;
        }
        (order, parent)
    }
}
