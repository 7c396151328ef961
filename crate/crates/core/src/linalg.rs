//! Linear algebra over `Z/p^m` (with `m = 1` the field `F_p`).
//!
//! Systems here are tall and narrow (many cocycle constraints, few
//! unknowns), so rows are streamed into a [`RowSpace`] that keeps at most one
//! pivot row per column. Module lengths are read off a Smith form of the
//! pivot rows.

use crate::arith::inv_mod;

/// Arithmetic context for `Z/p^m`. The modulus must stay below `2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModRing {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl ModRing {
    pub fn new(p: u64, m: u32) -> Self {
        let modulus = p.checked_pow(m).expect("modulus overflow");
        assert!(modulus < (1 << 32), "modulus too large for dense kernels");
        ModRing { p, m, modulus }
    }

    pub fn field(p: u64) -> Self {
        Self::new(p, 1)
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.modulus
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a) % self.modulus
    }

    /// `p`-adic valuation of a residue (`m` for zero).
    pub fn val(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a as i64, self.modulus)
    }

    pub fn pow_p(&self, v: u32) -> u64 {
        self.p.pow(v) % self.modulus
    }

    /// Writes `a = p^v * u` with `u` a unit; returns `(v, u^{-1})`.
    fn split(&self, a: u64) -> (u32, u64) {
        let v = self.val(a);
        let u = a / self.p.pow(v);
        (v, self.inv(u).expect("unit part"))
    }
}

/// Row module of a matrix over `Z/p^m`, accumulated one row at a time.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ring: ModRing,
    cols: usize,
    pivots: Vec<Option<(u32, Vec<u64>)>>,
}

impl RowSpace {
    pub fn new(ring: ModRing, cols: usize) -> Self {
        RowSpace { ring, cols, pivots: vec![None; cols] }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    /// Adds a row to the spanning set.
    pub fn insert(&mut self, row: Vec<u64>) {
        debug_assert_eq!(row.len(), self.cols);
        let r = self.ring;
        let mut stack = vec![row];
        while let Some(mut row) = stack.pop() {
            let mut j = 0;
            while j < self.cols {
                let a = row[j];
                if a == 0 {
                    j += 1;
                    continue;
                }
                let va = r.val(a);
                let vp = self.pivots[j].as_ref().map(|(v, _)| *v);
                match vp {
                    Some(vp) if va >= vp => {
                        let (_, piv) = self.pivots[j].as_ref().unwrap();
                        let f = (a / r.p.pow(vp)) % r.modulus;
                        for (x, y) in row.iter_mut().zip(piv.iter()).skip(j) {
                            *x = r.sub(*x, r.mul(f, *y));
                        }
                        j += 1;
                    }
                    _ => {
                        let (_, uinv) = r.split(a);
                        for x in row.iter_mut().skip(j) {
                            *x = r.mul(*x, uinv);
                        }
                        let spawn_factor = r.pow_p(r.m - va);
                        if spawn_factor != 0 {
                            let spawned: Vec<u64> = row.iter().map(|&x| r.mul(x, spawn_factor)).collect();
                            if spawned.iter().any(|&x| x != 0) {
                                stack.push(spawned);
                            }
                        }
                        let old = self.pivots[j].replace((va, row));
                        match old {
                            Some((_, old_row)) => {
                                row = old_row;
                                // old_row has valuation > va at column j; keep reducing it.
                            }
                            None => break,
                        }
                    }
                }
            }
        }
    }

    /// Valuations of the Smith invariants of the accumulated rows.
    pub fn smith_valuations(&self) -> Vec<u32> {
        let r = self.ring;
        let mut a: Vec<Vec<u64>> = self.pivots.iter().flatten().map(|(_, row)| row.clone()).collect();
        let rows = a.len();
        let cols = self.cols;
        let mut out = Vec::new();
        for t in 0..rows.min(cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 {
                        let v = r.val(x);
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
                if best.is_some_and(|(v, _, _)| v == 0) {
                    break;
                }
            }
            let Some((v, bi, bj)) = best else { break };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let (_, uinv) = r.split(a[t][t]);
            for x in a[t].iter_mut() {
                *x = r.mul(*x, uinv);
            }
            let pv = r.p.pow(v);
            let pivot_row = a[t].clone();
            for row in a.iter_mut().skip(t + 1) {
                let f = row[t] / pv;
                if f != 0 {
                    for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                        *x = r.sub(*x, r.mul(f, *y));
                    }
                }
            }
            for j in (t + 1)..cols {
                let f = a[t][j] / pv;
                if f != 0 {
                    for row in a.iter_mut() {
                        let y = row[t];
                        row[j] = r.sub(row[j], r.mul(f, y));
                    }
                }
            }
            out.push(v);
        }
        out
    }

    /// `log_p` of the size of the row module.
    pub fn length(&self) -> u32 {
        self.smith_valuations().iter().map(|v| self.ring.m - v).sum()
    }

    /// `log_p` of the size of `{x : A x = 0}` for the accumulated matrix `A`.
    pub fn kernel_length(&self) -> u32 {
        self.ring.m * self.cols as u32 - self.length()
    }

    /// Rank over `F_p` (requires `m = 1`).
    pub fn rank(&self) -> usize {
        assert_eq!(self.ring.m, 1);
        self.pivots.iter().filter(|x| x.is_some()).count()
    }

    /// Reduced row echelon rows over `F_p`, sorted by pivot column.
    pub fn rref(&self) -> Vec<(usize, Vec<u64>)> {
        assert_eq!(self.ring.m, 1, "rref needs a field");
        let r = self.ring;
        let mut rows: Vec<(usize, Vec<u64>)> = self
            .pivots
            .iter()
            .enumerate()
            .filter_map(|(j, x)| x.as_ref().map(|(_, row)| (j, row.clone())))
            .collect();
        for idx in (0..rows.len()).rev() {
            let (j, piv) = rows[idx].clone();
            for other in rows.iter_mut().take(idx) {
                let f = other.1[j];
                if f != 0 {
                    for (x, y) in other.1.iter_mut().zip(piv.iter()) {
                        *x = r.sub(*x, r.mul(f, *y));
                    }
                }
            }
        }
        rows
    }

    /// Basis of the null space `{x : A x = 0}` over `F_p`.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let r = self.ring;
        let rref = self.rref();
        let pivot_cols: Vec<usize> = rref.iter().map(|(j, _)| *j).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (j, row) in &rref {
                v[*j] = r.neg(row[free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Whether `v` lies in the row space (over `F_p`).
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut copy = self.clone();
        let before = copy.length();
        copy.insert(v.to_vec());
        copy.length() == before
    }
}

/// Dense square or rectangular matrix over `Z/p^m`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix, ring: &ModRing) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % ring.modulus;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64], ring: &ModRing) -> Vec<u64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % ring.modulus))
            .collect()
    }

    pub fn sub(&self, other: &Matrix, ring: &ModRing) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(*a, *b)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix, ring: &ModRing) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, ring.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }
}

/// Inverse of a square matrix over `Z/p^m`, if it exists.
pub fn invert(a: &Matrix, ring: &ModRing) -> Option<Matrix> {
    let n = a.rows;
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| ring.val(aug[r][c]) == 0)?;
        aug.swap(c, piv);
        let inv = ring.inv(aug[c][c])?;
        for x in aug[c].iter_mut() {
            *x = ring.mul(*x, inv);
        }
        let prow = aug[c].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != c && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x = ring.sub(*x, ring.mul(f, *y));
                }
            }
        }
    }
    let rows: Vec<Vec<u64>> = aug.into_iter().map(|r| r[n..].to_vec()).collect();
    Some(Matrix::from_rows(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_kernel_size(rows: &[Vec<u64>], ring: ModRing) -> u64 {
        let cols = rows[0].len();
        let total = ring.modulus.pow(cols as u32);
        let mut count = 0;
        for code in 0..total {
            let mut x = vec![0u64; cols];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = c % ring.modulus;
                c /= ring.modulus;
            }
            if rows.iter().all(|r| r.iter().zip(&x).fold(0, |acc, (a, b)| (acc + a * b) % ring.modulus) == 0) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn kernel_length_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, m) in &[(2u64, 1u32), (3, 1), (3, 2), (2, 3), (5, 2)] {
            let ring = ModRing::new(p, m);
            for _ in 0..40 {
                let cols = rng.gen_range(1..=3);
                let nrows = rng.gen_range(1..=5);
                let rows: Vec<Vec<u64>> = (0..nrows)
                    .map(|_| {
                        (0..cols)
                            .map(|_| {
                                // bias towards non-units so valuations matter
                                let x = rng.gen_range(0..ring.modulus);
                                if rng.gen_bool(0.5) { ring.mul(x, p) } else { x }
                            })
                            .collect()
                    })
                    .collect();
                let mut rs = RowSpace::new(ring, cols);
                for r in &rows {
                    rs.insert(r.clone());
                }
                let size = brute_kernel_size(&rows, ring);
                assert_eq!(p.pow(rs.kernel_length()), size, "{rows:?} mod {p}^{m}");
            }
        }
    }

    #[test]
    fn nullspace_over_field() {
        let ring = ModRing::field(5);
        let rows = vec![vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2]];
        let mut rs = RowSpace::new(ring, 4);
        for r in &rows {
            rs.insert(r.clone());
        }
        let ns = rs.nullspace();
        assert_eq!(ns.len() + rs.rank(), 4);
        for v in &ns {
            for r in &rows {
                assert_eq!(r.iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % 5), 0);
            }
        }
    }

    #[test]
    fn inverse_mod_prime_power() {
        let ring = ModRing::new(3, 2);
        let a = Matrix::from_rows(&[vec![1, 3], vec![2, 1]]);
        let inv = invert(&a, &ring).unwrap();
        assert!(a.mul(&inv, &ring).is_identity());
        let sing = Matrix::from_rows(&[vec![3, 0], vec![0, 1]]);
        assert!(invert(&sing, &ring).is_none());
    }
}
