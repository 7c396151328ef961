use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{FiniteField, Fq, Gl2Error};

pub const DEFAULT_CLOSURE_BOUND: usize = 1_000_000;

/// A 2x2 matrix `[[a, b], [c, d]]` stored row-major as field element indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2(pub [Fq; 4]);

impl Mat2 {
    pub fn new(a: Fq, b: Fq, c: Fq, d: Fq) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn identity() -> Self {
        Mat2([1, 0, 0, 1])
    }

    pub fn scalar(x: Fq) -> Self {
        Mat2([x, 0, 0, x])
    }

    pub fn diag(x: Fq, y: Fq) -> Self {
        Mat2([x, 0, 0, y])
    }

    pub fn from_ints(k: &FiniteField, e: [i64; 4]) -> Self {
        Mat2(e.map(|x| k.from_int(x)))
    }

    pub fn is_scalar(&self) -> bool {
        self.0[1] == 0 && self.0[2] == 0 && self.0[0] == self.0[3]
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn mul(&self, o: &Mat2, k: &FiniteField) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mat2([
            k.add(k.mul(a, e), k.mul(b, g)),
            k.add(k.mul(a, f), k.mul(b, h)),
            k.add(k.mul(c, e), k.mul(d, g)),
            k.add(k.mul(c, f), k.mul(d, h)),
        ])
    }

    pub fn det(&self, k: &FiniteField) -> Fq {
        let [a, b, c, d] = self.0;
        k.sub(k.mul(a, d), k.mul(b, c))
    }

    pub fn trace(&self, k: &FiniteField) -> Fq {
        k.add(self.0[0], self.0[3])
    }

    pub fn inv(&self, k: &FiniteField) -> Option<Mat2> {
        let di = k.inv(self.det(k))?;
        let [a, b, c, d] = self.0;
        Some(Mat2([k.mul(d, di), k.mul(k.neg(b), di), k.mul(k.neg(c), di), k.mul(a, di)]))
    }

    pub fn pow(&self, mut e: u64, k: &FiniteField) -> Mat2 {
        let mut acc = Mat2::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            base = base.mul(&base, k);
            e >>= 1;
        }
        acc
    }

    /// Order in `GL_2`; assumes the matrix is invertible.
    pub fn order(&self, k: &FiniteField) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while !x.is_identity() {
            x = x.mul(self, k);
            n += 1;
        }
        n
    }

    /// Smallest `m >= 1` with `self^m` scalar.
    pub fn projective_order(&self, k: &FiniteField) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while !x.is_scalar() {
            x = x.mul(self, k);
            n += 1;
        }
        n
    }

    /// Discriminant `tr^2 - 4 det` of the characteristic polynomial.
    pub fn discriminant(&self, k: &FiniteField) -> Fq {
        let t = self.trace(k);
        k.sub(k.mul(t, t), k.mul(k.from_int(4), self.det(k)))
    }

    pub fn apply(&self, v: [Fq; 2], k: &FiniteField) -> [Fq; 2] {
        let [a, b, c, d] = self.0;
        [k.add(k.mul(a, v[0]), k.mul(b, v[1])), k.add(k.mul(c, v[0]), k.mul(d, v[1]))]
    }

    /// Whether the line through `v` is mapped to itself.
    pub fn fixes_line(&self, v: [Fq; 2], k: &FiniteField) -> bool {
        let w = self.apply(v, k);
        k.sub(k.mul(w[0], v[1]), k.mul(w[1], v[0])) == 0
    }

    /// Entrywise image under a field map given as a lookup table.
    pub fn map_entries(&self, table: &[Fq]) -> Mat2 {
        Mat2(self.0.map(|x| table[x as usize]))
    }

    pub fn display(&self, k: &FiniteField) -> String {
        let e = self.0.map(|x| k.display(x));
        format!("[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}

/// Representatives `[1:t]` and `[0:1]` of the `q + 1` points of `P^1(k)`.
pub(crate) fn projective_line(k: &FiniteField) -> impl Iterator<Item = [Fq; 2]> + '_ {
    k.elements().map(|t| [1, t]).chain(std::iter::once([0, 1]))
}

/// Breadth-first closure of the group generated by `gens`, returned sorted.
pub fn closure(gens: &[Mat2], k: &FiniteField, bound: usize) -> Result<Vec<Mat2>, Gl2Error> {
    for g in gens {
        if g.det(k) == 0 {
            return Err(Gl2Error::BadInput(format!("singular generator {}", g.display(k))));
        }
    }
    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(Mat2::identity());
    queue.push_back(Mat2::identity());
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g, k);
            if seen.insert(y) {
                if seen.len() > bound {
                    return Err(Gl2Error::ClosureOverflow { bound });
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Mat2> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
