//! Acceptance suite: one PASS/FAIL line per criterion. Every expected value is
//! recomputed here by an independent route (naive enumeration, closed-form
//! predictions or exact arithmetic) rather than read back from the library.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::hash::{Hash, Hasher};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use heegcert_core::certifier::{certify, Certificate, CertificationRequest, HypothesisStatus, Verdict};
use heegcert_core::cohomology::{
    filtration_check, h1_all_pairs, h2_all_triples, h_groups_with, matrix_group, sah_witness, theorem_5_16_check,
    CohomologyOptions, FiltrationGroup,
};
use heegcert_core::elliptic::{
    a_n_coefficients, count_points_with, p_torsion_free_over_k, quadratic_twist, CountMethod, CurveQ, Kodaira,
    ReductionType,
};
use heegcert_core::finite_gl2::{list_k_exceptional, FiniteField, Mat2};
use heegcert_core::heegner::{
    auxiliary_primes, divisibility_of_point, heegner_trace_with, norm_relation_check, p_divisibility_test,
    universal_norm_unit, CurveK, DivisibilityVerdict, PointK, Uniformization,
};
use heegcert_core::linalg::{Matrix, ModRing};
use heegcert_core::quadfield::{build_field, heegner_forms, KElem};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:.2?}, limit {limit:?}"))
    } else {
        Ok(format!("{t:.2?}"))
    }
}

// ---------------------------------------------------------------------------
// small independent arithmetic

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn odd_primes_to(n: u64) -> Vec<u64> {
    (3..=n).filter(|&q| is_prime(q)).collect()
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `(D / l)` for a discriminant `D` and a prime `l`.
fn kronecker_prime(d: i64, l: u64) -> i32 {
    if l == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = d.rem_euclid(l as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn squarefree(n: u64) -> bool {
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d * d))
}

fn fundamental(d: i64) -> bool {
    let m = d.rem_euclid(4);
    if m == 1 {
        return squarefree(d.unsigned_abs());
    }
    if m == 0 {
        let q = d / 4;
        return matches!(q.rem_euclid(4), 2 | 3) && squarefree(q.unsigned_abs());
    }
    false
}

fn valuation(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    while !x.is_zero() && (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

fn ainvs_mod(e: &CurveQ, p: u64) -> [i64; 5] {
    let pb = BigInt::from(p);
    let v: Vec<i64> = e.ainvs().iter().map(|a| a.mod_floor(&pb).try_into().unwrap()).collect();
    [v[0], v[1], v[2], v[3], v[4]]
}

/// Affine solutions of the Weierstrass equation over `F_p`, singular point included.
fn affine_count(e: &CurveQ, p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = ainvs_mod(e, p);
    let p = p as i64;
    let mut n = 0;
    for x in 0..p {
        let rhs = (((x + a2) * x % p + a4) * x % p + a6) % p;
        for y in 0..p {
            if (y * y + a1 * x % p * y + a3 * y - rhs).rem_euclid(p) == 0 {
                n += 1;
            }
        }
    }
    n
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else { continue };
        rows.swap(r, piv);
        let inv = pow_mod(rows[r][c], p - 2, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_multiple_of(p) {
                let f = rows[i][c] * inv % p;
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p * p - f * rows[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

/// `x + y sqrt(d)` with exact rational parts.
#[derive(Clone, PartialEq)]
struct Kq {
    x: BigRational,
    y: BigRational,
    d: i64,
}

impl Kq {
    fn of(e: &KElem, d: i64) -> Self {
        Kq { x: e.x.clone(), y: e.y.clone(), d }
    }

    fn int(n: &BigInt, d: i64) -> Self {
        Kq { x: BigRational::from_integer(n.clone()), y: BigRational::zero(), d }
    }

    fn add(&self, o: &Kq) -> Kq {
        Kq { x: &self.x + &o.x, y: &self.y + &o.y, d: self.d }
    }

    fn mul(&self, o: &Kq) -> Kq {
        let d = BigRational::from_integer(BigInt::from(self.d));
        Kq { x: &self.x * &o.x + d * &self.y * &o.y, y: &self.x * &o.y + &self.y * &o.x, d: self.d }
    }
}

/// Weierstrass equation over `K`, evaluated without the library's field arithmetic.
fn on_curve_exact(e: &CurveQ, pt: &PointK, d: i64) -> bool {
    let PointK::Affine { x, y } = pt else { return true };
    let (x, y) = (Kq::of(x, d), Kq::of(y, d));
    let a: Vec<Kq> = e.ainvs().iter().map(|v| Kq::int(v, d)).collect();
    let lhs = y.mul(&y).add(&a[0].mul(&x).mul(&y)).add(&a[2].mul(&y));
    let rhs = x.mul(&x).mul(&x).add(&a[1].mul(&x).mul(&x)).add(&a[3].mul(&x)).add(&a[4]);
    lhs == rhs
}

fn curve(a: [i64; 5]) -> CurveQ {
    CurveQ::new(a).expect("corpus curve")
}

/// Curves of small conductor: 11, 14, 15, 19, 37 (two), 43, 53, 57, 58, 61, 67, 73, 79, 91 (two), 389.
const CORPUS: [[i64; 5]; 17] = [
    [0, -1, 1, -10, -20],
    [1, 0, 1, 4, -6],
    [1, 1, 1, -10, -10],
    [0, 1, 1, -9, -15],
    [0, 0, 1, -1, 0],
    [0, 1, 1, -23, -50],
    [0, 1, 1, 0, 0],
    [1, -1, 1, 0, 0],
    [0, -1, 1, -2, 2],
    [1, -1, 0, -1, 1],
    [1, 0, 0, -2, 1],
    [0, 1, 1, -12, -21],
    [1, -1, 0, 4, -3],
    [1, 1, 1, -2, 0],
    [0, 0, 1, 1, 0],
    [0, 1, 1, -7, 5],
    [0, 1, 1, -2, 0],
];

const DESK: [i64; 5] = [0, 0, 1, -1, 0];

// ---------------------------------------------------------------------------
// 1. k-exceptional tables

fn k_exceptional_tables() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for p in odd_primes_to(50) {
        for f in 1..=3u32 {
            let got = list_k_exceptional(p, f, 200).map_err(|e| e.to_string())?;
            let residues = |n: u64, rs: &[u64]| rs.iter().any(|&r| p % n == r % n || p % n == (n - r % n) % n);
            let expected: Vec<u64> = match f {
                1 => if p != 3 { vec![3] } else { vec![] },
                2 => [3, 5].into_iter().filter(|&n| residues(n, &[2])).collect(),
                _ => [3, 7, 9].into_iter().filter(|&n| residues(n, &[2, 4])).collect(),
            };
            ensure!(got == expected, "p = {p}, f = {f}: got {got:?}, expected {expected:?}");
            rows += 1;
        }
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("{rows} (p, f) tables match, {t}"))
}

// ---------------------------------------------------------------------------
// 2. (b) <=> (c) over all homothety-free irreducible subgroups of GL_2(F_p)

type M2 = [u64; 4];
const ID: M2 = [1, 0, 0, 1];

fn mmul(a: &M2, b: &M2, p: u64) -> M2 {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

fn minv(a: &M2, p: u64) -> M2 {
    let det = (a[0] * a[3] + p * p - a[1] * a[2] % p) % p;
    let i = pow_mod(det, p - 2, p);
    [a[3] * i % p, (p - a[1]) % p * i % p, (p - a[2]) % p * i % p, a[0] * i % p]
}

fn nontrivial_scalar(m: &M2) -> bool {
    m[1] == 0 && m[2] == 0 && m[0] == m[3] && m[0] != 1
}

fn gl2(p: u64) -> Vec<M2> {
    let mut out = Vec::new();
    for i in 0..p.pow(4) {
        let m = [i % p, i / p % p, i / (p * p) % p, i / p.pow(3)];
        if !(m[0] * m[3] + p * p - m[1] * m[2]).is_multiple_of(p) {
            out.push(m);
        }
    }
    out
}

/// Closure of `gens`, or `None` once a nontrivial homothety appears.
fn homothety_free_closure(gens: &[M2], p: u64, cap: usize) -> Option<Vec<M2>> {
    let mut seen: HashSet<M2> = HashSet::from([ID]);
    let mut queue = VecDeque::from([ID]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mmul(&x, g, p);
            if nontrivial_scalar(&y) {
                return None;
            }
            if seen.insert(y) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<M2> = seen.into_iter().collect();
    v.sort_unstable();
    Some(v)
}

fn fingerprint(sorted: &[M2]) -> u64 {
    let mut h = DefaultHasher::new();
    sorted.hash(&mut h);
    h.finish()
}

/// Conjugacy classes of subgroups meeting the centre trivially, built by
/// joining cyclic subgroups one at a time.
fn homothety_free_classes(p: u64) -> Vec<(Vec<M2>, Vec<M2>)> {
    let all = gl2(p);
    let cap = all.len() / (p as usize - 1);
    let inverses: Vec<M2> = all.iter().map(|g| minv(g, p)).collect();
    let mut cyclic = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for g in &all {
        if let Some(c) = homothety_free_closure(&[*g], p, cap) {
            if c.len() > 1 && seen_cyclic.insert(c) {
                cyclic.push(*g);
            }
        }
    }
    let orbit = |h: &[M2]| -> Vec<u64> {
        all.iter()
            .zip(&inverses)
            .map(|(g, gi)| {
                let mut c: Vec<M2> = h.iter().map(|x| mmul(&mmul(g, x, p), gi, p)).collect();
                c.sort_unstable();
                fingerprint(&c)
            })
            .collect()
    };
    let mut seen: HashSet<u64> = HashSet::from([fingerprint(&[ID])]);
    let mut reps: Vec<(Vec<M2>, Vec<M2>)> = vec![(Vec::new(), vec![ID])];
    let mut i = 0;
    while i < reps.len() {
        let (gens, elems) = reps[i].clone();
        let members: HashSet<M2> = elems.iter().copied().collect();
        for c in &cyclic {
            if members.contains(c) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(*c);
            let Some(h) = homothety_free_closure(&g2, p, cap) else { continue };
            if seen.insert(fingerprint(&h)) {
                seen.extend(orbit(&h));
                reps.push((g2, h));
            }
        }
        i += 1;
    }
    reps
}

fn has_stable_line(gens: &[M2], p: u64) -> bool {
    let lines = (0..p).map(|t| [1, t]).chain(std::iter::once([0, 1]));
    for v in lines {
        let stable = gens.iter().all(|g| {
            let w = [(g[0] * v[0] + g[1] * v[1]) % p, (g[2] * v[0] + g[3] * v[1]) % p];
            (w[0] * v[1] + p * p - w[1] * v[0]).is_multiple_of(p)
        });
        if stable {
            return true;
        }
    }
    false
}

/// `dim Hom_{F_p}(End^0(V), V)^H` by direct linear algebra on the six unknowns.
fn hom_end0_v(gens: &[M2], p: u64) -> usize {
    // End^0 basis E12, E21, diag(1, -1); coordinates of [[a, b], [c, -a]] are (b, c, a)
    let basis: [M2; 3] = [[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, p - 1]];
    let coords = |m: &M2| [m[1], m[2], m[0]];
    let mut rows = Vec::new();
    for g in gens {
        let gi = minv(g, p);
        for (j, x) in basis.iter().enumerate() {
            let y = coords(&mmul(&mmul(&gi, x, p), g, p));
            for i in 0..2 {
                let mut row = vec![0u64; 6];
                for r in 0..2 {
                    for s in 0..3 {
                        row[r * 3 + s] = (row[r * 3 + s] + g[i * 2 + r] * y[s]) % p;
                    }
                }
                row[i * 3 + j] = (row[i * 3 + j] + p - 1) % p;
                rows.push(row);
            }
        }
    }
    6 - rank_mod(rows, p)
}

fn order_of(m: &M2, p: u64) -> u64 {
    let mut x = *m;
    let mut n = 1;
    while x != ID {
        x = mmul(&x, m, p);
        n += 1;
    }
    n
}

fn theorem_equivalence() -> Outcome {
    let start = Instant::now();
    let mut summary = Vec::new();
    for p in [3u64, 5, 7, 11] {
        let k = FiniteField::build(p, 1).map_err(|e| e.to_string())?;
        let classes = homothety_free_classes(p);
        let mut irreducible = 0;
        let mut nonvanishing = 0;
        for (gens, elems) in &classes {
            if gens.is_empty() || has_stable_line(gens, p) {
                continue;
            }
            irreducible += 1;
            let n = elems.iter().filter(|m| order_of(m, p) % 2 == 1).count();
            let size = elems.len();
            ensure!(n % 2 == 1 && n >= 3 && (size == n || size == 2 * n), "p = {p}: shape of a group of order {size} with {n} odd elements");
            let brute = hom_end0_v(gens, p);
            let predicted_nonzero = n == 3 && p != 3;
            ensure!((brute > 0) == predicted_nonzero, "p = {p}, |H| = {size}, n = {n}: brute-force dim {brute}");
            let mats: Vec<Mat2> = gens.iter().map(|g| Mat2::from_ints(&k, g.map(|x| x as i64))).collect();
            let r = theorem_5_16_check(&k, &mats).map_err(|e| e.to_string())?;
            ensure!(r.agree && r.vanishing == (brute == 0) && r.n == Some(n as u64), "p = {p}, |H| = {size}: library report disagrees");
            nonvanishing += usize::from(brute > 0);
        }
        if p == 3 {
            ensure!(irreducible == 0, "p = 3 has {irreducible} homothety-free irreducible classes");
        } else {
            ensure!(irreducible > 0, "p = {p}: no irreducible classes found");
        }
        summary.push(format!("p={p}: {irreducible} irreducible, {nonvanishing} nonvanishing"));
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("{}, {t}", summary.join("; ")))
}

// ---------------------------------------------------------------------------
// 3. cohomology oracles

fn matrices(p: u64, dim: usize, entries: &[Vec<u64>]) -> Vec<Matrix> {
    entries.iter().map(|v| Matrix::from_rows(&v.chunks(dim).map(|r| r.iter().map(|x| x % p).collect()).collect::<Vec<_>>())).collect()
}

fn random_invertible(rng: &mut ChaCha8Rng, p: u64, dim: usize) -> Vec<u64> {
    loop {
        let v: Vec<u64> = (0..dim * dim).map(|_| rng.gen_range(0..p)).collect();
        let rows: Vec<Vec<u64>> = v.chunks(dim).map(<[u64]>::to_vec).collect();
        if rank_mod(rows, p) == dim {
            return v;
        }
    }
}

fn permutation_matrix(perm: &[usize]) -> Vec<u64> {
    let n = perm.len();
    let mut v = vec![0; n * n];
    for (i, &j) in perm.iter().enumerate() {
        v[j * n + i] = 1;
    }
    v
}

fn cohomology_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let brute = |deg: u8| CohomologyOptions { max_degree: deg, fast_paths: false, basis: false };

    // (i) coprime order
    let mut coprime = 0;
    let mut attempts = 0;
    while coprime < 60 {
        attempts += 1;
        ensure!(attempts < 5000, "could not draw enough coprime groups");
        let (p, dim, gens) = match attempts % 3 {
            0 => {
                let n = rng.gen_range(3..=4usize);
                let p = [5u64, 7, 11][rng.gen_range(0..3)];
                let gens: Vec<Vec<u64>> = (0..rng.gen_range(1..=2))
                    .map(|_| {
                        let mut perm: Vec<usize> = (0..n).collect();
                        for i in (1..n).rev() {
                            perm.swap(i, rng.gen_range(0..=i));
                        }
                        permutation_matrix(&perm)
                    })
                    .collect();
                (p, n, gens)
            }
            1 => {
                let p = [5u64, 7][rng.gen_range(0..2)];
                (p, 2, (0..rng.gen_range(1..=2)).map(|_| random_invertible(&mut rng, p, 2)).collect())
            }
            _ => (2, 3, (0..rng.gen_range(1..=2)).map(|_| random_invertible(&mut rng, 2, 3)).collect()),
        };
        let Ok((g, m)) = matrix_group(ModRing::field(p), dim, &matrices(p, dim, &gens), 64) else { continue };
        if (g.order() as u64).gcd(&p) != 1 {
            continue;
        }
        let r = h_groups_with(&g, &m, brute(2)).map_err(|e| e.to_string())?;
        ensure!(r.h1 == 0 && r.h2 == Some(0), "order {} over F_{p}: H^1 = {}, H^2 = {:?}", g.order(), r.h1, r.h2);
        if g.order() <= 12 {
            let a = h1_all_pairs(&g, &m).map_err(|e| e.to_string())?;
            let b = h2_all_triples(&g, &m).map_err(|e| e.to_string())?;
            ensure!(a == 0 && b == 0, "order {} over F_{p}: cochain-level H^1 = {a}, H^2 = {b}", g.order());
        }
        coprime += 1;
    }

    // (ii) Sah witnesses
    let mut witnessed = 0;
    let mut divisible_order = 0;
    for round in 0..400 {
        let p = [3u64, 5][round % 2];
        let mut gens: Vec<Vec<u64>> = (0..rng.gen_range(1..=2)).map(|_| random_invertible(&mut rng, p, 2)).collect();
        if round % 3 == 0 {
            gens.push(vec![p - 1, 0, 0, p - 1]);
        }
        let Ok((g, m)) = matrix_group(ModRing::field(p), 2, &matrices(p, 2, &gens), 500) else { continue };
        if sah_witness(&g, &m).is_none() {
            continue;
        }
        witnessed += 1;
        let deg = if g.order() <= 64 { 2 } else { 1 };
        let r = h_groups_with(&g, &m, brute(deg)).map_err(|e| e.to_string())?;
        ensure!(r.h1 == 0 && r.h2.unwrap_or(0) == 0, "Sah witness but H^1 = {}, H^2 = {:?} (order {})", r.h1, r.h2, g.order());
        if (g.order() as u64).is_multiple_of(p) {
            divisible_order += 1;
        }
    }
    ensure!(divisible_order >= 10, "only {divisible_order} Sah instances with p | #G");

    // (iii) unipotent C_3 on F_3^2
    let (g, m) = matrix_group(ModRing::field(3), 2, &matrices(3, 2, &[vec![1, 1, 0, 1]]), 10).map_err(|e| e.to_string())?;
    let r = h_groups_with(&g, &m, brute(1)).map_err(|e| e.to_string())?;
    let pairs = h1_all_pairs(&g, &m).map_err(|e| e.to_string())?;
    ensure!(g.order() == 3 && r.h1 == 1 && pairs == 1, "unipotent C_3: H^1 = {} / {pairs}", r.h1);

    // (iv) inflation-restriction on filtration instances mod 9
    let mut filtrations = 0;
    for round in 0..200 {
        let gens: Vec<[i64; 4]> = (0..rng.gen_range(1..=2))
            .map(|_| loop {
                let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..9));
                if (m[0] * m[3] - m[1] * m[2]).rem_euclid(3) != 0 {
                    break m;
                }
            })
            .collect();
        let fg = if round % 4 == 0 {
            FiltrationGroup::full_preimage(3, 2, &[[1, 0, 0, 1], gens[0]])
        } else {
            match FiltrationGroup::generated(3, 2, &gens) {
                Ok(g) => g,
                Err(_) => continue,
            }
        };
        if fg.order() > 500 || fg.quotient(1).len() > 500 {
            continue;
        }
        let Ok(top) = fg.h1(2, 1) else { continue };
        let bottom = fg.h1(1, 1).map_err(|e| e.to_string())?;
        let (hom, _) = fg.graded_hom_dim(1);
        ensure!(bottom <= top && top <= bottom + hom, "mod 9 instance of order {}: {bottom} <= {top} <= {bottom} + {hom} fails", fg.order());
        let c = filtration_check(&fg, 2, 1).map_err(|e| e.to_string())?;
        ensure!(c.consistent, "filtration check inconsistent on an instance of order {}", fg.order());
        filtrations += 1;
    }
    ensure!(filtrations >= 20, "only {filtrations} filtration instances");
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{coprime} coprime groups, {witnessed} Sah instances ({divisible_order} with p | #G), C_3 gives 1, {filtrations} mod-9 filtrations, {t}"))
}

// ---------------------------------------------------------------------------
// 4. point counting

fn point_counting() -> Outcome {
    let start = Instant::now();
    let corpus: Vec<CurveQ> = CORPUS.iter().take(10).map(|&a| curve(a)).collect();
    let mut checked = 0;
    for e in &corpus {
        for p in (2..=97u64).filter(|&p| is_prime(p)) {
            if valuation(e.discriminant(), p) > 0 {
                continue;
            }
            let naive = affine_count(e, p) + 1;
            let ex = count_points_with(e.model(), p, CountMethod::Exhaustive).map_err(|x| x.to_string())?;
            let bs = count_points_with(e.model(), p, CountMethod::Bsgs).map_err(|x| x.to_string())?;
            ensure!(ex.count == naive && bs.count == naive, "p = {p}: naive {naive}, exhaustive {}, bsgs {}", ex.count, bs.count);
            let a = p as i64 + 1 - naive as i64;
            ensure!(a * a <= 4 * p as i64, "Hasse bound violated at p = {p}");
            checked += 1;
        }
        let an = a_n_coefficients(e, 200).map_err(|x| x.to_string())?;
        ensure!(an[1] == 1, "a_1 != 1");
        for m in 1..=200usize {
            for n in 1..=200 / m {
                if m.gcd(&n) == 1 {
                    ensure!(an[m * n] == an[m] * an[n], "a_{} != a_{m} a_{n}", m * n);
                }
            }
        }
        for p in (2..=200u64).filter(|&p| is_prime(p)) {
            let good = valuation(e.discriminant(), p) == 0;
            if good && p <= 97 {
                ensure!(an[p as usize] == p as i64 + 1 - (affine_count(e, p) as i64 + 1), "a_{p} disagrees with the count");
            }
            let (mut prev, mut cur, mut q) = (1i64, an[p as usize], p);
            while q * p <= 200 {
                let next = if good { an[p as usize] * cur - p as i64 * prev } else { an[p as usize] * cur };
                ensure!(an[(q * p) as usize] == next, "prime-power recursion fails at {}", q * p);
                prev = cur;
                cur = next;
                q *= p;
            }
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{checked} (curve, p) counts agree, a_n multiplicative to 200, {t}"))
}

// ---------------------------------------------------------------------------
// 5. Tate's algorithm

fn components(k: Kodaira) -> u32 {
    match k {
        Kodaira::I0 => 1,
        Kodaira::In(n) => n,
        Kodaira::II => 1,
        Kodaira::III => 2,
        Kodaira::IV => 3,
        Kodaira::I0Star => 5,
        Kodaira::InStar(n) => 5 + n,
        Kodaira::IVStar => 7,
        Kodaira::IIIStar => 8,
        Kodaira::IIStar => 9,
    }
}

fn kodaira_key(k: Kodaira, red: ReductionType) -> String {
    match k {
        Kodaira::In(_) if red == ReductionType::MultiplicativeSplit => "In split".into(),
        Kodaira::In(_) => "In nonsplit".into(),
        Kodaira::InStar(_) => "In*".into(),
        other => other.to_string(),
    }
}

/// Largest prime at which reductions are also counted point by point.
const NAIVE_LIMIT: u64 = 2000;

fn tate_properties() -> Outcome {
    let start = Instant::now();
    let mut models: Vec<CurveQ> = CORPUS.iter().map(|&a| curve(a)).collect();
    for p in [5i64, 7] {
        for a in [[0, 0, 0, 0, p], [0, 0, 0, 0, p * p], [0, 0, 0, 0, p.pow(3)], [0, 0, 0, 0, p.pow(4)], [0, 0, 0, 0, p.pow(5)], [0, 0, 0, p, 0], [0, 0, 0, p.pow(3), 0], [0, 0, 0, p * p, p.pow(3)]] {
            models.push(curve(a));
        }
    }
    // twists by bad primes turn I_n into I_n* and good reduction into I0*
    let base: Vec<CurveQ> = models.clone();
    for e in base.iter().take(CORPUS.len()) {
        for d in [-7i64, 5, 13, -11] {
            if let Ok(t) = quadratic_twist(e, d) {
                models.push(t);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while models.len() < 400 {
        let a = [rng.gen_range(0..2), rng.gen_range(-1..2), rng.gen_range(0..2), rng.gen_range(-40..41), rng.gen_range(-40..41)];
        if let Ok(e) = CurveQ::new(a) {
            if e.conductor_u64().is_some_and(|n| n < 1_000_000) {
                models.push(e);
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut local_count = 0;
    for e in &models {
        let disc = e.discriminant().clone();
        for l in prime_factors(disc.abs().try_into().map_err(|_| "discriminant too large".to_string())?).into_iter().chain([2, 3, 5, 7]) {
            let r = e.local_data(l).map_err(|x| x.to_string())?;
            let v = valuation(&disc, l);
            local_count += 1;
            ensure!(r.disc_valuation == v, "l = {l}: discriminant valuation {} vs {v}", r.disc_valuation);
            let m = components(r.kodaira);
            ensure!(v == r.conductor_exponent + m - 1, "Ogg's formula fails at l = {l} for {:?}: v = {v}, f = {}, m = {m}", e.ainvs(), r.conductor_exponent);
            if l >= 5 {
                ensure!(r.conductor_exponent <= 2, "conductor exponent {} at l = {l}", r.conductor_exponent);
            }
            let c = r.tamagawa;
            match r.reduction {
                ReductionType::Good => {
                    ensure!(c == 1 && r.kodaira == Kodaira::I0 && r.conductor_exponent == 0 && v == 0, "good reduction at {l} with c = {c}");
                    continue;
                }
                ReductionType::MultiplicativeSplit | ReductionType::MultiplicativeNonsplit => {
                    let Kodaira::In(n) = r.kodaira else { return Err(format!("multiplicative but {}", r.kodaira)) };
                    ensure!(n == v && r.conductor_exponent == 1, "I{n} with v = {v}");
                    let split = r.reduction == ReductionType::MultiplicativeSplit;
                    let a = if l <= NAIVE_LIMIT { l as i64 - affine_count(e, l) as i64 } else { r.a_l };
                    ensure!(a == if split { 1 } else { -1 } && r.a_l == a, "l = {l}: a_l = {} but the count gives {a}", r.a_l);
                    let want = if split { u64::from(n) } else if n % 2 == 0 { 2 } else { 1 };
                    ensure!(c == want, "I{n} {} at {l}: c = {c}", if split { "split" } else { "nonsplit" });
                }
                ReductionType::Additive => {
                    ensure!(c <= 4 && r.conductor_exponent >= 2, "additive at {l}: c = {c}, f = {}", r.conductor_exponent);
                    ensure!(r.a_l == 0 && (l > NAIVE_LIMIT || affine_count(e, l) == l), "additive at {l} but a_l = {}", r.a_l);
                    let allowed: &[u64] = match r.kodaira {
                        Kodaira::II | Kodaira::IIStar => &[1],
                        Kodaira::III | Kodaira::IIIStar => &[2],
                        Kodaira::IV | Kodaira::IVStar => &[1, 3],
                        Kodaira::I0Star => &[1, 2, 4],
                        Kodaira::InStar(_) => &[2, 4],
                        other => return Err(format!("additive reduction of type {other}")),
                    };
                    ensure!(allowed.contains(&c), "{} at {l} with c = {c}", r.kodaira);
                }
            }
            seen.insert(kodaira_key(r.kodaira, r.reduction));
        }
    }
    let required = ["In split", "In nonsplit", "II", "III", "IV", "I0*", "In*", "IV*", "III*", "II*"];
    let missing: Vec<&str> = required.iter().copied().filter(|k| !seen.contains(*k)).collect();
    ensure!(missing.is_empty(), "types never produced: {missing:?}");
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{} models, {local_count} local checks, all {} bad types seen, {t}", models.len(), required.len()))
}

// ---------------------------------------------------------------------------
// 6. class groups

fn reduce_form(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            let b2 = b + 2 * k * a;
            c = (b2 * b2 - (b * b - 4 * a * c)) / (4 * a);
            b = b2;
        }
        if a > c || (a == c && b < 0) {
            (a, b, c) = (c, -b, a);
            continue;
        }
        return (a, b, c);
    }
}

fn reduced_classes(d: i64) -> BTreeSet<(i64, i64, i64)> {
    let mut out = BTreeSet::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a || (b < 0 && a == c) || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.insert((a, b, c));
        }
        a += 1;
    }
    out
}

fn class_groups() -> Outcome {
    let start = Instant::now();
    let mut fields = 0;
    let mut heegner_sets = 0;
    for d in -199..0i64 {
        let ok = build_field(d);
        ensure!(ok.is_ok() == fundamental(d), "D = {d}: fundamental-discriminant test disagrees");
        let Ok(f) = ok else { continue };
        let classes = reduced_classes(d);
        ensure!(f.class_number == classes.len(), "h({d}) = {} but the oracle finds {}", f.class_number, classes.len());
        fields += 1;
        for n in [11u64, 14, 15, 19, 35, 37, 43, 57, 58, 61, 77, 79, 91] {
            if prime_factors(n).iter().any(|&l| kronecker_prime(d, l) != 1) {
                continue;
            }
            let set = heegner_forms(&f, n).map_err(|e| e.to_string())?;
            let mut hit = BTreeSet::new();
            for h in &set.forms {
                let (a, b, c) = (h.form.a, h.form.b, h.form.c);
                ensure!(a % n as i64 == 0 && (b - set.beta).rem_euclid(2 * n as i64) == 0 && b * b - 4 * a * c == d, "D = {d}, N = {n}: bad Heegner form {a},{b},{c}");
                ensure!(hit.insert(reduce_form(a, b, c)), "D = {d}, N = {n}: two Heegner forms in one class");
            }
            ensure!(hit == classes, "D = {d}, N = {n}: Heegner forms miss classes");
            heegner_sets += 1;
        }
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("{fields} fields, {heegner_sets} Heegner form sets bijective, {t}"))
}

// ---------------------------------------------------------------------------
// 7. Heegner numerics

fn heegner_numerics() -> Outcome {
    let e = curve(DESK);
    let f = build_field(-7).map_err(|x| x.to_string())?;
    let u60 = Uniformization::new(&e, 60).map_err(|x| x.to_string())?;
    let u120 = Uniformization::new(&e, 120).map_err(|x| x.to_string())?;
    let y60 = heegner_trace_with(&u60, &f, 1).map_err(|x| x.to_string())?;
    let y120 = heegner_trace_with(&u120, &f, 1).map_err(|x| x.to_string())?;
    ensure!(!y60.point.is_infinity() && on_curve_exact(&e, &y60.point, -7), "y_K = {} is not on E over K", y60.point);
    ensure!(y60.point == y120.point, "y_K changes with precision");
    let qs = auxiliary_primes(37, &f, 2, 100);
    ensure!(qs.len() == 2, "fewer than two auxiliary primes");
    let mut parts = vec![format!("y_K = {}", y60.point)];
    for q in qs {
        let r60 = norm_relation_check(&u60, &f, q).map_err(|x| x.to_string())?;
        let r120 = norm_relation_check(&u120, &f, q).map_err(|x| x.to_string())?;
        let (l60, l120) = (r60.residual.log10(), r120.residual.log10());
        ensure!(r60.pass && l60 < -30.0, "q = {q}: residual 10^{l60:.1} at prec 60");
        ensure!(l60 - l120 >= 20.0, "q = {q}: doubling precision only moves 10^{l60:.1} to 10^{l120:.1}");
        parts.push(format!("q={q}: 10^{l60:.0} -> 10^{l120:.0}"));
    }
    Ok(parts.join(", "))
}

// ---------------------------------------------------------------------------
// 8. divisibility round trip

fn divisibility_round_trip() -> Outcome {
    let start = Instant::now();
    let e = curve(DESK);
    let d = -23;
    let u = Uniformization::new(&e, 60).map_err(|x| x.to_string())?;
    let c = CurveK::new(&e, d);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let g = PointK::Affine { x: KElem::zero(d), y: KElem::zero(d) };
    // (-2, (-1 + sqrt -23) / 2): 4(x^3 - x) + 1 = -23
    let pt = PointK::Affine { x: KElem::from_int(-2, d), y: KElem::new(-half.clone(), half, d) };
    ensure!(on_curve_exact(&e, &g, d) && on_curve_exact(&e, &pt, d), "constructed points are off the curve");
    let combos = [(1, 0), (0, 1), (1, 1), (2, -1), (-1, 2), (1, -2), (2, 1)];
    let mut positives = 0;
    let mut negatives = 0;
    for p in [3u64, 5, 7] {
        let torsion_free = p_torsion_free_over_k(&e, p, d, 1000).map_err(|x| x.to_string())?.is_certified();
        for &(a, b) in &combos {
            if positives == 20 {
                break;
            }
            let q = c.add(&c.mul_i(a, &g), &c.mul_i(b, &pt));
            let pq = c.mul_i(p as i64, &q);
            ensure!(on_curve_exact(&e, &pq, d), "p Q is off the curve");
            let r = divisibility_of_point(&u, d, &pq, p).map_err(|x| x.to_string())?;
            let w = r.witness.clone().ok_or_else(|| format!("p = {p}, ({a}, {b}): p Q not found divisible"))?;
            ensure!(r.divisible() && c.mul_i(p as i64, &w) == pq, "p = {p}, ({a}, {b}): witness is not exact");
            ensure!(!torsion_free || w == q, "p = {p}, ({a}, {b}): witness differs from Q although E(K)[p] = 0");
            positives += 1;
            if torsion_free {
                let r = divisibility_of_point(&u, d, &q, p).map_err(|x| x.to_string())?;
                ensure!(r.verdict == DivisibilityVerdict::NumericNegative, "p = {p}, ({a}, {b}): Q itself reported divisible");
                negatives += 1;
            }
        }
    }
    ensure!(positives == 20, "only {positives} round trips");
    // desk instance: the generator over Q(sqrt -7) at p = 5
    let desk = p_torsion_free_over_k(&e, 5, -7, 1000).map_err(|x| x.to_string())?;
    ensure!(desk.is_certified(), "E(K)[5] = 0 not certified on the desk instance");
    let r = divisibility_of_point(&u, -7, &g, 5).map_err(|x| x.to_string())?;
    ensure!(r.verdict == DivisibilityVerdict::NumericNegative, "desk generator reported divisible");
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("20 exact positives, {} numeric negatives, {t}", negatives + 1))
}

// ---------------------------------------------------------------------------
// 9. local point-count congruence

fn local_congruence() -> Outcome {
    let mut combos = 0;
    for a in CORPUS {
        let e = curve(a);
        let n = e.conductor_u64().ok_or("conductor overflow")?;
        for p in odd_primes_to(50) {
            if n % p == 0 {
                continue;
            }
            let np = affine_count(&e, p) + 1;
            let ap = p as i64 + 1 - np as i64;
            if ap.rem_euclid(p as i64) == 0 {
                continue;
            }
            for d in [-7i64, -8, -11, -3] {
                let f = build_field(d).map_err(|x| x.to_string())?;
                let eta = kronecker_prime(d, p);
                let counts: Vec<u64> = match eta {
                    1 => vec![np, np],
                    0 => vec![np],
                    _ => vec![(p * p + 1) + 2 * p - (ap * ap) as u64],
                };
                let pi = p as i64;
                let product = counts.iter().fold(1i64, |acc, &c| acc * (c % p) as i64 % pi);
                // the unit root is a_p mod p
                let predicted = ((1 - ap) * (1 - ap * eta as i64)).rem_euclid(pi);
                ensure!(product == predicted, "E = {a:?}, p = {p}, D = {d}: {product} != {predicted} mod p");
                let r = universal_norm_unit(&e, &f, p, 4).map_err(|x| x.to_string())?;
                let lib: Vec<u64> = r.local_counts.iter().map(|&(_, c)| c).collect();
                ensure!(lib == counts, "E = {a:?}, p = {p}, D = {d}: library counts {lib:?} vs {counts:?}");
                ensure!(r.congruence_holds && r.product_mod_p as i64 == product && r.predicted_mod_p as i64 == predicted, "E = {a:?}, p = {p}, D = {d}: library report disagrees");
                combos += 1;
            }
        }
    }
    Ok(format!("{combos} ordinary (E, p, D) combinations"))
}

// ---------------------------------------------------------------------------
// 10. y_K in 3E(K) over Q(sqrt -3)

fn eisenstein_guard() -> Outcome {
    let f = build_field(-3).map_err(|x| x.to_string())?;
    let mut checked = Vec::new();
    for a in CORPUS {
        let e = curve(a);
        let n = e.conductor_u64().ok_or("conductor overflow")?;
        if prime_factors(n).iter().any(|&l| l % 3 != 1) {
            continue;
        }
        if !p_torsion_free_over_k(&e, 3, -3, 1000).map_err(|x| x.to_string())?.is_certified() {
            continue;
        }
        let u = Uniformization::new(&e, 60).map_err(|x| x.to_string())?;
        let y = heegner_trace_with(&u, &f, 1).map_err(|x| x.to_string())?;
        let r = p_divisibility_test(&u, &y, 3).map_err(|x| x.to_string())?;
        let w = r.witness.clone().ok_or_else(|| format!("N = {n}: y_K = {} not found in 3E(K)", y.point))?;
        let c = CurveK::new(&e, -3);
        ensure!(c.mul_i(3, &w) == y.point && on_curve_exact(&e, &w, -3), "N = {n}: witness is not exact");
        checked.push(n);
    }
    ensure!(checked.len() >= 3, "only {} instances", checked.len());
    Ok(format!("{} instances, conductors {checked:?}", checked.len()))
}

// ---------------------------------------------------------------------------
// 11. end-to-end certificate

fn schema_errors(v: &Value) -> Vec<String> {
    let mut errs = Vec::new();
    let mut need = |cond: bool, what: &str| {
        if !cond {
            errs.push(what.to_string());
        }
    };
    let req = &v["request"];
    need(req["curve"].as_array().is_some_and(|a| a.len() == 5 && a.iter().all(|x| x.as_str().is_some_and(|s| s.parse::<BigInt>().is_ok()))), "request.curve");
    need(req["disc"].is_i64() && req["prime"].is_u64() && req["prec"].is_u64(), "request scalars");
    need(v["route"].as_str().is_some_and(|r| ["4.8", "4.9", "4.17/6.10"].contains(&r)), "route");
    need(v["verdict"].as_str().is_some_and(|r| ["certified", "partially-certified", "not-certified"].contains(&r)), "verdict");
    let statuses = ["verified", "failed", "assumed", "numeric-negative-based"];
    need(
        v["hypotheses"].as_array().is_some_and(|hs| {
            !hs.is_empty()
                && hs.iter().all(|h| h["id"].is_string() && h["status"].as_str().is_some_and(|s| statuses.contains(&s)) && !h["evidence"].is_null())
        }),
        "hypotheses",
    );
    need(
        v["conclusions"].as_array().is_some_and(|cs| cs.iter().all(|c| ["layer", "statement", "basis"].iter().all(|k| c[k].is_string()))),
        "conclusions",
    );
    need(v["diagnostics"].is_object(), "diagnostics");
    let tool = &v["tool"];
    need(tool["version"].is_string() && tool["precision"].is_u64() && tool["bounds"].is_object(), "tool");
    errs
}

fn end_to_end() -> Outcome {
    let req = CertificationRequest::new(DESK, -7, 5);
    let a = certify(&req).map_err(|x| x.to_string())?;
    let b = certify(&req).map_err(|x| x.to_string())?;
    let json = a.to_json();
    ensure!(json == b.to_json(), "two runs differ");
    let v: Value = serde_json::from_str(&json).map_err(|x| x.to_string())?;
    let errs = schema_errors(&v);
    ensure!(errs.is_empty(), "schema violations: {errs:?}");
    let back: Certificate = serde_json::from_str(&json).map_err(|x| x.to_string())?;
    ensure!(back.to_json() == json, "parse and serialize is not byte-identical");
    ensure!(a.verdict == Verdict::Certified && !a.conclusions.is_empty(), "desk instance is {:?}", a.verdict);
    ensure!(a.hypotheses.iter().all(|h| h.status != HypothesisStatus::Assumed), "an assumed hypothesis on the desk instance");

    // p = 3 divides a_3 = -3: exactly one hypothesis flips
    let flipped = certify(&CertificationRequest::new(DESK, -7, 3)).map_err(|x| x.to_string())?;
    ensure!(flipped.verdict == Verdict::NotCertified && flipped.conclusions.is_empty(), "p = 3 is still {:?}", flipped.verdict);
    ensure!(flipped.failed() == ["4.9(b')"], "p = 3 fails {:?}", flipped.failed());
    Ok(format!("route {}, {} hypotheses, {} conclusions, {} bytes; p = 3 fails only 4.9(b')", a.route.tag(), a.hypotheses.len(), a.conclusions.len(), json.len()))
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("k-exceptional tables", k_exceptional_tables),
        ("Hom(End^0 V, V)^H vanishing matches the k-exceptional classification", theorem_equivalence),
        ("cohomology oracle suite", cohomology_oracles),
        ("point counting", point_counting),
        ("Tate's algorithm properties", tate_properties),
        ("class groups and Heegner forms", class_groups),
        ("Heegner point numerics", heegner_numerics),
        ("p-divisibility round trip", divisibility_round_trip),
        ("local point-count congruence", local_congruence),
        ("y_K in 3E(K) over Q(sqrt -3)", eisenstein_guard),
        ("end-to-end certificate", end_to_end),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {reason}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
