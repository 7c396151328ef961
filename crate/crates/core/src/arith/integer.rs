use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kronecker symbol `(d/n)` for `n >= 0`.
///
/// Completely multiplicative in `n`; zero exactly when `gcd(d, n) > 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    let v = n.trailing_zeros();
    if v > 0 {
        if d.rem_euclid(2) == 0 {
            return 0;
        }
        n >>= v;
        let r = d.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    let a = (d as i128).rem_euclid(n as i128) as u64;
    result * jacobi(a, n)
}

/// Jacobi symbol `(a/n)` for odd `n`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut result = 1i32;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol of an arbitrary integer modulo an odd prime.
pub fn legendre_big(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
    jacobi(r, p)
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: u64) -> Option<u64> {
    let m_i = m as i128;
    let (mut r0, mut r1) = (m_i, (a as i128).rem_euclid(m_i));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m_i) as u64)
}

/// Residue of a big integer modulo a machine modulus, in `[0, m)`.
pub fn mod_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Probable-prime test for big integers; exact below 2^64.
pub fn is_prime_big(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    let n_u = n.magnitude();
    let one = BigUint::one();
    let n_minus = n_u - &one;
    let s = n_minus.trailing_zeros().unwrap_or(0);
    let d = &n_minus >> s;
    'outer: for &a in MR_BASES.iter().chain([41u64, 43, 47, 53, 59, 61, 67, 71].iter()) {
        let mut x = BigUint::from(a).modpow(&d, n_u);
        if x == one || x == n_minus {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n_u;
            if x == n_minus {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound`, by a plain sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = (x.abs_diff(y)).gcd(&n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorisation of a 64-bit integer as sorted `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        let mut m = m;
        for p in [2u64, 3, 5, 7, 11, 13] {
            while m % p == 0 {
                primes.push(p);
                m /= p;
            }
        }
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }
    collect_exponents(primes)
}

fn collect_exponents(mut primes: Vec<u64>) -> Vec<(u64, u32)> {
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn pollard_brent_big(n: &BigInt) -> BigInt {
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c).mod_floor(n);
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut g = BigInt::one();
        let mut steps = 0u64;
        while g.is_one() {
            x = f(&x);
            y = f(&f(&y));
            g = (&x - &y).abs().gcd(n);
            steps += 1;
            if steps > 5_000_000 {
                break;
            }
        }
        if !g.is_one() && &g != n {
            return g;
        }
        c += 1;
    }
}

/// Prime factorisation of `|n|`. Factors beyond 64 bits use Pollard rho and a
/// probable-prime test, which is ample for discriminants at desk scale.
pub fn factor_big(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut small = Vec::new();
    for p in primes_up_to(1000) {
        let bp = BigInt::from(p);
        while (&n % &bp).is_zero() {
            small.push(p);
            n /= &bp;
        }
    }
    let mut out: Vec<(BigInt, u32)> = collect_exponents(small)
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e))
        .collect();
    let mut stack = vec![n];
    let mut large: Vec<BigInt> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(m64) = m.to_u64() {
            for (p, e) in factor_u64(m64) {
                for _ in 0..e {
                    large.push(BigInt::from(p));
                }
            }
            continue;
        }
        if is_prime_big(&m) {
            large.push(m);
            continue;
        }
        let d = pollard_brent_big(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    large.sort();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort();
    out
}

/// `p`-adic valuation of a nonzero integer (`u32::MAX` for zero).
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// A square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Whether `n` is squarefree (`n != 0`).
pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// Integer square root of a nonnegative `u64`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}
