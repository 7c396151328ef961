use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let Form { a, b, c } = *self;
        b.abs() <= a && a <= c && !(b < 0 && (b == -a || a == c))
    }

    /// The reduced form properly equivalent to `self`.
    pub fn reduce(&self) -> Form {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        debug_assert!(a > 0 && b * b - 4 * a * c < 0);
        loop {
            if b > a || b <= -a {
                // translate b into (-a, a]
                let two_a = 2 * a;
                let k = Integer::div_floor(&(a - b), &two_a);
                let nb = b + k * two_a;
                c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
                b = nb;
            }
            if a > c || (a == c && b < 0) {
                (a, b, c) = (c, -b, a);
                continue;
            }
            break;
        }
        Form { a: a as i64, b: b as i64, c: c as i64 }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// All reduced primitive forms of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    assert!(d < 0 && d.rem_euclid(4) <= 1, "discriminant must be negative and 0 or 1 mod 4");
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = Form::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}
