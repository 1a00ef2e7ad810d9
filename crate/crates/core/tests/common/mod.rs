#![allow(dead_code)]

use proptest::prelude::*;
use wittlift::exactring::{Modulus, ModPoly};

pub const PRIMES: [u64; 4] = [3, 5, 7, 13];

/// Sparse polynomial over `Z/p^e` with per-variable degree ≤ `max_deg`.
pub fn poly(m: Modulus, names: &'static [&'static str], max_deg: u32, max_terms: usize) -> impl Strategy<Value = ModPoly> {
    let n = names.len();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), 0..m.order()), 0..=max_terms).prop_map(move |terms| {
        let mut g = ModPoly::with_var_names(m, names);
        for (e, c) in terms {
            g.add_term(e, c);
        }
        g
    })
}

/// `Σ_{x ∈ F_p} (1 + χ(x^3 + ax + b))` plus the point at infinity, with `χ` by Euler's criterion.
pub fn naive_point_count(a: u64, b: u64, p: u64) -> u64 {
    let pow = |mut x: u64, mut n: u64| {
        let mut r = 1;
        x %= p;
        while n > 0 {
            if n & 1 == 1 {
                r = r * x % p;
            }
            x = x * x % p;
            n >>= 1;
        }
        r
    };
    let mut n = 1;
    for x in 0..p {
        let v = (x * x % p * x + a % p * x + b) % p;
        n += match pow(v, (p - 1) / 2) {
            0 => 1,
            1 => 2,
            _ => 0,
        };
    }
    n
}

/// `a_p = p + 1 - #E(F_p)`.
pub fn naive_ap(a: u64, b: u64, p: u64) -> i64 {
    p as i64 + 1 - naive_point_count(a, b, p) as i64
}

/// `4a^3 + 27b^2 ≠ 0 mod p`.
pub fn smooth(a: u64, b: u64, p: u64) -> bool {
    let (a, b) = (a as u128 % p as u128, b as u128 % p as u128);
    (4 * a * a * a + 27 * b * b) % p as u128 != 0
}
