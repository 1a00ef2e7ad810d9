//! Crystalline Frobenius on `H^1_dR` of `y^2 = x^3 + ã x + b~` over `Z/p^2`.
//!
//! Frobenius lift `x ↦ x^p`, `y ↦ y^p (1 + E/y^(2p))^(1/2)` with
//! `E = Q(x^p) - Q(x)^p`, so
//! `φ(x^i dx/y) = Σ_k p·C(-1/2, k)·x^(p(i+1)-1) E^k dx / y^(p(2k+1))`.
//! Pole orders are reduced by exact forms: with `A = RQ + SQ'`,
//! `A dx/y^(2j+1) ≡ (R + 2S'/(2j-1)) dx/y^(2j-1)`, and at `j = 0`
//! `x^(m+2) ≡ -((2m+1)a x^m + 2m b x^(m-1))/(2m+3)`.
//!
//! Arithmetic is in `Z/p^N` with a global power `p^D` factored out: a
//! division by `p^v·u` multiplies all pending data by `p^v` instead. The final
//! result is known modulo `p^(N-D)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactring::Modulus;
use crate::fsplit::weierstrass_smooth;

/// Default precision slack.
pub const DEFAULT_SLACK: u32 = 2;

/// Matrix of `φ` in the basis `(dx/y, x dx/y)` over `Z/p^2`; column `c` is `φ(ω_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FrobMatrix2 {
    pub p: u64,
    pub a_tilde: u64,
    pub b_tilde: u64,
    pub entries: [[u64; 2]; 2],
}

impl FrobMatrix2 {
    pub fn trace(&self) -> u64 {
        (self.entries[0][0] + self.entries[1][1]) % (self.p * self.p)
    }

    pub fn det(&self) -> u64 {
        let q = (self.p * self.p) as u128;
        let e = self.entries;
        let ad = e[0][0] as u128 * e[1][1] as u128 % q;
        let bc = e[0][1] as u128 * e[1][0] as u128 % q;
        ((ad + q - bc) % q) as u64
    }
}

struct Ring {
    q: i128,
    p: i128,
}

impl Ring {
    fn r(&self, a: i128) -> i128 {
        a.rem_euclid(self.q)
    }

    fn mul(&self, a: i128, b: i128) -> i128 {
        (a * b).rem_euclid(self.q)
    }

    fn inv(&self, a: i128) -> i128 {
        // extended Euclid on a unit
        let (mut r0, mut r1) = (self.r(a), self.q);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        debug_assert_eq!(r0, 1);
        self.r(s0)
    }

    /// `n = p^v·u` with `u` a unit.
    fn split(&self, n: i128) -> (u32, i128) {
        let mut v = 0;
        let mut u = n;
        while u % self.p == 0 {
            u /= self.p;
            v += 1;
        }
        (v, u)
    }

    fn poly_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut r = vec![0i128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % self.q;
            }
        }
        self.norm(r)
    }

    fn norm(&self, mut a: Vec<i128>) -> Vec<i128> {
        for x in a.iter_mut() {
            *x = self.r(*x);
        }
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn add_into(&self, acc: &mut Vec<i128>, b: &[i128], scale: i128) {
        if acc.len() < b.len() {
            acc.resize(b.len(), 0);
        }
        for (i, &x) in b.iter().enumerate() {
            acc[i] = self.r(acc[i] + x * scale % self.q);
        }
    }

    /// Quotient and remainder by a monic polynomial.
    fn divrem_monic(&self, a: &[i128], d: &[i128]) -> (Vec<i128>, Vec<i128>) {
        let dd = d.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= dd {
            return (vec![], self.norm(r));
        }
        let mut quo = vec![0i128; r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = r[k + dd];
            quo[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.iter().enumerate() {
                r[k + j] = self.r(r[k + j] - c * b % self.q);
            }
        }
        r.truncate(dd);
        (self.norm(quo), self.norm(r))
    }

    fn pow(&self, a: &[i128], n: u64) -> Vec<i128> {
        let mut r = vec![1i128];
        for _ in 0..n {
            r = self.poly_mul(&r, a);
        }
        r
    }
}

/// Solves for `V` with `V·Q' ≡ 1 (mod Q)` by unit-pivot elimination; `None`
/// when `Q` is singular mod `p`.
fn inverse_derivative(ring: &Ring, q: &[i128], dq: &[i128]) -> Option<Vec<i128>> {
    // columns: images of 1, x, x^2 under multiplication by Q' mod Q
    let mut m = [[0i128; 4]; 3];
    for c in 0..3 {
        let mut basis = vec![0i128; c + 1];
        basis[c] = 1;
        let (_, rem) = ring.divrem_monic(&ring.poly_mul(&basis, dq), q);
        for r in 0..3 {
            m[r][c] = rem.get(r).copied().unwrap_or(0);
        }
    }
    m[0][3] = 1;
    for c in 0..3 {
        let pr = (c..3).find(|&r| m[r][c] % ring.p != 0)?;
        m.swap(pr, c);
        let inv = ring.inv(m[c][c]);
        for j in 0..4 {
            m[c][j] = ring.mul(m[c][j], inv);
        }
        for r in 0..3 {
            if r != c && m[r][c] != 0 {
                let k = m[r][c];
                for j in 0..4 {
                    m[r][j] = ring.r(m[r][j] - k * m[c][j] % ring.q);
                }
            }
        }
    }
    Some(ring.norm((0..3).map(|r| m[r][3]).collect()))
}

fn binom_half(ring: &Ring, k: u64) -> i128 {
    // C(-1/2, k) = (-1)^k C(2k, k) / 4^k
    let mut c = 1i128;
    for i in 0..k as i128 {
        c = c * (2 * k as i128 - i) / (i + 1);
    }
    let c = ring.mul(ring.r(c), ring.inv(ring.r(4i128.pow(k as u32))));
    if k % 2 == 1 {
        ring.r(-c)
    } else {
        c
    }
}

struct RawResult {
    cols: [[i128; 2]; 2],
    scale: u32,
}

/// One run at working precision `p^n` with `terms` series terms.
fn run(p: u64, a: i128, b: i128, n: u32, terms: u64) -> Result<RawResult> {
    let q = (p as i128).pow(n);
    let ring = Ring { q, p: p as i128 };
    let pp = p as i128;
    let qpoly = ring.norm(vec![b, a, 0, 1]);
    let dq = ring.norm(vec![a, 0, 3]);
    let v = inverse_derivative(&ring, &qpoly, &dq)
        .ok_or_else(|| Error::Singular("Q and Q' are not coprime mod p".into()))?;
    let mut qp = vec![0i128; 3 * p as usize + 1];
    qp[0] = b;
    qp[p as usize] = a;
    qp[3 * p as usize] = 1;
    let e = ring.norm(
        qp.iter()
            .zip(ring.pow(&qpoly, p).iter().chain(std::iter::repeat(&0)))
            .map(|(x, y)| x - y)
            .collect(),
    );

    let jmax = ((p * (2 * terms - 1)) as usize - 1) / 2;
    let mut cols = [[0i128; 2]; 2];
    let mut scale = 0u32;
    for i in 0..2usize {
        let mut pending: Vec<Vec<i128>> = vec![vec![]; jmax + 1];
        let mut ek = vec![1i128];
        for k in 0..terms {
            let mut mono = vec![0i128; p as usize * (i + 1)];
            mono[p as usize * (i + 1) - 1] = ring.mul(pp, binom_half(&ring, k));
            let j = ((p * (2 * k + 1)) as usize - 1) / 2;
            let t = ring.poly_mul(&mono, &ek);
            ring.add_into(&mut pending[j], &t, 1);
            ek = ring.poly_mul(&ek, &e);
        }
        let mut local_scale = 0u32;
        for j in (1..=jmax).rev() {
            let a_j = std::mem::take(&mut pending[j]);
            if a_j.is_empty() {
                continue;
            }
            let (_, s) = ring.divrem_monic(&ring.poly_mul(&a_j, &v), &qpoly);
            let mut num = a_j.clone();
            ring.add_into(&mut num, &ring.poly_mul(&s, &dq), -1);
            let (r, rem) = ring.divrem_monic(&num, &qpoly);
            debug_assert!(rem.is_empty());
            let (vv, u) = ring.split(2 * j as i128 - 1);
            let pv = pp.pow(vv);
            if vv > 0 {
                for pj in pending.iter_mut().take(j) {
                    for c in pj.iter_mut() {
                        *c = ring.mul(*c, pv);
                    }
                }
                local_scale += vv;
            }
            let ds: Vec<i128> = s.iter().enumerate().skip(1).map(|(d, &c)| ring.mul(c, d as i128)).collect();
            ring.add_into(&mut pending[j - 1], &r, pv);
            ring.add_into(&mut pending[j - 1], &ds, ring.mul(2, ring.inv(u)));
        }
        let mut a0 = ring.norm(std::mem::take(&mut pending[0]));
        while a0.len() > 2 {
            let deg = a0.len() - 1;
            let c = a0[deg];
            a0.pop();
            if c == 0 {
                a0 = ring.norm(a0);
                continue;
            }
            let m = deg as i128 - 2;
            let (vv, u) = ring.split(2 * m + 3);
            if vv > 0 {
                let pv = pp.pow(vv);
                for x in a0.iter_mut() {
                    *x = ring.mul(*x, pv);
                }
                local_scale += vv;
            }
            let k = ring.mul(c, ring.inv(u));
            let mi = m as usize;
            a0[mi] = ring.r(a0[mi] - ring.mul(k, ring.mul(2 * m + 1, a)));
            if m >= 1 {
                a0[mi - 1] = ring.r(a0[mi - 1] - ring.mul(k, ring.mul(2 * m, b)));
            }
            a0 = ring.norm(a0);
        }
        // bring both columns to a common scale
        let common = scale.max(local_scale);
        let adj_new = pp.pow(common - local_scale);
        let adj_old = pp.pow(common - scale);
        for row in 0..2 {
            for col in cols.iter_mut().take(i) {
                col[row] = ring.mul(col[row], adj_old);
            }
            cols[i][row] = ring.mul(a0.get(row).copied().unwrap_or(0), adj_new);
        }
        scale = common;
    }
    Ok(RawResult { cols, scale })
}

fn run_validated(p: u64, a: u64, b: u64, slack: u32) -> Result<[[u64; 2]; 2]> {
    let terms = slack as u64 + 3;
    let mut guess = 2 + slack + 2;
    for _ in 0..4 {
        let n = guess;
        if (p as f64).powi(n as i32) >= 2f64.powi(62) {
            return Err(Error::Precondition(format!(
                "working precision {p}^{n} exceeds machine integers; reduce the slack or p"
            )));
        }
        let raw = run(p, a as i128, b as i128, n, terms)?;
        if n < raw.scale + 2 + slack {
            guess = raw.scale + 2 + slack;
            continue;
        }
        let pd = (p as i128).pow(raw.scale);
        let p2 = (p * p) as i128;
        let mut out = [[0u64; 2]; 2];
        for (c, col) in raw.cols.iter().enumerate() {
            for (r, &x) in col.iter().enumerate() {
                if x % pd != 0 {
                    return Err(Error::Precision("scaled entry not divisible by the scale".into()));
                }
                out[r][c] = ((x / pd) % p2) as u64;
            }
        }
        return Ok(out);
    }
    Err(Error::Precision("working precision did not stabilize".into()))
}

/// Frobenius matrix with the default slack.
pub fn frobenius_matrix(a_tilde: u64, b_tilde: u64, p: u64) -> Result<FrobMatrix2> {
    frobenius_matrix_with_slack(a_tilde, b_tilde, p, DEFAULT_SLACK)
}

/// Computes at slack `δ` and `δ + 1` and fails unless both agree.
pub fn frobenius_matrix_with_slack(a_tilde: u64, b_tilde: u64, p: u64, slack: u32) -> Result<FrobMatrix2> {
    Modulus::prime(p)?;
    if p < 5 {
        return Err(Error::Precondition("the crystalline Frobenius needs p ≥ 5".into()));
    }
    if slack < 1 {
        return Err(Error::Precondition("slack must be at least 1".into()));
    }
    let q = p * p;
    let (a, b) = (a_tilde % q, b_tilde % q);
    if !weierstrass_smooth(a % p, b % p, p) {
        return Err(Error::Singular(format!("curve is singular mod {p}")));
    }
    let m1 = run_validated(p, a, b, slack)?;
    let m2 = run_validated(p, a, b, slack + 1)?;
    if m1 != m2 {
        return Err(Error::Precision(format!("slack {slack} and {} disagree", slack + 1)));
    }
    Ok(FrobMatrix2 {
        p,
        a_tilde: a,
        b_tilde: b,
        entries: m1,
    })
}

/// `a_p = p + 1 - #E(F_p)` by exhaustive count.
pub fn point_count_ap(a: u64, b: u64, p: u64) -> Result<i64> {
    let m = Modulus::prime(p)?;
    if !weierstrass_smooth(a % p, b % p, p) {
        return Err(Error::Singular(format!("curve is singular mod {p}")));
    }
    let mut squares = vec![0u64; p as usize];
    for y in 0..p {
        squares[m.mul(y, y) as usize] += 1;
    }
    let mut count = 1u64;
    for x in 0..p {
        let rhs = m.add(m.add(m.pow(x, 3), m.mul(a, x)), b % p);
        count += squares[rhs as usize];
    }
    Ok(p as i64 + 1 - count as i64)
}

/// `φ(dx/y) ∈ span(dx/y)` mod `p^2`.
pub fn f1_preserved(m: &FrobMatrix2) -> bool {
    m.entries[1][0].is_multiple_of(m.p * m.p)
}

/// `β` with `φ(dx/y) = p·β·dx/y`.
pub fn beta_scalar(m: &FrobMatrix2) -> Result<u64> {
    if !f1_preserved(m) {
        return Err(Error::F1NotPreserved);
    }
    let e = m.entries[0][0];
    if !e.is_multiple_of(m.p) {
        return Err(Error::Inconsistent("φ(dx/y) is not divisible by p".into()));
    }
    Ok(e / m.p % m.p)
}

/// All lifts `(a + p s, b + p t)` whose Frobenius preserves `F^1`, sorted.
pub fn enumerate_f1_lifts(a: u64, b: u64, p: u64) -> Result<Vec<(u64, u64)>> {
    enumerate_f1_lifts_with_slack(a, b, p, DEFAULT_SLACK)
}

pub fn enumerate_f1_lifts_with_slack(a: u64, b: u64, p: u64, slack: u32) -> Result<Vec<(u64, u64)>> {
    let (a, b) = (a % p, b % p);
    let candidates: Vec<(u64, u64)> = (0..p)
        .flat_map(|s| (0..p).map(move |t| (a + p * s, b + p * t)))
        .collect();
    let mut out = filter_f1(&candidates, p, slack)?;
    out.sort_unstable();
    Ok(out)
}

/// The `F^1`-preserving members of `candidates`.
pub fn filter_f1(candidates: &[(u64, u64)], p: u64, slack: u32) -> Result<Vec<(u64, u64)>> {
    let matrices = frobenius_matrices(candidates, p, slack)?;
    Ok(candidates
        .iter()
        .zip(&matrices)
        .filter(|(_, m)| f1_preserved(m))
        .map(|(c, _)| *c)
        .collect())
}

/// Frobenius matrix of every candidate, in order.
pub fn frobenius_matrices(candidates: &[(u64, u64)], p: u64, slack: u32) -> Result<Vec<FrobMatrix2>> {
    let one = |&(at, bt): &(u64, u64)| frobenius_matrix_with_slack(at, bt, p, slack);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        candidates.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    candidates.iter().map(one).collect()
}

/// `{(u^4 ã, u^6 b~) : u ≡ 1 mod p}`, sorted.
pub fn twist_orbit(p: u64, a_tilde: u64, b_tilde: u64) -> Vec<(u64, u64)> {
    let m = Modulus::new(p, 2).expect("valid prime");
    let mut v: Vec<(u64, u64)> = (0..p)
        .map(|t| {
            let u = 1 + p * t;
            (m.mul(m.pow(u, 4), a_tilde), m.mul(m.pow(u, 6), b_tilde))
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}
