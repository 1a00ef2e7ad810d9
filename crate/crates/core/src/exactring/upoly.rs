//! Univariate polynomials and rational functions over `F_p`.

use super::modulus::Modulus;

/// Dense polynomial, coefficient `i` of `λ^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    pub f: Modulus,
    pub c: Vec<u64>,
}

impl UPoly {
    pub fn new(f: Modulus, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x = f.reduce(*x);
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        UPoly { f, c }
    }

    pub fn zero(f: Modulus) -> Self {
        UPoly { f, c: vec![] }
    }

    pub fn constant(f: Modulus, a: u64) -> Self {
        UPoly::new(f, vec![a])
    }

    pub fn x(f: Modulus) -> Self {
        UPoly::new(f, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new(self.f, (0..n).map(|i| self.f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new(self.f, (0..n).map(|i| self.f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.f, self.c.iter().map(|&a| self.f.neg(a)).collect())
    }

    pub fn scale(&self, k: u64) -> Self {
        UPoly::new(self.f, self.c.iter().map(|&a| self.f.mul(a, k)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero(self.f);
        }
        let mut r = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = self.f.add(r[i + j], self.f.mul(a, b));
            }
        }
        UPoly::new(self.f, r)
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut r = UPoly::constant(self.f, 1);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let f = self.f;
        let inv = f.inv(d.lead()).unwrap();
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UPoly::zero(f), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = f.mul(r[k + dd], inv);
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(coef, b));
            }
        }
        (UPoly::new(f, q), UPoly::new(f, r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.f.inv(self.lead()).unwrap())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.f,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| self.f.mul(a, i as u64 % self.f.order()))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| self.f.add(self.f.mul(acc, x), a))
    }

    /// `λ ↦ λ + a`.
    pub fn shift(&self, a: u64) -> Self {
        let lin = UPoly::new(self.f, vec![a, 1]);
        self.c
            .iter()
            .rev()
            .fold(UPoly::zero(self.f), |acc, &c| acc.mul(&lin).add(&UPoly::constant(self.f, c)))
    }
}

/// Reduced fraction `num/den` with `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: UPoly,
    pub den: UPoly,
}

impl RatFn {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                den: UPoly::constant(num.f, 1),
                num,
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let l = d.lead();
        let inv = num.f.inv(l).unwrap();
        RatFn {
            num: n.scale(inv),
            den: d.scale(inv),
        }
    }

    pub fn from_poly(p: UPoly) -> Self {
        let f = p.f;
        RatFn::new(p, UPoly::constant(f, 1))
    }

    pub fn constant(f: Modulus, a: u64) -> Self {
        RatFn::from_poly(UPoly::constant(f, a))
    }

    pub fn zero(f: Modulus) -> Self {
        RatFn::constant(f, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFn::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        RatFn::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RatFn::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn derivative(&self) -> Self {
        RatFn::new(
            self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, x: u64) -> Option<u64> {
        let f = self.num.f;
        f.inv(self.den.eval(x)).map(|i| f.mul(self.num.eval(x), i))
    }

    /// Taylor coefficients of `λ ↦ self(a + s)` in `s` up to `s^(n-1)`.
    pub fn expand_at(&self, a: u64, n: usize) -> Option<Vec<u64>> {
        let f = self.num.f;
        let num = self.num.shift(a);
        let den = self.den.shift(a);
        let d0 = f.inv(den.coeff(0))?;
        let mut out = vec![0u64; n];
        for k in 0..n {
            let mut acc = num.coeff(k);
            for j in 1..=k {
                acc = f.sub(acc, f.mul(den.coeff(j), out[k - j]));
            }
            out[k] = f.mul(acc, d0);
        }
        Some(out)
    }
}

/// Solves a square or overdetermined system over `F_p(λ)`; free variables
/// are set to zero. `None` when inconsistent.
pub fn solve_ratfn(a: &[Vec<RatFn>], b: &[RatFn]) -> Option<(Vec<RatFn>, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<RatFn>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(pr, r);
        let inv = m[r][c].inv().unwrap();
        for j in c..=cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let k = m[i][c].clone();
            for j in c..=cols {
                let t = k.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let f = b.first().map(|x| x.num.f)?;
    let mut x = vec![RatFn::zero(f); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some((x, cols - pivots.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_reduction() {
        let f = Modulus::prime(7).unwrap();
        let x = UPoly::x(f);
        let one = UPoly::constant(f, 1);
        let a = x.sub(&one).mul(&x.add(&one));
        let b = x.sub(&one).mul(&x.add(&UPoly::constant(f, 3)));
        assert_eq!(a.gcd(&b), x.sub(&one));
        let r = RatFn::new(a, b);
        assert_eq!(r.den, x.add(&UPoly::constant(f, 3)));
    }

    #[test]
    fn expansion_of_geometric_series() {
        let f = Modulus::prime(5).unwrap();
        // 1/(1-λ) at 0
        let r = RatFn::new(UPoly::constant(f, 1), UPoly::new(f, vec![1, 4]));
        assert_eq!(r.expand_at(0, 4).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(r.eval(1), None);
    }
}
