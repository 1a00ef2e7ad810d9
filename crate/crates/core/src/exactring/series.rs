use std::sync::Arc;

use super::modulus::Modulus;
use super::poly::{Exponent, ModPoly};

/// Multivariate power series over `Z/p^e` known up to total degree `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    poly: ModPoly,
    degree: u32,
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl TruncSeries {
    pub fn new(poly: ModPoly, degree: u32) -> Self {
        let poly = if poly.total_degree().is_some_and(|d| d > degree) {
            poly.filter_degree(degree)
        } else {
            poly
        };
        TruncSeries { poly, degree }
    }

    pub fn zero(modulus: Modulus, vars: Arc<Vec<String>>, degree: u32) -> Self {
        TruncSeries {
            poly: ModPoly::zero(modulus, vars),
            degree,
        }
    }

    pub fn from_names(modulus: Modulus, names: &[&str], degree: u32) -> Self {
        TruncSeries {
            poly: ModPoly::with_var_names(modulus, names),
            degree,
        }
    }

    pub fn poly(&self) -> &ModPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> Modulus {
        self.poly.modulus()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn like(&self, poly: ModPoly) -> Self {
        TruncSeries::new(poly, self.degree)
    }

    pub fn zero_like(&self) -> Self {
        self.like(self.poly.zero_like())
    }

    pub fn constant_like(&self, c: u64) -> Self {
        self.like(self.poly.constant_like(c))
    }

    pub fn var(&self, i: usize) -> Self {
        self.like(self.poly.var(i))
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, e: &[u32]) -> u64 {
        self.poly.coeff(e)
    }

    pub fn constant_term(&self) -> u64 {
        self.poly.constant_term()
    }

    pub fn add(&self, o: &Self) -> Self {
        TruncSeries::new(self.poly.add(&o.poly), self.degree.min(o.degree))
    }

    pub fn sub(&self, o: &Self) -> Self {
        TruncSeries::new(self.poly.sub(&o.poly), self.degree.min(o.degree))
    }

    pub fn neg(&self) -> Self {
        self.like(self.poly.neg())
    }

    pub fn scale(&self, k: u64) -> Self {
        self.like(self.poly.scale(k))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree.min(o.degree);
        TruncSeries {
            poly: self.poly.mul_filtered(&o.poly, |e| total(e) <= d),
            degree: d,
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut r = self.constant_like(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                r = r.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Change of precision; raising it pads with unknown zeros, so callers
    /// only raise it for exact (polynomial) data.
    pub fn with_degree(&self, degree: u32) -> Self {
        TruncSeries::new(self.poly.clone(), degree)
    }

    pub fn to_modulus(&self, m: Modulus) -> Self {
        self.like(self.poly.to_modulus(m))
    }

    /// Known one degree less than `self`.
    pub fn derivative(&self, i: usize) -> Self {
        TruncSeries::new(self.poly.derivative(i), self.degree.saturating_sub(1))
    }

    /// `g(t_1^p, …, t_r^p)`.
    pub fn frobenius_substitute(&self) -> Self {
        let p = self.modulus().p() as u32;
        let mut r = self.zero_like();
        for (e, &c) in self.poly.terms() {
            if total(e) * p <= self.degree {
                r.poly.add_term(e.iter().map(|&k| k * p).collect(), c);
            }
        }
        r
    }

    /// Substitutes series for the variables. Exact whenever the images have
    /// constant terms in `pZ/p^2` and `self` is a polynomial of degree at most
    /// the precision, which covers every caller.
    pub fn substitute(&self, images: &[TruncSeries]) -> Self {
        let d = images.iter().map(|s| s.degree).min().unwrap_or(self.degree);
        let base = &images[0];
        let mut cache: Vec<Vec<TruncSeries>> = images.iter().map(|g| vec![g.constant_like(1), g.clone()]).collect();
        let mut r = base.zero_like().with_degree(d);
        for (e, &c) in self.poly.terms() {
            let mut t = base.constant_like(c).with_degree(d);
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&cache[i][k as usize]);
                }
            }
            r = r.add(&t);
        }
        r
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn inverse(&self) -> Option<Self> {
        let m = self.modulus();
        let c0 = m.inv(self.constant_term())?;
        // u = c0 (1 - n), n topologically nilpotent up to p-adic unit part
        let one = self.constant_like(1);
        let n = one.sub(&self.scale(c0));
        let mut r = one.clone();
        let mut pw = one.clone();
        // n has constant term divisible by p; n^(e·(D+1)) vanishes
        let steps = (self.degree + 1) * m.e();
        for _ in 0..steps {
            pw = pw.mul(&n);
            if pw.is_zero() {
                break;
            }
            r = r.add(&pw);
        }
        Some(r.scale(c0))
    }

    /// Terms of a fixed total degree.
    pub fn homogeneous_part(&self, k: u32) -> Vec<(Exponent, u64)> {
        self.poly
            .terms()
            .iter()
            .filter(|(e, _)| total(e) == k)
            .map(|(e, &c)| (e.clone(), c))
            .collect()
    }

    /// Coefficientwise `p`-th root over `F_p`; `None` unless every exponent
    /// is divisible by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        assert_eq!(self.modulus().e(), 1);
        let p = self.modulus().p() as u32;
        let mut r = self.zero_like().with_degree(self.degree / p);
        for (e, &c) in self.poly.terms() {
            if e.iter().any(|k| k % p != 0) {
                return None;
            }
            r.poly.add_term(e.iter().map(|k| k / p).collect(), c);
        }
        Some(r)
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        self.poly.evaluate(point)
    }
}

impl ModPoly {
    /// Drops terms of total degree above `d`.
    pub fn filter_degree(&self, d: u32) -> ModPoly {
        let mut r = self.zero_like();
        for (e, &c) in self.terms() {
            if total(e) <= d {
                r.add_term(e.clone(), c);
            }
        }
        r
    }
}
