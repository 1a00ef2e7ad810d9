use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::modulus::Modulus;
use crate::error::{Error, Result};

/// Exponent vector, one entry per ring variable.
pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial over `Z/p^e`.
///
/// Only nonzero coefficients are stored, each in `[0, p^e)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModPoly {
    modulus: Modulus,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exponent, u64>,
}

/// Integer-coefficient polynomial, used as input to exact division by `p`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    pub vars: Vec<String>,
    pub terms: BTreeMap<Exponent, i128>,
}

/// Graded order: total degree first, then lexicographic. Serialization
/// lists terms in descending order.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl ModPoly {
    pub fn zero(modulus: Modulus, vars: Arc<Vec<String>>) -> Self {
        ModPoly {
            modulus,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn with_var_names(modulus: Modulus, names: &[&str]) -> Self {
        Self::zero(modulus, Arc::new(names.iter().map(|s| s.to_string()).collect()))
    }

    pub fn constant(modulus: Modulus, vars: Arc<Vec<String>>, c: u64) -> Self {
        let mut p = Self::zero(modulus, vars);
        let n = p.nvars();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(modulus: Modulus, vars: Arc<Vec<String>>) -> Self {
        Self::constant(modulus, vars, 1)
    }

    pub fn from_terms<I>(modulus: Modulus, vars: Arc<Vec<String>>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, u64)>,
    {
        let mut p = Self::zero(modulus, vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Same ring, new value.
    pub fn zero_like(&self) -> Self {
        Self::zero(self.modulus, self.vars.clone())
    }

    pub fn constant_like(&self, c: u64) -> Self {
        Self::constant(self.modulus, self.vars.clone(), c)
    }

    pub fn var(&self, i: usize) -> Self {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(e, 1)
    }

    pub fn monomial(&self, exp: Exponent, c: u64) -> Self {
        let mut p = self.zero_like();
        p.add_term(exp, c);
        p
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, u64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x^exp` in place.
    pub fn add_term(&mut self, exp: Exponent, c: u64) {
        debug_assert_eq!(exp.len(), self.nvars());
        let m = self.modulus;
        let c = m.reduce(c);
        if c == 0 {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = m.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Coefficient of a monomial (zero when absent). An empty exponent
    /// vector denotes the constant term.
    pub fn coeff(&self, exp: &[u32]) -> u64 {
        if exp.is_empty() {
            return self.terms.get(&vec![0; self.nvars()]).copied().unwrap_or(0);
        }
        self.terms.get(exp).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&[])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.modulus == other.modulus && self.vars == other.vars,
            "ring mismatch: {:?}/{:?} vs {:?}/{:?}",
            self.modulus,
            self.vars,
            other.modulus,
            other.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), self.modulus.neg(c));
        }
        r
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        ModPoly {
            modulus: m,
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), m.neg(c))).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let m = self.modulus;
        let k = m.reduce(k);
        let mut r = self.zero_like();
        for (e, &c) in &self.terms {
            r.add_term(e.clone(), m.mul(c, k));
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub fn mul_filtered<F: Fn(&[u32]) -> bool>(&self, other: &Self, keep: F) -> Self {
        let m = self.modulus;
        let q = m.order() as u128;
        let mut acc: HashMap<Exponent, u128> = HashMap::with_capacity(self.len() * other.len() / 2 + 1);
        let n = self.nvars();
        let mut buf = vec![0u32; n];
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                for i in 0..n {
                    buf[i] = ea[i] + eb[i];
                }
                if !keep(&buf) {
                    continue;
                }
                let prod = (ca as u128 * cb as u128) % q;
                match acc.get_mut(buf.as_slice()) {
                    Some(v) => {
                        *v += prod;
                        if *v >= q << 32 {
                            *v %= q;
                        }
                    }
                    None => {
                        acc.insert(buf.clone(), prod);
                    }
                }
            }
        }
        let mut r = self.zero_like();
        for (e, v) in acc {
            let c = (v % q) as u64;
            if c != 0 {
                r.terms.insert(e, c);
            }
        }
        r
    }

    pub fn pow(&self, mut n: u64) -> Self {
        if n == 0 {
            return self.constant_like(1);
        }
        if self.len() <= 8 {
            // small bases: repeated multiplication keeps one operand tiny
            let mut r = self.clone();
            for _ in 1..n {
                r = r.mul(self);
            }
            return r;
        }
        let mut base = self.clone();
        let mut r: Option<Self> = None;
        while n > 0 {
            if n & 1 == 1 {
                r = Some(match r {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        r.unwrap()
    }

    /// `g^p`, honest exponentiation in the coefficient ring.
    pub fn frobenius_power(&self) -> Self {
        self.pow(self.modulus.p())
    }

    /// Reinterprets the coefficients in another modulus of the same prime:
    /// reduction when shrinking, the representative in `[0, p^e)` when growing.
    pub fn to_modulus(&self, target: Modulus) -> Self {
        assert_eq!(target.p(), self.modulus.p());
        let mut r = Self::zero(target, self.vars.clone());
        for (e, &c) in &self.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    /// Multiplies by `p` and moves to `Z/p^(e+1)`; inverse of [`ModPoly::div_p`].
    pub fn times_p_lifted(&self) -> Self {
        let target = self.modulus.with_exponent(self.modulus.e() + 1);
        let mut r = Self::zero(target, self.vars.clone());
        for (e, &c) in &self.terms {
            r.add_term(e.clone(), c * self.modulus.p());
        }
        r
    }

    /// Exact division by `p`, landing in `Z/p^(e-1)`.
    pub fn div_p(&self) -> Result<Self> {
        let m = self.modulus;
        if m.e() < 2 {
            return Err(Error::InvalidModulus("cannot divide by p in Z/p".into()));
        }
        let target = m.with_exponent(m.e() - 1);
        let mut r = Self::zero(target, self.vars.clone());
        for (e, &c) in &self.terms {
            if c % m.p() != 0 {
                return Err(Error::NotDivisible {
                    monomial: self.format_monomial(e),
                });
            }
            r.add_term(e.clone(), c / m.p());
        }
        Ok(r)
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let m = self.modulus;
        let mut r = self.zero_like();
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            r.add_term(ne, m.mul(c, e[i] as u64 % m.order()));
        }
        r
    }

    /// Applies `f` to every exponent vector (coefficients summed on collision).
    pub fn map_exponents<F: Fn(&[u32]) -> Exponent>(&self, f: F) -> Self {
        let mut r = self.zero_like();
        for (e, &c) in &self.terms {
            r.add_term(f(e), c);
        }
        r
    }

    /// Moves the polynomial into a ring with a different variable list;
    /// `index[i]` is the position in the new list of old variable `i`.
    pub fn remap_vars(&self, vars: Arc<Vec<String>>, index: &[usize]) -> Self {
        let n = vars.len();
        let mut r = Self::zero(self.modulus, vars);
        for (e, &c) in &self.terms {
            let mut ne = vec![0; n];
            for (i, &x) in e.iter().enumerate() {
                ne[index[i]] += x;
            }
            r.add_term(ne, c);
        }
        r
    }

    /// Sets variable `i` to 1 (exponent dropped, variable kept).
    pub fn dehomogenize(&self, i: usize) -> Self {
        self.map_exponents(|e| {
            let mut ne = e.to_vec();
            ne[i] = 0;
            ne
        })
    }

    /// Substitutes polynomials (all in a common target ring) for every variable.
    pub fn substitute(&self, images: &[ModPoly]) -> ModPoly {
        assert_eq!(images.len(), self.nvars());
        let target = &images[0];
        let mut r = target.zero_like();
        let mut cache: Vec<Vec<ModPoly>> = images.iter().map(|g| vec![g.constant_like(1), g.clone()]).collect();
        for (e, &c) in &self.terms {
            let mut t = target.constant_like(c);
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

    /// Evaluates at a point of `(Z/p^e)^n`.
    pub fn evaluate(&self, point: &[u64]) -> u64 {
        let m = self.modulus;
        let mut s = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &k) in e.iter().enumerate() {
                t = m.mul(t, m.pow(point[i], k as u64));
            }
            s = m.add(s, t);
        }
        s
    }

    /// Terms in descending graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, u64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    pub fn format_monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                if k == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{}", self.vars[i], k)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            p: self.modulus.p(),
            e: self.modulus.e(),
            vars: self.vars.as_ref().clone(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| TermJson { exp: e.clone(), c })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let m = Modulus::new(j.p, j.e)?;
        let mut r = Self::zero(m, Arc::new(j.vars.clone()));
        for t in &j.terms {
            if t.exp.len() != j.vars.len() {
                return Err(Error::RingMismatch("exponent length differs from variable count".into()));
            }
            r.add_term(t.exp.clone(), t.c);
        }
        Ok(r)
    }
}

impl fmt::Display for ModPoly {
    /// Prints in the input grammar, so `parse_poly` reads it back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = self.format_monomial(e);
            if mono == "1" {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{c}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly[{}^{}]({})", self.modulus.p(), self.modulus.e(), self)
    }
}

/// Wire form of a [`ModPoly`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub p: u64,
    pub e: u32,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub c: u64,
}

impl IntPoly {
    pub fn new(vars: Vec<String>) -> Self {
        IntPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, exp: Exponent, c: i128) {
        let v = self.terms.entry(exp.clone()).or_insert(0);
        *v += c;
        if *v == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut r = IntPoly::new(self.vars.clone());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> IntPoly {
        let mut r = IntPoly::new(self.vars.clone());
        r.add_term(vec![0; self.vars.len()], 1);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut r = self.clone();
        for (e, &c) in &other.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }
}

/// Exact division by `p` of an integer polynomial, reduced into `target`.
pub fn lift_div_p(q: &IntPoly, target: Modulus) -> Result<ModPoly> {
    let p = target.p() as i128;
    let mut r = ModPoly::zero(target, Arc::new(q.vars.clone()));
    for (e, &c) in &q.terms {
        if c % p != 0 {
            let probe = r.clone();
            return Err(Error::NotDivisible {
                monomial: probe.format_monomial(e),
            });
        }
        r.add_term(e.clone(), target.reduce_i(c / p));
    }
    Ok(r)
}
