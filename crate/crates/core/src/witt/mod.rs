//! Witt vectors over characteristic-`p` chart rings.
//!
//! [`Witt2`] uses the explicit length-2 formulas. [`WittVec`] handles lengths
//! up to 3 through ghost components computed in `Z/p^m[x]/(f~)`, where `f~`
//! is the `[0, p)` lift of the chart relation; the two routes are compared in
//! the tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::{ChartRing, Modulus, ModPoly, PolyJson};

/// Length-2 Witt vector `(a0, a1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witt2 {
    pub a0: ModPoly,
    pub a1: ModPoly,
}

/// Witt vector of length `comps.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVec {
    pub comps: Vec<ModPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witt2Json {
    pub a0: PolyJson,
    pub a1: PolyJson,
}

impl Witt2 {
    pub fn to_json(&self) -> Witt2Json {
        Witt2Json {
            a0: self.a0.to_json(),
            a1: self.a1.to_json(),
        }
    }

    pub fn from_json(j: &Witt2Json) -> Result<Self> {
        Ok(Witt2 {
            a0: ModPoly::from_json(&j.a0)?,
            a1: ModPoly::from_json(&j.a1)?,
        })
    }

    pub fn to_vec(&self) -> WittVec {
        WittVec {
            comps: vec![self.a0.clone(), self.a1.clone()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero()
    }
}

/// The ring `W_m(A)` for `A = F_p[x]` or a chart quotient of it.
#[derive(Clone, Debug)]
pub struct WittRing {
    template: ModPoly,
    chart: Option<ChartRing>,
    /// Index `k`: the lifted chart over `Z/p^(k+1)`.
    lifted: Vec<Option<ChartRing>>,
}

impl WittRing {
    /// Witt vectors over the polynomial ring carried by `template` (e = 1).
    pub fn polynomial(template: &ModPoly) -> Self {
        assert_eq!(template.modulus().e(), 1);
        WittRing {
            template: template.zero_like(),
            chart: None,
            lifted: vec![None; 3],
        }
    }

    /// Witt vectors over a chart ring in characteristic `p`.
    pub fn over_chart(chart: &ChartRing) -> Self {
        let f = chart.relation();
        assert_eq!(f.modulus().e(), 1);
        let lifted = (1..=3)
            .map(|k| {
                let m = f.modulus().with_exponent(k);
                Some(ChartRing::new(&f.to_modulus(m), chart.var()).expect("monic lift of a monic relation"))
            })
            .collect();
        WittRing {
            template: f.zero_like(),
            chart: Some(chart.clone()),
            lifted,
        }
    }

    pub fn p(&self) -> u64 {
        self.template.modulus().p()
    }

    pub fn base(&self) -> &ModPoly {
        &self.template
    }

    pub fn chart(&self) -> Option<&ChartRing> {
        self.chart.as_ref()
    }

    /// Normal form in `A`.
    pub fn nf(&self, g: &ModPoly) -> ModPoly {
        match &self.chart {
            Some(c) => c.normal_form(g),
            None => g.clone(),
        }
    }

    pub fn mul_a(&self, a: &ModPoly, b: &ModPoly) -> ModPoly {
        self.nf(&a.mul(b))
    }

    pub fn pow_a(&self, a: &ModPoly, n: u64) -> ModPoly {
        match &self.chart {
            Some(c) => c.pow(a, n),
            None => a.pow(n),
        }
    }

    fn nf_lifted(&self, g: &ModPoly) -> ModPoly {
        let k = g.modulus().e() as usize;
        match &self.lifted[k - 1] {
            Some(c) => c.normal_form(g),
            None => g.clone(),
        }
    }

    fn pow_lifted(&self, a: &ModPoly, n: u64) -> ModPoly {
        let k = a.modulus().e() as usize;
        match &self.lifted[k - 1] {
            Some(c) => c.pow(a, n),
            None => a.pow(n),
        }
    }

    fn check(&self, a: &ModPoly) -> Result<()> {
        if a.modulus() != self.template.modulus() || a.vars() != self.template.vars() {
            return Err(Error::RingMismatch(format!(
                "component over {:?} does not belong to the Witt ring over {:?}",
                a.vars(),
                self.template.vars()
            )));
        }
        Ok(())
    }

    fn check2(&self, x: &Witt2) -> Result<()> {
        self.check(&x.a0)?;
        self.check(&x.a1)
    }

    pub fn zero(&self) -> Witt2 {
        Witt2 {
            a0: self.template.zero_like(),
            a1: self.template.zero_like(),
        }
    }

    pub fn one(&self) -> Witt2 {
        self.teichmuller(&self.template.constant_like(1))
    }

    pub fn element(&self, a0: &ModPoly, a1: &ModPoly) -> Witt2 {
        Witt2 {
            a0: self.nf(a0),
            a1: self.nf(a1),
        }
    }

    /// `[u] = (u, 0)`.
    pub fn teichmuller(&self, u: &ModPoly) -> Witt2 {
        Witt2 {
            a0: self.nf(u),
            a1: self.template.zero_like(),
        }
    }

    /// `V(u) = (0, u)`.
    pub fn verschiebung(&self, u: &ModPoly) -> Witt2 {
        Witt2 {
            a0: self.template.zero_like(),
            a1: self.nf(u),
        }
    }

    /// `R(a0, a1) = a0`.
    pub fn restrict(&self, x: &Witt2) -> ModPoly {
        x.a0.clone()
    }

    /// `F(a0, a1) = (a0^p, a1^p)`.
    pub fn frobenius(&self, x: &Witt2) -> Witt2 {
        let p = self.p();
        Witt2 {
            a0: self.pow_a(&x.a0, p),
            a1: self.pow_a(&x.a1, p),
        }
    }

    /// `(X^p + Y^p - (X+Y)^p) / p` on `[0, p)` lifts, reduced into `A`.
    pub fn carry(&self, x0: &ModPoly, y0: &ModPoly) -> ModPoly {
        let m2 = self.template.modulus().with_exponent(2);
        let p = self.p();
        let xl = x0.to_modulus(m2);
        let yl = y0.to_modulus(m2);
        let s = self
            .pow_lifted(&xl, p)
            .add(&self.pow_lifted(&yl, p))
            .sub(&self.pow_lifted(&xl.add(&yl), p));
        let s = self.nf_lifted(&s);
        self.nf(&s.div_p().expect("Witt carry is divisible by p"))
    }

    pub fn add(&self, x: &Witt2, y: &Witt2) -> Result<Witt2> {
        self.check2(x)?;
        self.check2(y)?;
        let c = self.carry(&x.a0, &y.a0);
        Ok(Witt2 {
            a0: self.nf(&x.a0.add(&y.a0)),
            a1: self.nf(&x.a1.add(&y.a1).add(&c)),
        })
    }

    /// Componentwise negation, valid for odd `p`.
    pub fn neg(&self, x: &Witt2) -> Witt2 {
        Witt2 {
            a0: x.a0.neg(),
            a1: x.a1.neg(),
        }
    }

    pub fn sub(&self, x: &Witt2, y: &Witt2) -> Result<Witt2> {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Witt2, y: &Witt2) -> Result<Witt2> {
        self.check2(x)?;
        self.check2(y)?;
        let p = self.p();
        let a1 = self
            .mul_a(&self.pow_a(&x.a0, p), &y.a1)
            .add(&self.mul_a(&x.a1, &self.pow_a(&y.a0, p)));
        Ok(Witt2 {
            a0: self.mul_a(&x.a0, &y.a0),
            a1: self.nf(&a1),
        })
    }

    /// Image of `n ∈ Z/p^2` under `Z/p^2 ≅ W_2(F_p) → W_2(A)`.
    pub fn embed_zp2(&self, n: u64) -> Witt2 {
        let m = self.template.modulus();
        let (w0, w1) = embed_zp2_scalar(m, n);
        Witt2 {
            a0: self.template.constant_like(w0),
            a1: self.template.constant_like(w1),
        }
    }

    // ---- general length via ghost components ----

    pub fn vec_zero(&self, len: usize) -> WittVec {
        WittVec {
            comps: vec![self.template.zero_like(); len],
        }
    }

    pub fn vec_teichmuller(&self, u: &ModPoly, len: usize) -> WittVec {
        let mut v = self.vec_zero(len);
        v.comps[0] = self.nf(u);
        v
    }

    /// `V(x) = (0, x0, …, x_{m-2})`, same length.
    pub fn vec_verschiebung(&self, x: &WittVec) -> WittVec {
        let mut comps = vec![self.template.zero_like()];
        comps.extend(x.comps[..x.comps.len() - 1].iter().cloned());
        WittVec { comps }
    }

    pub fn vec_frobenius(&self, x: &WittVec) -> WittVec {
        WittVec {
            comps: x.comps.iter().map(|c| self.pow_a(c, self.p())).collect(),
        }
    }

    /// Drops the last `k` components.
    pub fn vec_restrict(&self, x: &WittVec, k: usize) -> WittVec {
        WittVec {
            comps: x.comps[..x.comps.len() - k].to_vec(),
        }
    }

    pub fn vec_neg(&self, x: &WittVec) -> WittVec {
        WittVec {
            comps: x.comps.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Ghost component `w_n = Σ p^i a_i^(p^(n-i))` in `Z/p^(n+1)` lifts.
    fn ghost(&self, comps: &[ModPoly], n: usize) -> ModPoly {
        let m = self.template.modulus().with_exponent(n as u32 + 1);
        let p = self.p();
        let mut w = ModPoly::zero(m, self.template.vars().clone());
        for (i, a) in comps.iter().enumerate().take(n + 1) {
            let e = p.pow((n - i) as u32);
            let t = self.pow_lifted(&a.to_modulus(m), e).scale(p.pow(i as u32));
            w = w.add(&t);
        }
        self.nf_lifted(&w)
    }

    fn ghost_combine<F>(&self, x: &WittVec, y: &WittVec, op: F) -> Result<WittVec>
    where
        F: Fn(&Self, &ModPoly, &ModPoly) -> ModPoly,
    {
        for c in x.comps.iter().chain(&y.comps) {
            self.check(c)?;
        }
        let len = x.comps.len();
        if y.comps.len() != len || len > 3 {
            return Err(Error::RingMismatch("Witt vector lengths differ or exceed 3".into()));
        }
        let p = self.p();
        let mut out: Vec<ModPoly> = Vec::with_capacity(len);
        for n in 0..len {
            let m = self.template.modulus().with_exponent(n as u32 + 1);
            let target = self.nf_lifted(&op(self, &self.ghost(&x.comps, n), &self.ghost(&y.comps, n)));
            let mut known = ModPoly::zero(m, self.template.vars().clone());
            for (i, s) in out.iter().enumerate() {
                let e = p.pow((n - i) as u32);
                known = known.add(&self.pow_lifted(&s.to_modulus(m), e).scale(p.pow(i as u32)));
            }
            let mut r = self.nf_lifted(&target.sub(&known));
            for _ in 0..n {
                r = r.div_p().expect("ghost difference is divisible by p^n");
            }
            out.push(self.nf(&r));
        }
        Ok(WittVec { comps: out })
    }

    pub fn vec_add(&self, x: &WittVec, y: &WittVec) -> Result<WittVec> {
        self.ghost_combine(x, y, |_, a, b| a.add(b))
    }

    pub fn vec_sub(&self, x: &WittVec, y: &WittVec) -> Result<WittVec> {
        self.vec_add(x, &self.vec_neg(y))
    }

    pub fn vec_mul(&self, x: &WittVec, y: &WittVec) -> Result<WittVec> {
        self.ghost_combine(x, y, |r, a, b| r.nf_lifted(&a.mul(b)))
    }

    /// Integer `n` as a Witt vector of the given length (via repeated addition
    /// of `1` in binary).
    pub fn vec_integer(&self, n: u64, len: usize) -> WittVec {
        let one = self.vec_teichmuller(&self.template.constant_like(1), len);
        let mut r = self.vec_zero(len);
        let mut base = one;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                r = self.vec_add(&r, &base).expect("same ring");
            }
            base = self.vec_add(&base, &base).expect("same ring");
            k >>= 1;
        }
        r
    }

    pub fn vec_is_zero(&self, x: &WittVec) -> bool {
        x.comps.iter().all(|c| self.nf(c).is_zero())
    }
}

/// `n ↦ (n0, (n - n0^p)/p mod p)` with `n0 = n mod p` in `[0, p)`.
pub fn embed_zp2_scalar(m: Modulus, n: u64) -> (u64, u64) {
    let p = m.p();
    let q = p * p;
    let n = n % q;
    let n0 = n % p;
    let mut t: u64 = 1;
    for _ in 0..p {
        t = t * n0 % q;
    }
    let diff = (n + q - t) % q;
    (n0, diff / p % p)
}

/// Ghost value `ã0^p + p·ã1 mod p^2` of a constant Witt vector.
pub fn ghost_scalar(p: u64, a0: u64, a1: u64) -> u64 {
    let q = p * p;
    let mut t: u64 = 1;
    for _ in 0..p {
        t = t * (a0 % p) % q;
    }
    (t + p * (a1 % p)) % q
}
