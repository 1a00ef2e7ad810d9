//! Canonical liftings modulo `p^2` of F-split hypersurfaces.
//!
//! The lifted ring is `W_2(A)/V(ker σ)`. Evaluating `f` at Teichmüller
//! generators gives `V(κ_f)`, which equals `p·[σ(κ_f)]` in the quotient, so
//! `f~ = G - p·S` with `G` the Teichmüller-coefficient lift of `f` and
//! `S` a representative of `σ(κ_f)`.

mod legendre;

pub use legendre::{legendre_modular_frobenius, LegendreFrobenius, LegendreSpecialization};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactring::{linalg, ModPoly, Modulus};
use crate::fsplit::{self, ChartSplitting, SplittingData};
use crate::witt::{Witt2, WittRing};

/// `κ_f = (Σ C_m^p x^(pm) - F(x)^p) / p mod p` on `[0, p)` coefficient lifts.
pub fn carry_polynomial(f: &ModPoly) -> ModPoly {
    let m2 = f.modulus().with_exponent(2);
    let p = f.modulus().p() as u32;
    let fl = f.to_modulus(m2);
    let mut frob = fl.zero_like();
    for (e, &c) in fl.terms() {
        frob.add_term(e.iter().map(|k| k * p).collect(), m2.pow(c, p as u64));
    }
    frob.sub(&fl.frobenius_power()).div_p().expect("carry is divisible by p")
}

/// `G = Σ [C_m] X^m` over `Z/p^2`.
pub fn teichmuller_lift(f: &ModPoly) -> ModPoly {
    let m2 = f.modulus().with_exponent(2);
    let mut g = ModPoly::zero(m2, f.vars().clone());
    for (e, &c) in f.terms() {
        g.add_term(e.clone(), m2.teichmuller(c));
    }
    g
}

/// `f~ = G - p·S` with `S = σ(κ_f)` computed on the homogeneous coordinate ring.
pub fn lifted_equation(f: &ModPoly, sigma: &SplittingData) -> Result<ModPoly> {
    if &sigma.f != f {
        return Err(Error::Inconsistent("splitting belongs to a different relation".into()));
    }
    let s = sigma.sigma(&carry_polynomial(f));
    Ok(lifted_equation_with(f, &s))
}

/// `G - p·S` for a caller-chosen representative `S`.
pub fn lifted_equation_with(f: &ModPoly, s: &ModPoly) -> ModPoly {
    teichmuller_lift(f).sub(&s.times_p_lifted())
}

/// One affine chart of the canonical lifting, with quotient arithmetic.
#[derive(Debug, Clone)]
pub struct CanonicalLiftChart {
    pub sigma: ChartSplitting,
    pub witt: WittRing,
    /// Homogeneous lifted relation over `Z/p^2`.
    pub lifted_relation: ModPoly,
    pub chart_index: usize,
}

impl CanonicalLiftChart {
    pub fn new(f: &ModPoly, sigma: &SplittingData, chart_index: usize) -> Result<Self> {
        let lifted_relation = lifted_equation(f, sigma)?;
        let cs = sigma.chart(chart_index)?;
        let witt = WittRing::over_chart(&cs.ring);
        Ok(CanonicalLiftChart {
            sigma: cs,
            witt,
            lifted_relation,
            chart_index,
        })
    }

    /// `(a0, a1) ↦ (a0, σ(a1)^p·θ)`; equal images iff the difference lies in `V(ker σ)`.
    pub fn witt_normalizer(&self, x: &Witt2) -> Witt2 {
        let s = self.sigma.sigma(&x.a1);
        let p = self.witt.p();
        let rep = self.witt.mul_a(&self.witt.pow_a(&s, p), &self.sigma.theta);
        self.witt.element(&x.a0, &rep)
    }

    /// Evaluates a `Z/p^2` polynomial at the Teichmüller generators of `W_2(A)`.
    pub fn eval_teichmuller(&self, g: &ModPoly) -> Result<Witt2> {
        let w = &self.witt;
        let base = w.base();
        let mut acc = w.zero();
        for (e, &c) in g.terms() {
            let mono = w.teichmuller(&base.monomial(e.clone(), 1));
            acc = w.add(&acc, &w.mul(&w.embed_zp2(c), &mono)?)?;
        }
        Ok(acc)
    }

    /// Checks that `f~([x])` vanishes in `W_2(A)/V(ker σ)`.
    pub fn verify_vanishing(&self) -> Result<bool> {
        let v = self.eval_teichmuller(&self.lifted_relation.dehomogenize(self.chart_index))?;
        Ok(self.witt_normalizer(&v).is_zero())
    }
}

/// Short Weierstrass canonical lift `y^2 = x^3 + ã x + b~` over `Z/p^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeierstrassLift {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub a_tilde: u64,
    pub b_tilde: u64,
    /// `X ↦ (1 + p·M) X` taking the lifted cubic to Weierstrass shape, rows in `(x, y, z)`.
    #[serde(skip)]
    pub coordinate_change: [[u64; 3]; 3],
}

pub fn weierstrass_canonical_lift(a: u64, b: u64, p: u64) -> Result<WeierstrassLift> {
    if p < 5 {
        return Err(Error::Precondition("Weierstrass normalization needs p ≥ 5".into()));
    }
    let m = Modulus::prime(p)?;
    let (a, b) = (a % p, b % p);
    if !fsplit::weierstrass_smooth(a, b, p) {
        return Err(Error::Singular(format!("y^2 = x^3 + {a}x + {b} is singular mod {p}")));
    }
    let f = fsplit::weierstrass_cubic(m, a, b);
    let sigma = fsplit::build_splitting(&f)?;
    let ft = lifted_equation(&f, &sigma)?;
    let (a_tilde, b_tilde, coordinate_change) = normalize_weierstrass(&ft, a, b)?;
    Ok(WeierstrassLift {
        p,
        a,
        b,
        a_tilde,
        b_tilde,
        coordinate_change,
    })
}

/// Brings `F~ = F0 + p·P`, `F0 = y^2 z - x^3 - [a] x z^2 - [b] z^3`, to
/// `y^2 z - x^3 - ã x z^2 - b~ z^3` by `X ↦ (1 + pM) X`.
///
/// Solves `P = α x z^2 + β z^3 + Σ m_ij x_j ∂_i F0` over `F_p`; the one free
/// direction (a twist `u ≡ 1 mod p`) is fixed to zero.
pub fn normalize_weierstrass(ft: &ModPoly, a: u64, b: u64) -> Result<(u64, u64, [[u64; 3]; 3])> {
    let m2 = ft.modulus();
    let m1 = m2.with_exponent(1);
    let p = m2.p();
    let f0 = fsplit::weierstrass_cubic(m1, a, b);
    let g0 = teichmuller_lift(&f0);
    if ft.to_modulus(m1) != f0 {
        return Err(Error::Inconsistent("lifted cubic does not reduce to the Weierstrass cubic".into()));
    }
    let pert = ft.sub(&g0).div_p()?;
    let monos = fsplit::monomials(3, 3);
    let mut columns: Vec<ModPoly> = vec![f0.monomial(vec![1, 0, 2], 1), f0.monomial(vec![0, 0, 3], 1)];
    for i in 0..3 {
        let di = f0.derivative(i);
        for j in 0..3 {
            columns.push(di.mul(&f0.var(j)));
        }
    }
    let mut mat = linalg::Matrix::zeros(monos.len(), columns.len());
    for (r, e) in monos.iter().enumerate() {
        for (c, col) in columns.iter().enumerate() {
            mat.set(r, c, col.coeff(e));
        }
    }
    let rhs: Vec<u64> = monos.iter().map(|e| pert.coeff(e)).collect();
    let sol = linalg::solve(&m1, &mat, &rhs)
        .ok_or_else(|| Error::Solver("lifted cubic is not a Weierstrass deformation".into()))?;
    let (alpha, beta) = (sol[0], sol[1]);
    let mut mm = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            mm[i][j] = sol[2 + 3 * i + j];
        }
    }
    // F0 + p(α x z^2 + β z^3) = y^2 z - x^3 - ([a] - pα) x z^2 - ([b] - pβ) z^3
    let a_tilde = m2.sub(m2.teichmuller(a), m2.mul(p, alpha));
    let b_tilde = m2.sub(m2.teichmuller(b), m2.mul(p, beta));
    Ok((a_tilde, b_tilde, mm))
}

/// Whether `(a1, b1)` and `(a2, b2)` define isomorphic curves over `Z/p^2`
/// via `(u^4 a, u^6 b)` for a unit `u`; with `near_identity`, only `u ≡ ±1 mod p`.
pub fn weierstrass_isomorphic(p: u64, a1: u64, b1: u64, a2: u64, b2: u64, near_identity: bool) -> bool {
    let m = Modulus::new(p, 2).expect("valid prime");
    (1..p * p).filter(|u| u % p != 0).any(|u| {
        if near_identity && u % p != 1 && u % p != p - 1 {
            return false;
        }
        m.mul(m.pow(u, 4), a1) == a2 % (p * p) && m.mul(m.pow(u, 6), b1) == b2 % (p * p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::parse_poly;

    #[test]
    fn carry_examples() {
        let m = Modulus::prime(5).unwrap();
        let f = parse_poly("u+v", m).unwrap();
        let k = carry_polynomial(&f);
        let expect = parse_poly("-(u^4*v + 2*u^3*v^2 + 2*u^2*v^3 + u*v^4)", m).unwrap();
        assert_eq!(k, expect);
        assert!(carry_polynomial(&parse_poly("3*x^2*y", m).unwrap()).is_zero());
    }

    #[test]
    fn carry_matches_witt_evaluation() {
        let m = Modulus::prime(3).unwrap();
        let f = parse_poly("x^2*y + 2*x + y^3 + 1", m).unwrap();
        let w = WittRing::polynomial(&f);
        let mut acc = w.zero();
        for (e, &c) in f.terms() {
            let t = w.mul(&w.teichmuller(&f.constant_like(c)), &w.teichmuller(&f.monomial(e.clone(), 1))).unwrap();
            acc = w.add(&acc, &t).unwrap();
        }
        assert_eq!(acc.a0, f);
        assert_eq!(acc.a1, carry_polynomial(&f));
    }

    #[test]
    fn weierstrass_lift_vanishes_on_chart() {
        let m = Modulus::prime(5).unwrap();
        let f = fsplit::weierstrass_cubic(m, 1, 0);
        let s = fsplit::build_splitting(&f).unwrap();
        let chart = CanonicalLiftChart::new(&f, &s, 2).unwrap();
        assert_eq!(chart.lifted_relation.to_modulus(m), f);
        assert!(chart.verify_vanishing().unwrap());
    }

    #[test]
    fn supersingular_is_rejected() {
        assert!(matches!(weierstrass_canonical_lift(0, 1, 5), Err(Error::NotFSplit(_))));
        assert!(matches!(weierstrass_canonical_lift(1, 0, 3), Err(Error::Precondition(_))));
    }
}
