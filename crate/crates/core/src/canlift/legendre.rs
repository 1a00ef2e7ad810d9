//! The Frobenius lifting `λ ↦ λ^p + p·g(λ)` on the ordinary Legendre λ-line.
//!
//! The relative canonical lift of `y^2 z = x(x-z)(x-λz)` over `Z/p^2[λ]`
//! is brought back to Legendre shape `y^2 z = x(x-z)(x-Λz)` by a coordinate
//! change `≡ id mod p`; then `Λ = λ^p + p·g(λ)`. The normalization is a linear
//! system over `F_p(λ)` with a unique solution, so `g` comes out as an exact
//! rational function, localized at the Hasse polynomial.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{weierstrass_canonical_lift, weierstrass_isomorphic};
use crate::error::{Error, Result};
use crate::exactring::upoly::{solve_ratfn, RatFn, UPoly};
use crate::exactring::{Exponent, ModPoly, Modulus};
use crate::fsplit::{self, frobenius_trace_in};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const L: usize = 3;
const XYZ: [usize; 3] = [X, Y, Z];

/// Exact `g`, its expansion around an ordinary point, and the checks at every
/// ordinary `λ0 ∈ F_p`.
#[derive(Debug, Clone, Serialize)]
pub struct LegendreFrobenius {
    pub p: u64,
    pub degree_bound: u32,
    /// Coefficients of numerator and monic denominator, lowest degree first.
    pub numerator: Vec<u64>,
    pub denominator: Vec<u64>,
    /// Hasse polynomial of the family, lowest degree first.
    pub hasse: Vec<u64>,
    pub expansion_point: u64,
    /// `g(λ0 + s) mod s^D`.
    pub series: Vec<u64>,
    pub specializations: Vec<LegendreSpecialization>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LegendreSpecialization {
    pub lambda0: u64,
    /// `[λ0] + p·g(λ0)` in `Z/p^2`.
    pub lifted_lambda: u64,
    pub a_tilde: u64,
    pub b_tilde: u64,
    pub canonical_a_tilde: u64,
    pub canonical_b_tilde: u64,
    pub matches_canonical: bool,
    /// `λ0^(p-1) + g'(λ0) ≠ 0`.
    pub ordinary_lift: bool,
}

fn to_upoly(f: Modulus, g: &ModPoly) -> UPoly {
    let mut c = vec![0u64; g.degree_in(L).map_or(0, |d| d as usize + 1)];
    for (e, &v) in g.terms() {
        debug_assert!(XYZ.iter().all(|&i| e[i] == 0));
        c[e[L] as usize] = f.add(c[e[L] as usize], v);
    }
    UPoly::new(f, c)
}

/// Splits a polynomial in `x, y, z, λ` by its `(x, y, z)` monomial.
fn coefficients(g: &ModPoly) -> BTreeMap<Exponent, ModPoly> {
    let mut out: BTreeMap<Exponent, ModPoly> = BTreeMap::new();
    for (e, &c) in g.terms() {
        let key: Exponent = XYZ.iter().map(|&i| e[i]).collect();
        let mut le = vec![0; 4];
        le[L] = e[L];
        out.entry(key).or_insert_with(|| g.zero_like()).add_term(le, c);
    }
    out
}

fn with_xyz(g: &ModPoly, key: &[u32]) -> ModPoly {
    g.map_exponents(|e| vec![key[0], key[1], key[2], e[L]])
}

/// `y^2 z - x(x-z)(x - λ^k z)`.
fn legendre_cubic(m: Modulus, lambda_power: u32) -> ModPoly {
    let r = ModPoly::with_var_names(m, &["x", "y", "z", "l"]);
    let lam = r.monomial(vec![0, 0, 0, lambda_power], 1);
    let (x, y, z) = (r.var(X), r.var(Y), r.var(Z));
    y.pow(2).mul(&z).sub(&x.mul(&x.sub(&z)).mul(&x.sub(&lam.mul(&z))))
}

fn ratfn_of(f: Modulus, g: &ModPoly) -> RatFn {
    RatFn::from_poly(to_upoly(f, g))
}

/// Computes `g` exactly; `degree_bound` controls the reported expansion,
/// validated against the expansion at `degree_bound + 5`.
pub fn legendre_modular_frobenius(p: u64, degree_bound: u32) -> Result<LegendreFrobenius> {
    if p < 5 {
        return Err(Error::Precondition("the Legendre computation needs p ≥ 5".into()));
    }
    if degree_bound < 1 {
        return Err(Error::Precondition("degree bound must be at least 1".into()));
    }
    let m1 = Modulus::prime(p)?;
    let m2 = m1.with_exponent(2);
    let f = legendre_cubic(m1, 1);
    let ft = f.to_modulus(m2);

    // G' = Σ c~_m(λ)^p X^m and Σ c~_m(λ)^p x^(pm), honest p-th powers over Z/p^2[λ]
    let mut g_prime = ft.zero_like();
    let mut frob_sum = ft.zero_like();
    for (key, c) in coefficients(&ft) {
        let cp = c.pow(p);
        g_prime = g_prime.add(&with_xyz(&cp, &key));
        let pk: Vec<u32> = key.iter().map(|k| k * p as u32).collect();
        frob_sum = frob_sum.add(&with_xyz(&cp, &pk));
    }
    let kappa = frob_sum.sub(&ft.pow(p)).div_p()?;

    let fp1 = f.pow(p - 1);
    let hasse = to_upoly(m1, &frobenius_trace_in(&fp1, &XYZ));
    if hasse.is_zero() {
        return Err(Error::NotFSplit("Hasse polynomial vanishes identically".into()));
    }
    let hasse_rf = RatFn::from_poly(hasse.clone());
    let u = frobenius_trace_in(&fp1.mul(&kappa), &XYZ);

    // F~' = F0' + p·(Δ - S) with F0' the Legendre cubic in λ^p
    let f0_lift = legendre_cubic(m2, p as u32);
    let delta = g_prime.sub(&f0_lift).div_p()?;
    let f0 = legendre_cubic(m1, p as u32);
    let dcoef = coefficients(&delta);
    let ucoef = coefficients(&u);

    let monos = fsplit::monomials(3, 3);
    let mut columns: Vec<BTreeMap<Exponent, ModPoly>> = Vec::new();
    for i in XYZ {
        let di = f0.derivative(i);
        for j in XYZ {
            columns.push(coefficients(&di.mul(&f0.var(j))));
        }
    }
    let gamma_col = f0.var(X).mul(&f0.var(X).sub(&f0.var(Z))).mul(&f0.var(Z));
    columns.push(coefficients(&gamma_col));

    let rhs: Vec<RatFn> = monos
        .iter()
        .map(|e| {
            let d = dcoef.get(e).map_or(RatFn::zero(m1), |g| ratfn_of(m1, g));
            let s = ucoef.get(e).map_or(RatFn::zero(m1), |g| ratfn_of(m1, g));
            d.sub(&s.div(&hasse_rf).expect("nonzero Hasse polynomial"))
        })
        .collect();
    let mat: Vec<Vec<RatFn>> = monos
        .iter()
        .map(|e| {
            columns
                .iter()
                .map(|col| col.get(e).map_or(RatFn::zero(m1), |g| ratfn_of(m1, g)))
                .collect()
        })
        .collect();
    let (sol, free) =
        solve_ratfn(&mat, &rhs).ok_or_else(|| Error::Solver("relative lift is not a Legendre deformation".into()))?;
    if free != 0 {
        return Err(Error::Solver(format!("Legendre normalization has {free} free directions")));
    }
    for (row, r) in mat.iter().zip(&rhs) {
        let lhs = row.iter().zip(&sol).fold(RatFn::zero(m1), |acc, (a, x)| acc.add(&a.mul(x)));
        if &lhs != r {
            return Err(Error::Solver("normalization residual is nonzero".into()));
        }
    }
    let g = sol[9].clone();
    let dg = g.derivative();

    let ordinary: Vec<u64> = (2..p).filter(|&l| hasse.eval(l) != 0).collect();
    let expansion_point = *ordinary
        .iter()
        .find(|&&l| g.eval(l).is_some())
        .ok_or_else(|| Error::Precondition("no ordinary λ0 in F_p".into()))?;
    let series = g.expand_at(expansion_point, degree_bound as usize).expect("regular point");
    let longer = g.expand_at(expansion_point, degree_bound as usize + 5).expect("regular point");
    if longer[..degree_bound as usize] != series[..] {
        return Err(Error::Precision("expansion changed when the degree bound was raised".into()));
    }

    let inv3 = m2.inv(3).expect("p ≥ 5");
    let inv27 = m2.inv(27).expect("p ≥ 5");
    let mut specializations = Vec::new();
    for &l0 in &ordinary {
        let g0 = g
            .eval(l0)
            .ok_or_else(|| Error::Inconsistent(format!("g has a pole at the ordinary point {l0}")))?;
        let big = m2.add(m2.teichmuller(l0), m2.mul(p, g0));
        // x^3 + a2 x^2 + a4 x, shifted by x ↦ x - a2/3
        let a2 = m2.neg(m2.add(1, big));
        let a4 = big;
        let a_t = m2.sub(a4, m2.mul(m2.mul(a2, a2), inv3));
        let b_t = m2.add(
            m2.neg(m2.mul(m2.mul(a2, a4), inv3)),
            m2.mul(m2.mul(2, m2.pow(a2, 3)), inv27),
        );
        let canon = weierstrass_canonical_lift(a_t % p, b_t % p, p)?;
        let matches = weierstrass_isomorphic(p, canon.a_tilde, canon.b_tilde, a_t, b_t, false);
        let d0 = dg.eval(l0).expect("derivative regular where g is");
        let ordinary_lift = m1.add(m1.pow(l0, p - 1), d0) != 0;
        specializations.push(LegendreSpecialization {
            lambda0: l0,
            lifted_lambda: big,
            a_tilde: a_t,
            b_tilde: b_t,
            canonical_a_tilde: canon.a_tilde,
            canonical_b_tilde: canon.b_tilde,
            matches_canonical: matches,
            ordinary_lift,
        });
    }

    Ok(LegendreFrobenius {
        p,
        degree_bound,
        numerator: g.num.c.clone(),
        denominator: g.den.c.clone(),
        hasse: hasse.c.clone(),
        expansion_point,
        series,
        specializations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p5_specializes_to_canonical_lifts() {
        let r = legendre_modular_frobenius(5, 1).unwrap();
        assert_eq!(r.series.len(), 1);
        assert!(!r.specializations.is_empty());
        for s in &r.specializations {
            assert!(s.matches_canonical, "{s:?}");
            assert!(s.ordinary_lift, "{s:?}");
        }
    }
}
