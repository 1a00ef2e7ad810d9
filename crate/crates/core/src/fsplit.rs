//! Frobenius splittings of Calabi–Yau hypersurfaces via the trace of `f^(p-1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactring::{linalg, ChartRing, Exponent, ModPoly, Modulus};

/// The trace `x^b ↦ x^((b - (p-1))/p)` when every `b_i ≡ p-1 (mod p)`, else 0,
/// applied in every variable.
pub fn frobenius_trace(g: &ModPoly) -> ModPoly {
    let all: Vec<usize> = (0..g.nvars()).collect();
    frobenius_trace_in(g, &all)
}

/// Trace in the listed variables only; the others are untouched, so the map
/// is linear over the polynomial ring they generate.
pub fn frobenius_trace_in(g: &ModPoly, vars: &[usize]) -> ModPoly {
    let p = g.modulus().p() as u32;
    let mut r = g.zero_like();
    'terms: for (e, &c) in g.terms() {
        let mut ne = e.clone();
        for &i in vars {
            if e[i] % p != p - 1 {
                continue 'terms;
            }
            ne[i] = (e[i] + 1) / p - 1;
        }
        r.add_term(ne, c);
    }
    r
}

/// Outcome of the Fedder coefficient test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FedderResult {
    pub split: bool,
    pub hasse_scalar: u64,
}

fn check_cy(f: &ModPoly) -> Result<()> {
    if f.modulus().e() != 1 {
        return Err(Error::Precondition("hypersurface must be over F_p".into()));
    }
    let n1 = f.nvars() as u32;
    if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(n1) {
        return Err(Error::WrongDegree(format!(
            "expected a nonzero form of degree {n1} in {n1} variables"
        )));
    }
    Ok(())
}

/// Coefficient of `(x_0⋯x_n)^(p-1)` in `f^(p-1)`.
pub fn hasse_scalar(f: &ModPoly) -> Result<u64> {
    check_cy(f)?;
    let p = f.modulus().p();
    let target: Exponent = vec![(p - 1) as u32; f.nvars()];
    Ok(f.pow(p - 1).coeff(&target))
}

pub fn fedder_fsplit_test(f: &ModPoly) -> Result<FedderResult> {
    let c = hasse_scalar(f)?;
    Ok(FedderResult {
        split: c != 0,
        hasse_scalar: c,
    })
}

/// Hasse invariant of `y^2 = x^3 + ax + b`: coefficient of `x^(p-1)` in
/// `(x^3+ax+b)^((p-1)/2)`.
pub fn hasse_weierstrass(a: u64, b: u64, p: u64) -> Result<u64> {
    let m = Modulus::prime(p)?;
    let r = ModPoly::with_var_names(m, &["x"]);
    let x = r.var(0);
    let q = x.pow(3).add(&x.scale(a)).add(&r.constant_like(b));
    Ok(q.pow((p - 1) / 2).coeff(&[(p - 1) as u32]))
}

/// `4a^3 + 27b^2 ≠ 0 (mod p)`.
pub fn weierstrass_smooth(a: u64, b: u64, p: u64) -> bool {
    let m = match Modulus::prime(p) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let d = m.add(m.mul(4, m.pow(a, 3)), m.mul(27, m.pow(b, 2)));
    d != 0
}

/// Homogeneous Weierstrass cubic `y^2 z - x^3 - a x z^2 - b z^3` in `(x, y, z)`.
pub fn weierstrass_cubic(m: Modulus, a: u64, b: u64) -> ModPoly {
    let r = ModPoly::with_var_names(m, &["x", "y", "z"]);
    let (a, b) = (m.reduce(a), m.reduce(b));
    ModPoly::from_terms(
        m,
        r.vars().clone(),
        [
            (vec![0, 2, 1], 1),
            (vec![3, 0, 0], m.neg(1)),
            (vec![1, 0, 2], m.neg(a)),
            (vec![0, 0, 3], m.neg(b)),
        ],
    )
}

/// The splitting `σ(g) = c^(-1) Tr(f^(p-1) g)` of a Calabi–Yau hypersurface.
#[derive(Debug, Clone)]
pub struct SplittingData {
    pub f: ModPoly,
    pub multiplier: ModPoly,
    pub hasse_scalar: u64,
    c_inv: u64,
    pub theta: ModPoly,
}

impl SplittingData {
    /// `σ` on the homogeneous coordinate ring.
    pub fn sigma(&self, g: &ModPoly) -> ModPoly {
        frobenius_trace(&self.multiplier.mul(g)).scale(self.c_inv)
    }

    /// Restriction to the chart `x_i = 1`; the chart variable is the first one
    /// (searching from the last) in which the dehomogenized relation is monic.
    pub fn chart(&self, i: usize) -> Result<ChartSplitting> {
        let fa = self.f.dehomogenize(i);
        let ring = ChartRing::auto(&fa)?;
        let trace_vars: Vec<usize> = (0..self.f.nvars()).filter(|&j| j != i).collect();
        let multiplier = fa.pow(self.f.modulus().p() - 1);
        Ok(ChartSplitting {
            ring,
            multiplier,
            trace_vars,
            c_inv: self.c_inv,
            theta: self.theta.dehomogenize(i),
        })
    }
}

/// `σ` on an affine chart `A = F_p[x]/(f_aff)`; the dehomogenized variable
/// stays in the variable list with exponent 0.
#[derive(Debug, Clone)]
pub struct ChartSplitting {
    pub ring: ChartRing,
    pub multiplier: ModPoly,
    pub trace_vars: Vec<usize>,
    c_inv: u64,
    pub theta: ModPoly,
}

impl ChartSplitting {
    pub fn sigma(&self, g: &ModPoly) -> ModPoly {
        let t = frobenius_trace_in(&self.multiplier.mul(g), &self.trace_vars).scale(self.c_inv);
        self.ring.normal_form(&t)
    }
}

/// Builds `σ` and a section `θ` with `σ(θ) = 1`, found by a linear solve over
/// monomials of increasing degree.
pub fn build_splitting(f: &ModPoly) -> Result<SplittingData> {
    let fed = fedder_fsplit_test(f)?;
    if !fed.split {
        return Err(Error::NotFSplit("Hasse scalar vanishes".into()));
    }
    let m = f.modulus();
    let p = m.p();
    let multiplier = f.pow(p - 1);
    let c_inv = m.inv(fed.hasse_scalar).expect("nonzero in F_p");
    let n = f.nvars();
    let mut theta = None;
    // σ maps degree k·p forms to degree k forms; degree-0 target needs k = 0
    'deg: for k in 0..=1u32 {
        let monos = monomials(n, k * p as u32);
        let images: Vec<ModPoly> = monos
            .iter()
            .map(|e| frobenius_trace(&multiplier.mul(&f.monomial(e.clone(), 1))).scale(c_inv))
            .collect();
        let one: Exponent = vec![0; n];
        let mut targets: Vec<Exponent> = images.iter().flat_map(|g| g.terms().keys().cloned()).collect();
        targets.push(one.clone());
        targets.sort();
        targets.dedup();
        let mut a = linalg::Matrix::zeros(targets.len(), monos.len());
        for (j, g) in images.iter().enumerate() {
            for (i, t) in targets.iter().enumerate() {
                a.set(i, j, g.coeff(t));
            }
        }
        let b: Vec<u64> = targets.iter().map(|t| u64::from(*t == one)).collect();
        if let Some(x) = linalg::solve(&m, &a, &b) {
            let mut th = f.zero_like();
            for (e, c) in monos.iter().zip(x) {
                th.add_term(e.clone(), c);
            }
            theta = Some(th);
            break 'deg;
        }
    }
    let theta = theta.ok_or_else(|| Error::Solver("no section of σ found".into()))?;
    Ok(SplittingData {
        f: f.clone(),
        multiplier,
        hasse_scalar: fed.hasse_scalar,
        c_inv,
        theta,
    })
}

/// All exponent vectors in `n` variables of total degree `d`, lexicographic.
pub fn monomials(n: usize, d: u32) -> Vec<Exponent> {
    fn rec(n: usize, d: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if cur.len() == n - 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=d).rev() {
            cur.push(k);
            rec(n, d - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}
