//! Frobenius liftings of the formal disk over `Z/p^2`, the operator `ξ`,
//! fixed 1-forms and multiplicative coordinates.
//!
//! Series are truncated at total degree `D`. A lifting is stored through the
//! exact polynomials `f_i mod p` in `F(t_i) = t_i^p + p·f_i`; only `f_i mod p`
//! matters because `p·f_i` is taken mod `p^2`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactring::{linalg, lift_div_p, parse_int_poly, IntPoly, ModPoly, Modulus, PolyJson, TruncSeries};
use crate::fsplit::monomials;

const NAMES: [&str; 3] = ["t", "u", "v"];

/// Variable names of the `r`-dimensional disk.
pub fn coordinate_names(r: usize) -> &'static [&'static str] {
    &NAMES[..r]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusLift {
    f: Vec<ModPoly>,
    degree: u32,
}

impl FrobeniusLift {
    pub fn new(f: Vec<ModPoly>, degree: u32) -> Result<Self> {
        let first = f
            .first()
            .ok_or_else(|| Error::Precondition("a lifting needs at least one variable".into()))?;
        let r = f.len();
        if first.nvars() != r {
            return Err(Error::RingMismatch(format!("{r} images for {} variables", first.nvars())));
        }
        if f.iter().any(|g| g.vars() != first.vars() || g.modulus().p() != first.modulus().p()) {
            return Err(Error::RingMismatch("images live in different rings".into()));
        }
        if degree < 1 {
            return Err(Error::Precondition("truncation degree must be at least 1".into()));
        }
        let m1 = first.modulus().with_exponent(1);
        Ok(FrobeniusLift {
            f: f.iter().map(|g| g.to_modulus(m1)).collect(),
            degree,
        })
    }

    /// `F(t_i) = (1 + t_i)^p - 1`.
    pub fn multiplicative(p: u64, r: usize, degree: u32) -> Result<Self> {
        let m = Modulus::prime(p)?;
        if r == 0 || r > NAMES.len() {
            return Err(Error::Precondition("between one and three variables are supported".into()));
        }
        let names: Vec<String> = NAMES[..r].iter().map(|s| s.to_string()).collect();
        let mut f = Vec::with_capacity(r);
        for i in 0..r {
            let mut unit = vec![0; r];
            unit[i] = 1;
            let mut one_plus_t = IntPoly::new(names.clone());
            one_plus_t.add_term(vec![0; r], 1);
            one_plus_t.add_term(unit.clone(), 1);
            let mut rest = IntPoly::new(names.clone());
            rest.add_term(vec![0; r], 1);
            rest.add_term(unit.iter().map(|k| k * p as u32).collect(), 1);
            f.push(lift_div_p(&one_plus_t.pow(p as u32).sub(&rest), m)?);
        }
        FrobeniusLift::new(f, degree)
    }

    /// Parses `"f_1; …; f_r"` over the integers in the variables `t, u, v`
    /// (the first `r` of them), with `p` bound to the prime.
    pub fn parse(src: &str, p: u64, degree: u32) -> Result<Self> {
        let m = Modulus::prime(p)?;
        let parts: Vec<&str> = src.split(';').map(str::trim).collect();
        if parts.is_empty() || parts.len() > NAMES.len() {
            return Err(Error::Precondition("between one and three images are supported".into()));
        }
        let names = coordinate_names(parts.len());
        let bindings = BTreeMap::from([('p', p as i128)]);
        let mut f = Vec::with_capacity(parts.len());
        for part in parts {
            let q = parse_int_poly(part, names, &bindings)?;
            let mut g = ModPoly::with_var_names(m, names);
            for (e, &c) in &q.terms {
                g.add_term(e.clone(), m.reduce_i(c));
            }
            f.push(g);
        }
        FrobeniusLift::new(f, degree)
    }

    pub fn p(&self) -> u64 {
        self.f[0].modulus().p()
    }

    pub fn rank(&self) -> usize {
        self.f.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The polynomials `f_i mod p`.
    pub fn images(&self) -> &[ModPoly] {
        &self.f
    }

    pub fn with_degree(&self, degree: u32) -> Self {
        FrobeniusLift {
            f: self.f.clone(),
            degree,
        }
    }

    pub fn modulus_p(&self) -> Modulus {
        self.f[0].modulus()
    }

    pub fn modulus_p2(&self) -> Modulus {
        self.modulus_p().with_exponent(2)
    }

    /// Zero series over `Z/p^e` in the disk variables.
    pub fn series_zero(&self, e: u32, degree: u32) -> TruncSeries {
        TruncSeries::zero(self.modulus_p().with_exponent(e), self.f[0].vars().clone(), degree)
    }

    /// `[0, p)` coefficient lift to `Z/p^2`; series already over `Z/p^2` pass through.
    pub fn lift(&self, g: &TruncSeries) -> TruncSeries {
        assert_eq!(g.modulus().p(), self.p());
        if g.modulus().e() == 1 {
            g.to_modulus(self.modulus_p2())
        } else {
            g.clone()
        }
    }

    /// `t_i^p + p·f_i` over `Z/p^2`, truncated at `degree`.
    pub fn image(&self, i: usize, degree: u32) -> TruncSeries {
        let pf = self.f[i].times_p_lifted();
        let mut e = vec![0; self.rank()];
        e[i] = self.p() as u32;
        TruncSeries::new(pf.add(&pf.monomial(e, 1)), degree)
    }

    /// `F^*(g) = g(t^p) + p·Σ (∂_i g)(t^p)·f_i`, exact mod `p^2` since `(p·f)^2 = 0`.
    pub fn pullback(&self, g: &TruncSeries) -> TruncSeries {
        let g = self.lift(g);
        let d = g.degree();
        let m1 = self.modulus_p();
        let mut corr = self.series_zero(1, d);
        for (i, fi) in self.f.iter().enumerate() {
            // unknown terms of ∂_i g sit in degree ≥ d and land in degree ≥ p·d
            let dg = g.derivative(i).to_modulus(m1).with_degree(d);
            corr = corr.add(&dg.frobenius_substitute().mul(&TruncSeries::new(fi.clone(), d)));
        }
        g.frobenius_substitute().add(&TruncSeries::new(corr.poly().times_p_lifted(), d))
    }

    /// `F^*(g)` by substituting the images into `g`.
    pub fn pullback_by_substitution(&self, g: &TruncSeries) -> TruncSeries {
        let g = self.lift(g);
        let images: Vec<TruncSeries> = (0..self.rank()).map(|i| self.image(i, g.degree())).collect();
        g.substitute(&images)
    }

    /// `ξ(ω) = (1/p)·F^*(ω~)` for the `[0, p)` lift `ω~`. Only `ω(t^p)`
    /// survives the division, so `ξ(ω)` is known to degree
    /// `min(p·(d+1) - 1, D)` when `ω` is known to degree `d`.
    pub fn xi(&self, w: &OneForm) -> OneForm {
        assert_eq!(w.rank(), self.rank());
        let p = self.p() as u32;
        let out = (p * (w.degree() + 1) - 1).min(self.degree);
        let mut acc = vec![self.series_zero(2, out); self.rank()];
        for (i, g) in w.comps.iter().enumerate() {
            let pulled = self.pullback(&self.lift(g).with_degree(out));
            let img = self.image(i, out + 1);
            for (j, a) in acc.iter_mut().enumerate() {
                *a = a.add(&pulled.mul(&img.derivative(j)));
            }
        }
        OneForm {
            comps: acc
                .into_iter()
                .map(|a| TruncSeries::new(a.poly().div_p().expect("F^* of a 1-form is divisible by p"), out))
                .collect(),
        }
    }

    /// `J(0)_{ij} = ∂f_i/∂t_j (0)`.
    pub fn jacobian_at_zero(&self) -> Vec<Vec<u64>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let mut e = vec![0; r];
                        e[j] = 1;
                        self.f[i].coeff(&e)
                    })
                    .collect()
            })
            .collect()
    }

    /// `det J(0) ≠ 0` in `F_p`.
    pub fn is_ordinary_lift(&self) -> bool {
        let j = linalg::Matrix::from_rows(&self.jacobian_at_zero());
        linalg::rank(&self.modulus_p(), &j) == self.rank()
    }

    /// `c_i = p·f_i(0) mod p^2`, the fixed point with `c ∈ (pZ/p^2)^r`.
    pub fn teichmuller_point(&self) -> Vec<u64> {
        let p = self.p();
        self.f.iter().map(|g| g.constant_term() * p).collect()
    }
}

/// `ω = Σ g_i dt_i` over `F_p`; the precision is that of the components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneForm {
    pub comps: Vec<TruncSeries>,
}

fn agree(a: &TruncSeries, b: &TruncSeries, degree: u32) -> bool {
    a.poly().sub(b.poly()).filter_degree(degree).is_zero()
}

impl OneForm {
    pub fn new(comps: Vec<TruncSeries>) -> Self {
        assert!(!comps.is_empty());
        OneForm { comps }
    }

    pub fn zero(lift: &FrobeniusLift, degree: u32) -> Self {
        OneForm {
            comps: vec![lift.series_zero(1, degree); lift.rank()],
        }
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().map(TruncSeries::degree).min().expect("nonempty")
    }

    pub fn modulus(&self) -> Modulus {
        self.comps[0].modulus()
    }

    /// `dg`.
    pub fn differential(g: &TruncSeries) -> Self {
        OneForm {
            comps: (0..g.nvars()).map(|i| g.derivative(i)).collect(),
        }
    }

    /// `dq / q` for a unit `q`.
    pub fn dlog(q: &TruncSeries) -> Result<Self> {
        let inv = q
            .inverse()
            .ok_or_else(|| Error::Precondition("d log needs a unit series".into()))?;
        Ok(OneForm {
            comps: (0..q.nvars()).map(|i| q.derivative(i).mul(&inv)).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        OneForm {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        OneForm {
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        OneForm {
            comps: self.comps.iter().map(|a| a.scale(k)).collect(),
        }
    }

    /// `u·ω`.
    pub fn times(&self, u: &TruncSeries) -> Self {
        OneForm {
            comps: self.comps.iter().map(|a| a.mul(u)).collect(),
        }
    }

    pub fn with_degree(&self, degree: u32) -> Self {
        OneForm {
            comps: self.comps.iter().map(|a| a.with_degree(degree)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(TruncSeries::is_zero)
    }

    /// Coefficients of `dω`: `∂_i g_j - ∂_j g_i` for `i < j`.
    pub fn exterior_derivative(&self) -> Vec<TruncSeries> {
        let r = self.rank();
        let mut out = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                out.push(self.comps[j].derivative(i).sub(&self.comps[i].derivative(j)));
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().iter().all(TruncSeries::is_zero)
    }

    /// Equality of all coefficients of total degree at most `degree`.
    pub fn agrees_with(&self, o: &Self, degree: u32) -> bool {
        self.rank() == o.rank() && self.comps.iter().zip(&o.comps).all(|(a, b)| agree(a, b, degree))
    }

    pub fn to_json(&self) -> Vec<PolyJson> {
        self.comps.iter().map(|c| c.poly().to_json()).collect()
    }
}

/// Basis of `{ω : ξ(ω) = ω}` to degree `D`, checked against a re-run at `D + 3`.
///
/// Over `F_p` the operator `ξ` is linear, and the degree-0 part of a fixed
/// form lies in `ker(J(0)^T - I)`; every higher part is then forced. The
/// space therefore has dimension `r` only when `J(0) = I`, and a smaller
/// kernel is reported as a deficit.
pub fn fixed_forms(lift: &FrobeniusLift) -> Result<Vec<OneForm>> {
    if !lift.is_ordinary_lift() {
        return Err(Error::Precondition("the lifting is not ordinary".into()));
    }
    let basis = fixed_forms_at(lift)?;
    let longer = fixed_forms_at(&lift.with_degree(lift.degree() + 3))?;
    if longer.len() != basis.len() || !basis.iter().zip(&longer).all(|(a, b)| a.agrees_with(b, lift.degree())) {
        return Err(Error::Precision(format!(
            "fixed forms changed when the truncation was raised from {} to {}",
            lift.degree(),
            lift.degree() + 3
        )));
    }
    Ok(basis)
}

/// Degree-by-degree solve. Stage `k` has unknowns the degree-`k` coefficients
/// (first, so they take the pivots) and the weights of the stage `k-1`
/// solutions.
fn fixed_forms_at(lift: &FrobeniusLift) -> Result<Vec<OneForm>> {
    let r = lift.rank();
    let d = lift.degree();
    let m1 = lift.modulus_p();
    let j0 = lift.jacobian_at_zero();
    let mut basis: Vec<OneForm> = Vec::new();
    for k in 0..=d {
        let monos = monomials(r, k);
        let n = r * monos.len();
        let images: Vec<OneForm> = basis.iter().map(|b| lift.xi(b)).collect();
        let mut mat = linalg::Matrix::zeros(n, n + basis.len());
        for j in 0..r {
            for (s, e) in monos.iter().enumerate() {
                let row = j * monos.len() + s;
                mat.set(row, row, m1.neg(1));
                for (b, img) in images.iter().enumerate() {
                    mat.set(row, n + b, img.comps[j].coeff(e));
                }
            }
        }
        // degree-k coefficients feed ξ only in degree ≥ p·k
        if k == 0 {
            for (i, ji) in j0.iter().enumerate() {
                for (j, &v) in ji.iter().enumerate() {
                    mat.set(j, i, m1.add(mat.get(j, i), v));
                }
            }
        }
        let kernel = linalg::kernel(&m1, &mat);
        basis = kernel
            .iter()
            .map(|v| {
                let comps = (0..r)
                    .map(|j| {
                        let mut c = lift.series_zero(1, k);
                        for (b, old) in basis.iter().enumerate() {
                            c = c.add(&old.comps[j].with_degree(k).scale(v[n + b]));
                        }
                        let mut poly = c.poly().clone();
                        for (s, e) in monos.iter().enumerate() {
                            poly.add_term(e.clone(), v[j * monos.len() + s]);
                        }
                        TruncSeries::new(poly, k)
                    })
                    .collect();
                OneForm { comps }
            })
            .collect();
    }
    if basis.len() < r {
        return Err(Error::DimensionDeficit {
            found: basis.len(),
            expected: r,
            degree: d,
        });
    }
    for w in &basis {
        if !lift.xi(w).agrees_with(w, d) || !w.is_closed() {
            return Err(Error::Inconsistent("solver returned a form that is not fixed and closed".into()));
        }
    }
    Ok(basis)
}

/// How the free coefficients (monomials that are `p`-th powers) are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Zero,
    Seeded(u64),
}

/// `q` with `q(0) = 1` and `dq/q = ω`, one degree more precise than `ω`.
/// Solutions differ by `p`-th powers, which is where [`TieBreak`] enters.
pub fn dlog_solve(w: &OneForm, tie: TieBreak) -> Result<TruncSeries> {
    if !w.is_closed() {
        return Err(Error::NonIntegrable("the form is not closed".into()));
    }
    let m1 = w.modulus();
    let p = m1.p();
    let r = w.rank();
    let d = w.degree() + 1;
    let mut rng = match tie {
        TieBreak::Zero => None,
        TieBreak::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
    };
    let template = w.comps[0].zero_like().with_degree(d);
    let mut q = template.constant_like(1);
    for k in 1..=d {
        // ∂_i q_k = [q·ω_i]_(k-1)
        let rhs: Vec<TruncSeries> = w.comps.iter().map(|g| q.with_degree(k - 1).mul(&g.with_degree(k - 1))).collect();
        let mut qk = template.poly().zero_like();
        for e in monomials(r, k) {
            let mut value = None;
            for i in (0..r).filter(|&i| e[i] > 0) {
                let mut lower = e.clone();
                lower[i] -= 1;
                let target = rhs[i].coeff(&lower);
                let ei = e[i] as u64 % p;
                if ei == 0 {
                    if target != 0 {
                        return Err(Error::NonIntegrable(format!(
                            "coefficient of {} has no primitive",
                            qk.format_monomial(&lower)
                        )));
                    }
                    continue;
                }
                let c = m1.mul(target, m1.inv(ei).expect("unit"));
                match value {
                    Some(v) if v != c => {
                        return Err(Error::NonIntegrable("partial derivatives disagree".into()));
                    }
                    _ => value = Some(c),
                }
            }
            let c = match (value, rng.as_mut()) {
                (Some(c), _) => c,
                (None, Some(g)) => g.gen_range(0..p),
                (None, None) => 0,
            };
            qk.add_term(e, c);
        }
        q = q.add(&TruncSeries::new(qk, d));
    }
    if !OneForm::dlog(&q)?.agrees_with(w, w.degree()) {
        return Err(Error::Inconsistent("d log of the solution differs from the form".into()));
    }
    Ok(q)
}

/// The `p`-th root of `q1 / q2`, if the ratio is a `p`-th power.
pub fn pth_power_ratio(q1: &TruncSeries, q2: &TruncSeries) -> Option<TruncSeries> {
    q1.mul(&q2.inverse()?).pth_root()
}

/// `q~ ≡ q mod p` with `F^*(q~) = q~^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeLift {
    /// Over `Z/p^2`, with the precision of `q`.
    pub q_tilde: TruncSeries,
    /// Degree to which the `p`-part of `q~` is determined; it is `⌊d/p⌋`
    /// because it enters `F^*(q~)` only through `h(t^p)`. Higher terms are 0.
    pub lift_degree: u32,
}

/// Writes `q~ = q0 + p·h` with `q0` the `[0, p)` lift. Then
/// `F^*(q~) - q~^p = F^*(q0) - q0^p + p·h(t^p)`, which fixes `h`.
pub fn lift_multiplicative(lift: &FrobeniusLift, q: &TruncSeries) -> Result<MultiplicativeLift> {
    let q = q.to_modulus(lift.modulus_p());
    if q.constant_term() == 0 {
        return Err(Error::Precondition("q must be a unit".into()));
    }
    let p = lift.p();
    let d = q.degree();
    let q0 = lift.lift(&q);
    let defect = lift.pullback(&q0).sub(&q0.pow(p));
    let e = TruncSeries::new(defect.poly().div_p().expect("F^*(q) ≡ q^p mod p"), d);
    let h = e
        .pth_root()
        .ok_or_else(|| Error::Inconsistent("ξ(d log q) ≠ d log q".into()))?
        .neg();
    let q_tilde = q0.add(&TruncSeries::new(h.poly().times_p_lifted(), d));
    if lift.pullback(&q_tilde) != q_tilde.pow(p) {
        return Err(Error::Inconsistent("F^*(q~) ≠ q~^p after the correction".into()));
    }
    Ok(MultiplicativeLift {
        q_tilde,
        lift_degree: d / p as u32,
    })
}

/// `(q~_1 - 1, …, q~_r - 1)` is the ideal of the Teichmüller point: every
/// `q~_i` equals 1 there and the Jacobian of the `q~_i` at 0 is invertible mod `p`.
pub fn generates_teichmuller_ideal(lift: &FrobeniusLift, qs: &[TruncSeries]) -> bool {
    let c = lift.teichmuller_point();
    let r = lift.rank();
    if qs.len() != r || qs.iter().any(|q| q.evaluate(&c) != 1) {
        return false;
    }
    let m1 = lift.modulus_p();
    let rows: Vec<Vec<u64>> = qs
        .iter()
        .map(|q| {
            (0..r)
                .map(|j| {
                    let mut e = vec![0; r];
                    e[j] = 1;
                    m1.reduce(q.coeff(&e))
                })
                .collect()
        })
        .collect();
    linalg::rank(&m1, &linalg::Matrix::from_rows(&rows)) == r
}

/// Remainder `(R0, R1)` of `x` modulo `ψ_i = t_i^p + p·(f_i - f_i(0))`, with
/// `x ≡ R0 + p·R1` on the basis `t^e`, `e_i < p`, and the degree to which
/// `R1` is determined: `min(d + 1 - p, p_part_degree)`, or `None` if nowhere.
fn frobenius_remainder(lift: &FrobeniusLift, x: &TruncSeries, p_part_degree: u32) -> (ModPoly, ModPoly, Option<u32>) {
    let m1 = lift.modulus_p();
    let p = lift.p() as u32;
    let x = lift.lift(x);
    let d = x.degree();
    let x0 = x.to_modulus(m1);
    let x1 = x.poly().sub(&x0.poly().to_modulus(lift.modulus_p2())).div_p().expect("difference of lifts");
    let tails: Vec<ModPoly> = lift.images().iter().map(|f| f.sub(&f.constant_like(f.constant_term()))).collect();
    let mut r0 = x0.poly().zero_like();
    let mut r1 = x1;
    for (e, &c) in x0.poly().terms() {
        match e.iter().position(|&k| k >= p) {
            None => r0.add_term(e.clone(), c),
            Some(i) => {
                let mut rest = e.clone();
                rest[i] -= p;
                r1 = r1.sub(&tails[i].mul(&r1.monomial(rest, c)));
            }
        }
    }
    let mut reduced = r1.zero_like();
    for (e, &c) in r1.terms().iter().filter(|(e, _)| e.iter().all(|&k| k < p)) {
        reduced.add_term(e.clone(), c);
    }
    let trusted = (d + 1).checked_sub(p).map(|t| t.min(p_part_degree));
    (r0, reduced, trusted)
}

/// Membership of `x` in `F^*(J) = (ψ_1, …, ψ_r)`, `J` the ideal of the
/// Teichmüller point. `R0` is decided to the precision `d` of `x`, `R1`
/// where it is determined.
pub fn in_frobenius_ideal(lift: &FrobeniusLift, x: &TruncSeries, p_part_degree: u32) -> bool {
    let (r0, r1, trusted) = frobenius_remainder(lift, x, p_part_degree);
    if !r0.is_zero() {
        return false;
    }
    trusted.is_none_or(|t| r1.terms().keys().all(|e| e.iter().sum::<u32>() > t))
}

/// Membership in `F^*(J) + p·J`: the `p`-part of the remainder may be any
/// multiple of the `t_i`, so only its constant term has to vanish.
///
/// For multiplicative `q~, q~'` with `q~' = u~^p·q~`, `u~ - 1 ∈ J`:
/// `u~^p - 1 = F^*(u~ - 1) - p·δ(u~)` with `δ(u~) ∈ J` mod `p`, so `q~ - q~'`
/// lies here but in general not in `F^*(J)`.
pub fn in_frobenius_ideal_plus_pj(lift: &FrobeniusLift, x: &TruncSeries, p_part_degree: u32) -> bool {
    let (r0, r1, trusted) = frobenius_remainder(lift, x, p_part_degree);
    r0.is_zero() && (trusted.is_none() || r1.constant_term() == 0)
}

/// `θ(x0, x1) = x~0^p + p·x~1`; independent of the lifts since `p^2 = 0`.
pub fn theta_map(x0: &TruncSeries, x1: &TruncSeries) -> TruncSeries {
    let m2 = x0.modulus().with_exponent(2);
    let lift = |s: &TruncSeries| if s.modulus().e() == 1 { s.to_modulus(m2) } else { s.clone() };
    let p = m2.p();
    let x1_mod_p = x1.to_modulus(m2.with_exponent(1));
    lift(x0).pow(p).add(&TruncSeries::new(x1_mod_p.poly().times_p_lifted(), x1.degree()))
}

/// `t(F)(y) = (y, δ(y))` with `F^*(y~) = y~^p + p·δ(y)`.
pub fn cartier_section(lift: &FrobeniusLift, y: &TruncSeries) -> (TruncSeries, TruncSeries) {
    let yl = lift.lift(y);
    let p = lift.p();
    let diff = lift.pullback(&yl).sub(&yl.pow(p));
    let delta = TruncSeries::new(diff.poly().div_p().expect("F^*(y) ≡ y^p mod p"), diff.degree());
    (yl.to_modulus(lift.modulus_p()), delta)
}

/// `f_i = c_i + t_i + (a few random terms of degree 2 and 3)`, so `J(0) = I`.
pub fn random_ordinary_lift<R: Rng>(rng: &mut R, p: u64, r: usize, degree: u32) -> Result<FrobeniusLift> {
    let m = Modulus::prime(p)?;
    let names = coordinate_names(r);
    let mut f = Vec::with_capacity(r);
    for i in 0..r {
        let mut g = ModPoly::with_var_names(m, names);
        g.add_term(vec![0; r], rng.gen_range(0..p));
        let mut unit = vec![0; r];
        unit[i] = 1;
        g.add_term(unit, 1);
        for _ in 0..3 {
            let k = rng.gen_range(2..=3u32);
            let monos = monomials(r, k);
            let e = monos[rng.gen_range(0..monos.len())].clone();
            g.add_term(e, rng.gen_range(1..p));
        }
        f.push(g);
    }
    FrobeniusLift::new(f, degree)
}

/// Report of the canonical-coordinates pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct CoordinatesReport {
    pub p: u64,
    pub degree: u32,
    pub ordinary: bool,
    pub teichmuller_point: Vec<u64>,
    pub fixed_forms: Option<Vec<Vec<PolyJson>>>,
    pub q_tilde: Option<Vec<PolyJson>>,
    pub q_tilde_lift_degree: Option<u32>,
    pub teichmuller_ideal: Option<bool>,
}

pub fn canonical_coordinates(lift: &FrobeniusLift) -> Result<CoordinatesReport> {
    let mut report = CoordinatesReport {
        p: lift.p(),
        degree: lift.degree(),
        ordinary: lift.is_ordinary_lift(),
        teichmuller_point: lift.teichmuller_point(),
        fixed_forms: None,
        q_tilde: None,
        q_tilde_lift_degree: None,
        teichmuller_ideal: None,
    };
    if !report.ordinary {
        return Ok(report);
    }
    let forms = fixed_forms(lift)?;
    let mut lifts = Vec::with_capacity(forms.len());
    for w in &forms {
        let q = dlog_solve(&w.with_degree(lift.degree() - 1), TieBreak::Zero)?;
        lifts.push(lift_multiplicative(lift, &q)?);
    }
    let qs: Vec<TruncSeries> = lifts.iter().map(|l| l.q_tilde.clone()).collect();
    report.fixed_forms = Some(forms.iter().map(OneForm::to_json).collect());
    report.q_tilde = Some(qs.iter().map(|q| q.poly().to_json()).collect());
    report.q_tilde_lift_degree = lifts.first().map(|l| l.lift_degree);
    report.teichmuller_ideal = Some(generates_teichmuller_ideal(lift, &qs));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::parse_poly_in;

    fn series(src: &str, m: Modulus, names: &[&str], d: u32) -> TruncSeries {
        TruncSeries::new(parse_poly_in(src, m, names).unwrap(), d)
    }

    /// `Σ_i ω_i(t^p)·(δ_ij t_i^(p-1) + ∂_j f_i)` computed directly mod `p`.
    fn xi_explicit(lift: &FrobeniusLift, w: &OneForm) -> OneForm {
        let p = lift.p() as u32;
        let out = (p * (w.degree() + 1) - 1).min(lift.degree());
        let r = lift.rank();
        let mut comps = vec![lift.series_zero(1, out); r];
        for i in 0..r {
            let gp = w.comps[i].with_degree(out).frobenius_substitute();
            for (j, c) in comps.iter_mut().enumerate() {
                let mut factor = lift.images()[i].derivative(j);
                if i == j {
                    let mut e = vec![0; r];
                    e[i] = p - 1;
                    factor = factor.add(&factor.monomial(e, 1));
                }
                *c = c.add(&gp.mul(&TruncSeries::new(factor, out)));
            }
        }
        OneForm { comps }
    }

    #[test]
    fn multiplicative_images() {
        let l = FrobeniusLift::multiplicative(5, 1, 10).unwrap();
        let m = Modulus::prime(5).unwrap();
        let expect = parse_poly_in("t + 2*t^2 + 2*t^3 + t^4", m, &["t"]).unwrap();
        assert_eq!(l.images()[0], expect);
        let parsed = FrobeniusLift::parse("((1+t)^p-1-t^p)/p", 5, 10).unwrap();
        assert_eq!(parsed, l);
    }

    #[test]
    fn pullback_matches_substitution() {
        let m2 = Modulus::new(5, 2).unwrap();
        let l = FrobeniusLift::parse("1 + t + 3*t^2*u; u + 2*t^3", 5, 12).unwrap();
        let g = series("7 + 3*t + 11*u^2 + t*u^3 + 24*t^4", m2, &["t", "u"], 12);
        assert_eq!(l.pullback(&g), l.pullback_by_substitution(&g));
    }

    #[test]
    fn xi_examples() {
        let m = Modulus::prime(5).unwrap();
        let l = FrobeniusLift::multiplicative(5, 1, 20).unwrap();
        let u = series("1 + t", m, &["t"], 20);
        let w = OneForm::dlog(&u).unwrap().with_degree(19);
        assert!(l.xi(&w).agrees_with(&w, 19));

        let flat = FrobeniusLift::parse("0", 5, 20).unwrap();
        let dt = OneForm::new(vec![series("1", m, &["t"], 19)]);
        let expect = OneForm::new(vec![series("t^4", m, &["t"], 19)]);
        assert!(flat.xi(&dt).agrees_with(&expect, 19));
        assert!(l.xi(&OneForm::zero(&l, 19)).is_zero());
    }

    #[test]
    fn xi_matches_explicit_formula() {
        let m = Modulus::prime(3).unwrap();
        let l = FrobeniusLift::parse("2 + t + t^2*u + u^3; u + 2*t*u", 3, 12).unwrap();
        let w = OneForm::new(vec![
            series("1 + t*u + 2*u^2", m, &["t", "u"], 4),
            series("t + 2*t^3", m, &["t", "u"], 4),
        ]);
        let a = l.xi(&w);
        assert_eq!(a.degree(), 12);
        assert_eq!(a, xi_explicit(&l, &w));
    }

    #[test]
    fn ordinarity_examples() {
        assert!(FrobeniusLift::parse("t", 5, 8).unwrap().is_ordinary_lift());
        assert!(!FrobeniusLift::parse("t^2", 5, 8).unwrap().is_ordinary_lift());
        assert!(FrobeniusLift::multiplicative(7, 1, 8).unwrap().is_ordinary_lift());
    }

    #[test]
    fn teichmuller_point_is_the_only_topological_fixed_point() {
        for (src, expect) in [("0", 0u64), ("1", 5), ("((1+t)^p-1-t^p)/p", 0)] {
            let l = FrobeniusLift::parse(src, 5, 6).unwrap();
            assert_eq!(l.teichmuller_point(), vec![expect]);
            // c = c^5 + 5·f(c) over c ∈ 5Z/25
            let m2 = l.modulus_p2();
            let f = l.images()[0].to_modulus(m2);
            let fixed: Vec<u64> = (0..5)
                .map(|k| 5 * k)
                .filter(|&c| m2.add(m2.pow(c, 5), m2.mul(5, f.evaluate(&[c]))) == c)
                .collect();
            assert_eq!(fixed, vec![expect]);
        }
    }

    #[test]
    fn fixed_form_of_multiplicative_lift() {
        for p in [3u64, 5, 7] {
            let l = FrobeniusLift::multiplicative(p, 1, 20).unwrap();
            let forms = fixed_forms(&l).unwrap();
            assert_eq!(forms.len(), 1);
            let m = Modulus::prime(p).unwrap();
            let u = series("1 + t", m, &["t"], 21);
            assert!(forms[0].agrees_with(&OneForm::dlog(&u).unwrap(), 20));
            let q = dlog_solve(&forms[0], TieBreak::Zero).unwrap();
            assert!(agree(&q, &u, 21));
            let lifted = lift_multiplicative(&l, &q).unwrap();
            assert_eq!(lifted.q_tilde, l.lift(&u).with_degree(21));
        }
    }

    #[test]
    fn fixed_forms_in_two_variables() {
        let l = FrobeniusLift::multiplicative(3, 2, 9).unwrap();
        let forms = fixed_forms(&l).unwrap();
        let m = Modulus::prime(3).unwrap();
        let names = ["t", "u"];
        let e1 = OneForm::dlog(&series("1 + t", m, &names, 10)).unwrap();
        let e2 = OneForm::dlog(&series("1 + u", m, &names, 10)).unwrap();
        assert!(forms[0].agrees_with(&e1, 9));
        assert!(forms[1].agrees_with(&e2, 9));
    }

    #[test]
    fn non_ordinary_and_deficit() {
        let l = FrobeniusLift::parse("t^2", 5, 8).unwrap();
        assert!(matches!(fixed_forms(&l), Err(Error::Precondition(_))));
        // J(0) = 2: ker(J(0) - 1) = 0 over F_5
        let l = FrobeniusLift::parse("2*t", 5, 8).unwrap();
        assert!(matches!(
            fixed_forms(&l),
            Err(Error::DimensionDeficit {
                found: 0,
                expected: 1,
                degree: 8
            })
        ));
    }

    #[test]
    fn dlog_examples_and_ambiguity() {
        let m = Modulus::prime(5).unwrap();
        let u = series("1 + t", m, &["t"], 12);
        let w = OneForm::dlog(&u).unwrap();
        assert!(agree(&dlog_solve(&w, TieBreak::Zero).unwrap(), &u, 12));
        let zero = OneForm::new(vec![series("0", m, &["t"], 11)]);
        assert_eq!(dlog_solve(&zero, TieBreak::Zero).unwrap(), series("1", m, &["t"], 12));
        let a = dlog_solve(&w, TieBreak::Zero).unwrap();
        let b = dlog_solve(&w, TieBreak::Seeded(3)).unwrap();
        assert_ne!(a, b);
        let root = pth_power_ratio(&a, &b).unwrap();
        // over F_p, r^p = r(t^p)
        assert!(agree(&root.with_degree(12).frobenius_substitute(), &a.mul(&b.inverse().unwrap()), 12));
        let cartier = OneForm::new(vec![series("t^4", m, &["t"], 11)]);
        assert!(matches!(dlog_solve(&cartier, TieBreak::Zero), Err(Error::NonIntegrable(_))));
    }

    #[test]
    fn theta_and_cartier_section() {
        let m = Modulus::prime(5).unwrap();
        let m2 = m.with_exponent(2);
        let x = series("1 + 2*t", m, &["t"], 10);
        let zero = series("0", m, &["t"], 10);
        assert_eq!(theta_map(&x, &zero), x.to_modulus(m2).pow(5));
        // other lifts of the same pair
        let x_alt = series("6 + 7*t + 5*t^3", m2, &["t"], 10);
        let y_alt = series("10*t", m2, &["t"], 10);
        assert_eq!(theta_map(&x_alt, &y_alt), theta_map(&x, &zero));

        let l = FrobeniusLift::parse("t", 5, 10).unwrap();
        let t = series("t", m, &["t"], 10);
        let (y, delta) = cartier_section(&l, &t);
        assert_eq!((y, delta), (t.clone(), t.clone()));
        let g = series("2 + t + 3*t^2", m, &["t"], 10);
        let (y0, y1) = cartier_section(&l, &g);
        assert_eq!(theta_map(&y0, &y1), l.pullback_by_substitution(&g));
    }

    #[test]
    fn coordinates_report_for_multiplicative_lift() {
        let l = FrobeniusLift::parse("((1+t)^p-1-t^p)/p", 5, 12).unwrap();
        let r = canonical_coordinates(&l).unwrap();
        assert!(r.ordinary);
        assert_eq!(r.teichmuller_point, vec![0]);
        assert_eq!(r.teichmuller_ideal, Some(true));
        let q = &r.q_tilde.unwrap()[0];
        assert_eq!(q.terms.len(), 2);
    }

    #[test]
    fn two_coordinate_systems_differ_outside_the_frobenius_ideal() {
        // q~' = (1 + t^2)^3 q~ is multiplicative with the same d log mod 3,
        // and (1 + t^2)^3 - 1 ≡ 3t^2 mod ((1+t)^3 - 1)
        let l = FrobeniusLift::multiplicative(3, 1, 12).unwrap();
        let one = l.series_zero(2, 12).constant_like(1);
        let t = one.var(0);
        let q = one.add(&t);
        let q2 = q.mul(&one.add(&t.pow(2)).pow(3));
        assert_eq!(l.pullback(&q2), q2.pow(3));
        let diff = q2.sub(&q);
        assert!(!in_frobenius_ideal(&l, &diff, 4));
        assert!(in_frobenius_ideal_plus_pj(&l, &diff, 4));
        assert!(in_frobenius_ideal(&l, &l.pullback(&t.pow(2)), 4));
        assert!(!in_frobenius_ideal_plus_pj(&l, &one.scale(3), 4));
    }
}
