mod common;

use std::sync::OnceLock;

use common::{naive_ap, smooth};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wittlift::canlift::lifted_equation;
use wittlift::exactring::{parse_poly, ChartRing, Modulus, ModPoly};
use wittlift::fsplit::{build_splitting, weierstrass_cubic};
use wittlift::qfsplit::{
    qf_height_elliptic, random_element, random_witt, rho, solve_level_two, level_two_chart, verify_certificate, witt_bar_eq,
    QuasiCanonicalLift, QuasiSplitting,
};
use wittlift::witt::{WittRing, WittVec};

fn line(p: u64) -> (WittRing, ModPoly) {
    let x = parse_poly("x", Modulus::prime(p).unwrap()).unwrap();
    (WittRing::polynomial(&x), x)
}

fn curve_chart(p: u64) -> WittRing {
    let f = parse_poly("y^2 - x^3 - x - 1", Modulus::prime(p).unwrap()).unwrap();
    WittRing::over_chart(&ChartRing::auto(&f).unwrap())
}

/// A ring (the line or a curve chart over `F_p`) and a seeded generator.
fn ring_case() -> impl Strategy<Value = (WittRing, Vec<usize>, ChaCha8Rng)> {
    (prop::sample::select(vec![3u64, 5]), any::<bool>(), any::<u64>()).prop_map(|(p, curve, seed)| {
        let (w, vars) = if curve { (curve_chart(p), vec![0, 1]) } else { (line(p).0, vec![0]) };
        (w, vars, ChaCha8Rng::seed_from_u64(seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rho_is_additive_and_lifts_frobenius((w, vars, mut rng) in ring_case()) {
        let x = random_element(&mut rng, &w, &vars, 3);
        let y = random_element(&mut rng, &w, &vars, 3);
        let p = w.p();
        for m in [2, 3] {
            let sum = w.vec_add(&rho(&w, &x, m), &rho(&w, &y, m))?;
            prop_assert!(witt_bar_eq(&w, &rho(&w, &w.nf(&x.add(&y)), m), &sum)?);
            let prod = w.vec_mul(&rho(&w, &x, m), &rho(&w, &y, m))?;
            prop_assert!(witt_bar_eq(&w, &rho(&w, &w.mul_a(&x, &y), m), &prod)?);
            // R^(m-1)∘ρ = F
            prop_assert_eq!(w.vec_restrict(&rho(&w, &x, m), m - 1).comps, vec![w.pow_a(&x, p)]);
        }
    }

    #[test]
    fn multiplication_in_witt_mod_p_is_degenerate((w, vars, mut rng) in ring_case()) {
        for m in [2, 3] {
            let x = random_witt(&mut rng, &w, &vars, m, 2);
            let y = random_witt(&mut rng, &w, &vars, m, 2);
            let zero = w.vec_zero(m);
            let vv = w.vec_mul(&w.vec_verschiebung(&x), &w.vec_verschiebung(&y))?;
            prop_assert!(witt_bar_eq(&w, &vv, &zero)?);
            let px = w.vec_mul(&w.vec_integer(w.p(), m), &x)?;
            prop_assert!(witt_bar_eq(&w, &px, &zero)?);
            if !w.nf(&x.comps[0]).is_zero() {
                prop_assert!(!witt_bar_eq(&w, &x, &zero)?);
            }
        }
    }
}

/// Level-2 lifts of supersingular curves, built once.
fn level_two_lifts() -> &'static [QuasiCanonicalLift] {
    static LIFTS: OnceLock<Vec<QuasiCanonicalLift>> = OnceLock::new();
    LIFTS.get_or_init(|| {
        [(0u64, 1u64, 5u64), (1, 0, 7)]
            .into_iter()
            .map(|(a, b, p)| {
                let f = weierstrass_cubic(Modulus::prime(p).unwrap(), a, b);
                QuasiCanonicalLift::new(level_two_chart(&f, &solve_level_two(&f).unwrap()).unwrap()).unwrap()
            })
            .collect()
    })
}

fn witt(rng: &mut ChaCha8Rng, s: &QuasiSplitting, len: usize) -> WittVec {
    random_witt(rng, s.ring(), s.trace_vars(), len, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn level_two_splitting_properties(i in 0usize..2, seed in any::<u64>()) {
        let lift = &level_two_lifts()[i];
        let s = &lift.sigma;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (witt(&mut rng, s, 2), witt(&mut rng, s, 2));
        prop_assert!(s.is_f_linear_on(&x, &y)?);
        prop_assert!(s.is_additive_on(&x, &y)?);
        let shifts: Vec<ModPoly> = (0..2).map(|_| random_element(&mut rng, s.ring(), s.trace_vars(), 2)).collect();
        prop_assert!(s.descends_on(&x, &shifts)?);

        // V(ker σ) is an ideal of W_3
        let u = s.kernel_element(&y)?;
        prop_assert!(s.sigma(&u)?.is_zero());
        let z = witt(&mut rng, s, 3);
        let (a0, a1) = lift.ideal_product(&z, &u)?;
        prop_assert!(a0.is_zero() && a1.is_zero());

        let [by_witt, by_sigma] = lift.multiplication_by_p_paths(&z)?;
        prop_assert_eq!(by_witt, by_sigma);
    }
}

#[test]
fn level_two_lifts_carry_their_relation() {
    for lift in level_two_lifts() {
        assert_eq!(lift.witt_length(), 3);
        assert!(lift.verify_vanishing().unwrap());
        assert!(verify_certificate(&lift.sigma, 11).unwrap());
    }
}

#[test]
fn level_one_agrees_with_the_canonical_lift() {
    let p = 5;
    let m = Modulus::prime(p).unwrap();
    for a in 0..p {
        for b in 0..p {
            if !smooth(a, b, p) || naive_ap(a, b, p) % p as i64 == 0 {
                continue;
            }
            let f = weierstrass_cubic(m, a, b);
            let lift = QuasiCanonicalLift::new(QuasiSplitting::level_one_chart(&f, 2).unwrap()).unwrap();
            assert!(lift.verify_vanishing().unwrap());
            let theirs = lifted_equation(&f, &build_splitting(&f).unwrap()).unwrap().dehomogenize(2);
            let chart = ChartRing::auto(&theirs).unwrap();
            assert!(chart.is_zero(&lift.lifted_relation().unwrap()), "({a},{b})");
        }
    }
}

#[test]
fn height_is_one_or_two_by_point_count() {
    for p in [5u64, 7] {
        for a in 0..p {
            for b in 0..p {
                if !smooth(a, b, p) {
                    assert!(qf_height_elliptic(a, b, p).is_err());
                    continue;
                }
                let r = qf_height_elliptic(a, b, p).unwrap();
                let supersingular = naive_ap(a, b, p) % p as i64 == 0;
                assert_eq!(r.height, if supersingular { 2 } else { 1 }, "({a},{b}) p={p}");
                assert_eq!(r.certificate.is_some(), supersingular);
            }
        }
    }
}
