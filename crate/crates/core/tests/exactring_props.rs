mod common;

use common::{poly, PRIMES};
use proptest::prelude::*;
use wittlift::exactring::{lift_div_p, parse_poly_in, ChartRing, IntPoly, Modulus, ModPoly};

const XY: &[&str] = &["x", "y"];

fn ring_axioms(a: &ModPoly, b: &ModPoly, c: &ModPoly) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
    prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    prop_assert_eq!(a.sub(a), a.zero_like());
    prop_assert_eq!(a.mul(&a.constant_like(1)), a.clone());
    Ok(())
}

fn triples(p: u64, e: u32) -> impl Strategy<Value = (ModPoly, ModPoly, ModPoly)> {
    let m = Modulus::new(p, e).unwrap();
    (poly(m, XY, 3, 5), poly(m, XY, 3, 5), poly(m, XY, 3, 5))
}

macro_rules! axioms_for {
    ($name:ident, $p:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn $name((a, b, c) in triples($p, 1), (d, e, f) in triples($p, 2)) {
                ring_axioms(&a, &b, &c)?;
                ring_axioms(&d, &e, &f)?;
            }
        }
    };
}

axioms_for!(ring_axioms_p3, 3);
axioms_for!(ring_axioms_p5, 5);
axioms_for!(ring_axioms_p7, 7);
axioms_for!(ring_axioms_p13, 13);

fn weierstrass_chart(p: u64) -> ChartRing {
    let m = Modulus::prime(p).unwrap();
    ChartRing::new(&parse_poly_in("y^2 - x^3 - 2*x - 3", m, XY).unwrap(), 1).unwrap()
}

/// A prime from `primes` together with two polynomials over `Z/p^e`.
fn pairs(primes: Vec<u64>, e: u32, max_deg: u32, max_terms: usize) -> impl Strategy<Value = (u64, ModPoly, ModPoly)> {
    prop::sample::select(primes).prop_flat_map(move |p| {
        let m = Modulus::new(p, e).unwrap();
        (Just(p), poly(m, XY, max_deg, max_terms), poly(m, XY, max_deg, max_terms))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_form_respects_products((p, a, b) in pairs(PRIMES.to_vec(), 1, 4, 6)) {
        let chart = weierstrass_chart(p);
        let direct = chart.normal_form(&a.mul(&b));
        let reduced = chart.normal_form(&chart.normal_form(&a).mul(&chart.normal_form(&b)));
        prop_assert_eq!(&direct, &reduced);
        prop_assert!(direct.degree_in(1).unwrap_or(0) < 2);
        prop_assert!(chart.is_zero(&chart.relation().mul(&a)));
    }

    #[test]
    fn display_parses_back((p, g, h) in pairs(PRIMES.to_vec(), 2, 5, 8)) {
        let m = Modulus::new(p, 2).unwrap();
        prop_assert_eq!(parse_poly_in(&g.to_string(), m, XY).unwrap(), g.clone());
        prop_assert_eq!(ModPoly::from_json(&g.to_json()).unwrap(), g);
        let h = h.to_modulus(m.with_exponent(1));
        prop_assert_eq!(parse_poly_in(&h.to_string(), m.with_exponent(1), XY).unwrap(), h);
    }

    #[test]
    fn lift_div_p_inverts_multiplication_by_p((p, g, _h) in pairs(PRIMES.to_vec(), 1, 4, 6), k in -3i128..3) {
        let m = Modulus::prime(p).unwrap();
        let mut q = IntPoly::new(XY.iter().map(|s| s.to_string()).collect());
        for (e, &c) in g.terms() {
            // any integer representative of the coefficient works
            q.add_term(e.clone(), (c as i128 + k * p as i128) * p as i128);
        }
        prop_assert_eq!(lift_div_p(&q, m).unwrap(), g.clone());
        prop_assert_eq!(g.times_p_lifted().div_p().unwrap(), g);
    }

    #[test]
    fn frobenius_power_is_a_ring_map_mod_p((_p, a, b) in pairs(vec![3, 5, 7], 1, 2, 4)) {
        prop_assert_eq!(a.add(&b).frobenius_power(), a.frobenius_power().add(&b.frobenius_power()));
        prop_assert_eq!(a.mul(&b).frobenius_power(), a.frobenius_power().mul(&b.frobenius_power()));
    }
}

#[test]
fn frobenius_power_is_not_additive_mod_p2() {
    let m = Modulus::new(3, 2).unwrap();
    let x = parse_poly_in("x", m, XY).unwrap();
    let y = parse_poly_in("y", m, XY).unwrap();
    assert_ne!(x.add(&y).frobenius_power(), x.frobenius_power().add(&y.frobenius_power()));
}
