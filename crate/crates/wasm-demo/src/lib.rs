//! Browser bindings. Every export returns a JSON string, either a report or
//! `{"error": {"code", "message"}}`, so the page needs no error plumbing.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use wittlift::canlift::weierstrass_canonical_lift;
use wittlift::crysfrob::{beta_scalar, f1_preserved, frobenius_matrix, point_count_ap, twist_orbit};
use wittlift::fsplit::hasse_weierstrass;
use wittlift::qfsplit::qf_height_elliptic;
use wittlift::{Error, Result};

fn respond(r: Result<Value>) -> String {
    let v = r.unwrap_or_else(|e: Error| json!({"error": {"code": e.code(), "message": e.to_string()}}));
    serde_json::to_string(&v).expect("JSON values serialize")
}

fn odd_prime(p: u32) -> Result<u64> {
    let p = u64::from(p);
    if p < 5 || !wittlift::exactring::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not a prime ≥ 5")));
    }
    Ok(p)
}

/// Hasse invariant and trace of Frobenius of `y^2 = x^3 + ax + b` over `F_p`.
#[wasm_bindgen]
pub fn hasse(a: u32, b: u32, p: u32) -> String {
    respond((|| {
        let p = odd_prime(p)?;
        let (a, b) = (u64::from(a) % p, u64::from(b) % p);
        let ap = point_count_ap(a, b, p)?;
        let h = hasse_weierstrass(a, b, p)?;
        Ok(json!({"p": p, "a": a, "b": b, "hasse": h, "a_p": ap, "ordinary": h != 0}))
    })())
}

/// Canonical lift mod `p^2`, its crystalline Frobenius and twist orbit.
#[wasm_bindgen]
pub fn canonical_lift(a: u32, b: u32, p: u32) -> String {
    respond((|| {
        let p = odd_prime(p)?;
        let l = weierstrass_canonical_lift(u64::from(a), u64::from(b), p)?;
        let m = frobenius_matrix(l.a_tilde, l.b_tilde, p)?;
        Ok(json!({
            "p": p,
            "a": l.a,
            "b": l.b,
            "a_tilde": l.a_tilde,
            "b_tilde": l.b_tilde,
            "frobenius": m.entries,
            "trace": m.trace(),
            "det": m.det(),
            "a_p": point_count_ap(l.a, l.b, p)?,
            "f1_preserved": f1_preserved(&m),
            "beta": beta_scalar(&m)?,
            "twist_orbit": twist_orbit(p, l.a_tilde, l.b_tilde),
        }))
    })())
}

/// Quasi-F-split height, with the level-2 certificate on supersingular curves.
#[wasm_bindgen]
pub fn qf_height(a: u32, b: u32, p: u32) -> String {
    respond((|| {
        let p = odd_prime(p)?;
        let r = qf_height_elliptic(u64::from(a), u64::from(b), p)?;
        let c = r.certificate.as_ref();
        Ok(json!({
            "p": r.p,
            "a": r.a,
            "b": r.b,
            "height": r.height,
            "hasse": r.hasse_scalar,
            "lambda": c.map(|c| c.lambda),
            "mu": c.map(|c| c.mu),
            "g1_terms": c.map(|c| c.g1.terms.len()),
        }))
    })())
}
