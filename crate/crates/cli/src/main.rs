//! `wittlift`: JSON front end. Output keys are sorted and carry no
//! timestamps, so identical inputs give identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};
use wittlift::canlift::{legendre_modular_frobenius, lifted_equation, weierstrass_canonical_lift};
use wittlift::crysfrob::{
    enumerate_f1_lifts_with_slack, f1_preserved, frobenius_matrix_with_slack, point_count_ap, twist_orbit,
    DEFAULT_SLACK,
};
use wittlift::exactring::{is_prime, parse_poly, Modulus};
use wittlift::frobord::{canonical_coordinates, FrobeniusLift};
use wittlift::fsplit::{build_splitting, fedder_fsplit_test, hasse_scalar, weierstrass_cubic};
use wittlift::qfsplit::qf_height_elliptic;
use wittlift::suite::{run_suite, SuiteConfig};
use wittlift::{Error, Result};

#[derive(Parser)]
#[command(name = "wittlift", version, about = "Canonical liftings mod p^2, crystalline Frobenius and canonical coordinates")]
struct Cli {
    /// Extra p-adic precision for the crystalline Frobenius [default: 2]
    #[arg(long, global = true, env = "WITTLIFT_SLACK", value_parser = clap::value_parser!(u32).range(1..))]
    slack: Option<u32>,
    /// Write the JSON report to a file instead of stdout
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hasse invariant of a Weierstrass curve or a plane cubic
    Hasse(CurveOrPoly),
    /// Fedder's test for a Calabi-Yau hypersurface
    Fsplit(CurveOrPoly),
    /// Canonical lift mod p^2
    Canlift(CanliftArgs),
    /// Crystalline Frobenius matrix on (dx/y, x dx/y)
    Frobmat(FrobmatArgs),
    /// All F^1-preserving lifts of a curve against the canonical twist orbit
    UniqTest(CurveArgs),
    /// Fixed forms and multiplicative coordinates of a Frobenius lift
    Coords(CoordsArgs),
    /// Quasi-F-split height of an elliptic curve
    Qfsplit(CurveArgs),
    /// Acceptance battery
    Suite(SuiteArgs),
}

#[derive(Args)]
struct CurveArgs {
    /// Weierstrass coefficients of y^2 = x^3 + ax + b
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    curve: (u64, u64),
    #[arg(short, value_name = "PRIME", value_parser = parse_prime)]
    p: u64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["curve", "poly"])))]
struct CurveOrPoly {
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    curve: Option<(u64, u64)>,
    /// Homogeneous form of degree n in n variables
    #[arg(long, value_name = "SRC")]
    poly: Option<String>,
    #[arg(short, value_name = "PRIME", value_parser = parse_prime)]
    p: u64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["curve", "poly", "legendre"])))]
struct CanliftArgs {
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    curve: Option<(u64, u64)>,
    #[arg(long, value_name = "SRC")]
    poly: Option<String>,
    /// Frobenius lifting on the Legendre λ-line
    #[arg(long)]
    legendre: bool,
    #[arg(short, value_name = "PRIME", value_parser = parse_prime)]
    p: u64,
    /// Number of expansion coefficients of g [default: p^2]
    #[arg(short = 'D', value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    degree: Option<u32>,
}

#[derive(Args)]
struct FrobmatArgs {
    #[arg(long, value_name = "A,B", value_parser = parse_pair)]
    curve: (u64, u64),
    #[arg(short, value_name = "PRIME", value_parser = parse_prime)]
    p: u64,
    /// Lift (ã, b~) mod p^2 [default: the canonical lift]
    #[arg(long, value_name = "AT,BT", value_parser = parse_pair)]
    lift: Option<(u64, u64)>,
}

#[derive(Args)]
struct CoordsArgs {
    /// Images f_1; …; f_r in t, u, v with F(t_i) = t_i^p + p f_i; `p` stands for the prime
    #[arg(long, value_name = "SRC")]
    lift: String,
    #[arg(short, value_name = "PRIME", value_parser = parse_prime)]
    p: u64,
    /// Truncation degree
    #[arg(short = 'D', value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    degree: u32,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    seed: u64,
    /// Every ordinary curve over F_7 instead of a third
    #[arg(long)]
    full_f7: bool,
    /// Comma-separated criteria to run
    #[arg(long, value_name = "IDS", value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..=10))]
    only: Option<Vec<u32>>,
}

fn parse_pair(s: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or("expected two integers separated by a comma")?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_prime(s: &str) -> std::result::Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if p == 2 || !is_prime(p) {
        return Err(format!("{p} is not an odd prime"));
    }
    Ok(p)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn cubic(c: &CurveOrPoly) -> Result<wittlift::exactring::ModPoly> {
    let m = Modulus::prime(c.p)?;
    match (&c.poly, c.curve) {
        (Some(src), _) => parse_poly(src, m),
        (None, Some((a, b))) => Ok(weierstrass_cubic(m, a, b)),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn curve_context(name: &str, c: &CurveOrPoly) -> Value {
    json!({"command": name, "p": c.p, "curve": c.curve.map(|(a, b)| vec![a, b]), "poly": c.poly})
}

/// The JSON report, or an error with its context.
fn run(cli: &Cli) -> std::result::Result<(Value, bool), (Error, Value)> {
    let slack = cli.slack.unwrap_or(DEFAULT_SLACK);
    match &cli.command {
        Command::Hasse(c) => {
            let r = cubic(c).and_then(|f| hasse_scalar(&f));
            let h = r.map_err(|e| (e, curve_context("hasse", c)))?;
            Ok((json!({"hasse_scalar": h, "ordinary": h != 0}), true))
        }
        Command::Fsplit(c) => {
            let r = cubic(c).and_then(|f| fedder_fsplit_test(&f));
            Ok((to_value(&r.map_err(|e| (e, curve_context("fsplit", c)))?), true))
        }
        Command::Canlift(c) => {
            let ctx = || json!({"command": "canlift", "p": c.p, "curve": c.curve.map(|(a, b)| vec![a, b]), "poly": c.poly, "legendre": c.legendre});
            let r = (|| -> Result<Value> {
                if c.legendre {
                    let d = c.degree.unwrap_or((c.p * c.p) as u32);
                    return Ok(to_value(&legendre_modular_frobenius(c.p, d)?));
                }
                if let Some((a, b)) = c.curve {
                    return Ok(to_value(&weierstrass_canonical_lift(a, b, c.p)?));
                }
                let f = parse_poly(c.poly.as_deref().expect("clap requires one input"), Modulus::prime(c.p)?)?;
                let ft = lifted_equation(&f, &build_splitting(&f)?)?;
                Ok(json!({
                    "p": c.p,
                    "relation": f.to_string(),
                    "lifted_equation": to_value(&ft.to_json()),
                    "lifted_equation_text": ft.to_string(),
                }))
            })();
            Ok((r.map_err(|e| (e, ctx()))?, true))
        }
        Command::Frobmat(c) => {
            let (a, b) = c.curve;
            let ctx = || json!({"command": "frobmat", "p": c.p, "curve": [a, b], "lift": c.lift.map(|(x, y)| vec![x, y]), "slack": slack});
            let r = (|| -> Result<Value> {
                let p = c.p;
                let (at, bt, canonical) = match c.lift {
                    Some((at, bt)) => {
                        if at % p != a % p || bt % p != b % p {
                            return Err(Error::Inconsistent(format!("({at},{bt}) does not reduce to ({a},{b}) mod {p}")));
                        }
                        (at % (p * p), bt % (p * p), false)
                    }
                    None => {
                        let l = weierstrass_canonical_lift(a, b, p)?;
                        (l.a_tilde, l.b_tilde, true)
                    }
                };
                let m = frobenius_matrix_with_slack(at, bt, p, slack)?;
                Ok(json!({
                    "p": p,
                    "a_tilde": at,
                    "b_tilde": bt,
                    "canonical_lift": canonical,
                    "entries": m.entries,
                    "trace": m.trace(),
                    "det": m.det(),
                    "a_p": point_count_ap(a, b, p)?,
                    "f1_preserved": f1_preserved(&m),
                    "slack": slack,
                }))
            })();
            Ok((r.map_err(|e| (e, ctx()))?, true))
        }
        Command::UniqTest(c) => {
            let (a, b) = c.curve;
            let ctx = || json!({"command": "uniq-test", "p": c.p, "curve": [a, b], "slack": slack});
            let r = (|| -> Result<Value> {
                let l = weierstrass_canonical_lift(a, b, c.p)?;
                let f1 = enumerate_f1_lifts_with_slack(a, b, c.p, slack)?;
                let orbit = twist_orbit(c.p, l.a_tilde, l.b_tilde);
                Ok(json!({
                    "p": c.p,
                    "a": l.a,
                    "b": l.b,
                    "canonical": [l.a_tilde, l.b_tilde],
                    "f1_lifts": f1,
                    "twist_orbit": orbit,
                    "unique_orbit": f1 == orbit,
                    "contains_canonical": f1.contains(&(l.a_tilde, l.b_tilde)),
                    "slack": slack,
                }))
            })();
            Ok((r.map_err(|e| (e, ctx()))?, true))
        }
        Command::Coords(c) => {
            let ctx = || json!({"command": "coords", "p": c.p, "lift": c.lift, "degree": c.degree});
            let r = FrobeniusLift::parse(&c.lift, c.p, c.degree).and_then(|l| canonical_coordinates(&l));
            Ok((to_value(&r.map_err(|e| (e, ctx()))?), true))
        }
        Command::Qfsplit(c) => {
            let (a, b) = c.curve;
            let r = qf_height_elliptic(a, b, c.p);
            let ctx = || json!({"command": "qfsplit", "p": c.p, "curve": [a, b]});
            Ok((to_value(&r.map_err(|e| (e, ctx()))?), true))
        }
        Command::Suite(s) => {
            let cfg = SuiteConfig {
                seed: s.seed,
                slack,
                full_f7: s.full_f7,
                only: s.only.clone(),
            };
            let report = run_suite(&cfg);
            Ok((to_value(&report), report.passed))
        }
    }
}

fn emit(cli: &Cli, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let (value, ok) = match run(&cli) {
        Ok(r) => r,
        Err((e, context)) => (
            json!({"error": {"code": e.code(), "message": e.to_string(), "context": context}}),
            false,
        ),
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("wittlift: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
