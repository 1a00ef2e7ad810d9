//! Golden-file tests for every subcommand. `UPDATE_GOLDEN=1 cargo test -p
//! wittlift-cli --test golden` rewrites `tests/golden/*.json` from the
//! current binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    env: &'static [(&'static str, &'static str)],
    exit: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32) -> Case {
    Case { name, args, env: &[], exit }
}

const CASES: &[Case] = &[
    case("hasse_curve", &["hasse", "--curve", "1,1", "-p", "5"], 0),
    case("hasse_supersingular", &["hasse", "--curve", "0,1", "-p", "5"], 0),
    case("hasse_fermat_p7", &["hasse", "--poly", "x^3+y^3+z^3", "-p", "7"], 0),
    case("fsplit_fermat_p7", &["fsplit", "--poly", "x^3+y^3+z^3", "-p", "7"], 0),
    case("fsplit_fermat_p5", &["fsplit", "--poly", "x^3+y^3+z^3", "-p", "5"], 0),
    case("fsplit_quartic_p5", &["fsplit", "--poly", "x^4+y^4+z^4+w^4", "-p", "5"], 0),
    case("fsplit_curve", &["fsplit", "--curve", "2,3", "-p", "7"], 0),
    case("fsplit_bad_syntax", &["fsplit", "--poly", "x^3+*y", "-p", "5"], 1),
    case("canlift_curve_p5", &["canlift", "--curve", "1,1", "-p", "5"], 0),
    case("canlift_curve_p7", &["canlift", "--curve", "3,2", "-p", "7"], 0),
    case("canlift_poly", &["canlift", "--poly", "x^3+y^3+z^3", "-p", "7"], 0),
    case("canlift_legendre_p5", &["canlift", "--legendre", "-p", "5"], 0),
    case("canlift_legendre_p7_short", &["canlift", "--legendre", "-p", "7", "-D", "12"], 0),
    case("canlift_supersingular", &["canlift", "--curve", "0,1", "-p", "5"], 1),
    case("canlift_singular", &["canlift", "--curve", "0,0", "-p", "7"], 1),
    case("frobmat_canonical", &["frobmat", "--curve", "1,1", "-p", "5"], 0),
    case("frobmat_other_lift", &["frobmat", "--curve", "1,1", "-p", "5", "--lift", "6,1"], 0),
    case("frobmat_supersingular_lift", &["frobmat", "--curve", "0,1", "-p", "5", "--lift", "5,1"], 0),
    case("frobmat_singular", &["frobmat", "--curve", "0,0", "-p", "5"], 1),
    case("frobmat_inconsistent_lift", &["frobmat", "--curve", "1,1", "-p", "5", "--lift", "2,1"], 1),
    Case {
        name: "frobmat_env_slack",
        args: &["frobmat", "--curve", "1,1", "-p", "5"],
        env: &[("WITTLIFT_SLACK", "4")],
        exit: 0,
    },
    Case {
        name: "frobmat_flag_beats_env",
        args: &["frobmat", "--curve", "1,1", "-p", "5", "--slack", "3"],
        env: &[("WITTLIFT_SLACK", "4")],
        exit: 0,
    },
    case("uniq_test_p5", &["uniq-test", "--curve", "1,1", "-p", "5"], 0),
    case("uniq_test_p7", &["uniq-test", "--curve", "3,2", "-p", "7"], 0),
    case("uniq_test_supersingular", &["uniq-test", "--curve", "0,1", "-p", "5"], 1),
    case("coords_multiplicative_p3", &["coords", "--lift", "t+t^2", "-p", "3", "-D", "8"], 0),
    case("coords_two_variables", &["coords", "--lift", "t+t^2+u*t; u+p*t", "-p", "3", "-D", "5"], 0),
    case("coords_non_ordinary", &["coords", "--lift", "t^2", "-p", "5", "-D", "6"], 0),
    case("coords_bad_syntax", &["coords", "--lift", "t+", "-p", "3", "-D", "4"], 1),
    case("qfsplit_ordinary", &["qfsplit", "--curve", "1,1", "-p", "5"], 0),
    case("qfsplit_supersingular", &["qfsplit", "--curve", "0,1", "-p", "5"], 0),
    case("qfsplit_small_prime", &["qfsplit", "--curve", "0,1", "-p", "3"], 1),
    case("qfsplit_singular", &["qfsplit", "--curve", "0,0", "-p", "7"], 1),
    case("suite_cheap", &["suite", "--only", "2,3,10"], 0),
    case("suite_seeded", &["suite", "--only", "1", "--seed", "7"], 0),
];

/// Usage errors: exit 2, nothing on stdout.
const USAGE: &[&[&str]] = &[
    &[],
    &["hasse", "--curve", "1,1", "-p", "4"],
    &["hasse", "--curve", "1,1", "-p", "2"],
    &["hasse", "-p", "5"],
    &["hasse", "--curve", "1,1", "--poly", "x^3", "-p", "5"],
    &["hasse", "--curve", "1", "-p", "5"],
    &["canlift", "--legendre", "-p", "5", "-D", "0"],
    &["frobmat", "--curve", "1,1", "-p", "5", "--slack", "0"],
    &["coords", "--lift", "t", "-p", "3"],
    &["suite", "--only", "11"],
    &["nonsense"],
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wittlift"));
    cmd.args(args).env_remove("WITTLIFT_SLACK");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name}: output differs from {}", path.display());
}

#[test]
fn subcommands_match_golden_files() {
    for c in CASES {
        let out = run(c.args, c.env);
        assert_eq!(out.status.code(), Some(c.exit), "{}: stderr {}", c.name, String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8(out.stdout).unwrap();
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{}: {e}", c.name));
        if c.exit == 1 && !c.name.starts_with("suite") {
            let err = &v["error"];
            assert!(err["code"].is_string() && err["message"].is_string() && err["context"].is_object(), "{}", c.name);
        }
        check_golden(c.name, &stdout);
    }
}

#[test]
fn every_subcommand_has_a_golden_case() {
    for sub in ["hasse", "fsplit", "canlift", "frobmat", "uniq-test", "coords", "qfsplit", "suite"] {
        assert!(CASES.iter().any(|c| c.args[0] == sub), "{sub}");
    }
}

#[test]
fn usage_errors_exit_with_status_2() {
    for args in USAGE {
        let out = run(args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = run(&["frobmat", "--curve", "1,1", "-p", "5"], &[("WITTLIFT_SLACK", "x")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let path = std::env::temp_dir().join(format!("wittlift-golden-{}.json", std::process::id()));
    let out = run(&["canlift", "--curve", "1,1", "-p", "5", "-o", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    if std::env::var_os("UPDATE_GOLDEN").is_none() {
        let expected = std::fs::read_to_string(golden_dir().join("canlift_curve_p5.json")).unwrap();
        assert_eq!(written, expected);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["qfsplit", "--curve", "0,1", "-p", "7"];
    assert_eq!(run(&args, &[]).stdout, run(&args, &[]).stdout);
}
