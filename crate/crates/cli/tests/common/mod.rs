//! Golden-file cases shared by the golden and acceptance test targets.

#![allow(dead_code)]

use std::path::PathBuf;

use adcalc_cli::{run, Outcome};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit_code: i32,
}

const fn case(name: &'static str, args: &'static [&'static str], exit_code: i32) -> Case {
    Case { name, args, exit_code }
}

pub const CASES: &[Case] = &[
    case("derive_point", &["derive", "x^2", "--domain", "0,1", "--at", "0.5"], 0),
    case("derive_exp", &["derive", "exp(x)", "--domain", "0,2", "--at", "1"], 0),
    case("derive_grid", &["derive", "[sin(x), x^3]", "--domain", "0,1", "--grid", "5"], 0),
    case("derive_relu", &["derive", "relu(x)", "--domain", "-1,1"], 2),
    case("derive_syntax", &["derive", "x +", "--domain", "0,1"], 2),
    case("derive_log_domain", &["derive", "log(x)", "--domain", "-1,1", "--at", "0.5"], 2),
    case("integrate_affine", &["integrate", "1 + 2*x", "--from", "0", "--to", "1"], 0),
    case("integrate_sin", &["integrate", "sin(x)", "--from", "0", "--to", "3.141592653589793"], 0),
    case("integrate_empty", &["integrate", "x", "--from", "1", "--to", "1"], 0),
    case("integrate_reversed", &["integrate", "exp(x)", "--from", "1", "--to", "-1"], 0),
    case("integrate_budget", &["--quad-tol", "1e-15", "integrate", "sin(1/x)", "--from", "0.0001", "--to", "1"], 2),
    case("check_path_relu", &["check-path", "relu(x)", "--domain", "-1,1"], 0),
    case("check_path_relu_right", &["check-path", "relu(x)", "--domain", "0,1"], 0),
    case("check_path_sin_exp", &["check-path", "sin(x)*exp(x)", "--domain", "0,1"], 0),
    case("kernel_square", &["kernel", "x^2", "--domain", "0,2", "--at", "1,2"], 0),
    case("kernel_sin_diagonal", &["kernel", "sin(x)", "--domain", "0,3.2", "--at", "0,0"], 0),
    case("kernel_exp_near_diagonal", &["kernel", "exp(x)", "--domain", "0,2", "--at", "1,1.000000000001"], 0),
    case("kernel_unknown_name", &["kernel", "tan(x)", "--domain", "0,1", "--at", "0,1"], 2),
    case("glue_square", &["glue", "x^2", "x^2", "--domain", "0,2", "--junction", "1", "--at", "0,2"], 0),
    case("glue_mismatch", &["glue", "0*x", "x", "--domain", "0,2", "--junction", "1"], 2),
    case("verify_cocycle", &["verify", "--suite", "cocycle", "--seed", "7"], 0),
    case("verify_functor", &["verify", "--suite", "functor", "--seed", "7"], 0),
    case("verify_all", &["verify", "--suite", "all", "--seed", "7"], 0),
    case("verify_strict_fails", &["--tol", "1e-20", "verify", "--suite", "symmetry", "--seed", "7"], 3),
    case("usage_missing_domain", &["derive", "x^2"], 1),
    case("usage_bad_grid", &["derive", "x^2", "--domain", "0,1", "--grid", "1"], 1),
];

pub fn run_case(args: &[&str], json: bool) -> Outcome {
    let mut argv = vec!["adcalc"];
    argv.extend_from_slice(args);
    if json {
        argv.push("--json");
    }
    run(argv)
}

fn golden_path(name: &str, json: bool) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.{}", if json { "json" } else { "txt" }))
}

/// Compares a case against its golden file; `UPDATE_GOLDEN=1` rewrites it.
pub fn check_case(c: &Case, json: bool) -> Result<(), String> {
    let out = run_case(c.args, json);
    if out.exit_code != c.exit_code {
        return Err(format!(
            "{}: exit code {} (expected {}); stderr: {}",
            c.name, out.exit_code, c.exit_code, out.stderr
        ));
    }
    let path = golden_path(c.name, json);
    // Usage errors come from the argument parser and go to stderr only.
    let actual = if c.exit_code == 1 { out.stderr } else { out.stdout };
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|e| format!("{}: cannot read {}: {e}", c.name, path.display()))?;
    if actual != expected {
        return Err(format!(
            "{}: output differs from {}\n--- expected\n{expected}\n--- actual\n{actual}",
            c.name,
            path.display()
        ));
    }
    Ok(())
}

/// Tokens of `text` that parse as numbers.
pub fn numbers(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || "=,:[]{}()\"`".contains(c))
        .filter(|t| !t.is_empty() && t.parse::<f64>().is_ok())
        .map(str::to_owned)
        .collect()
}
