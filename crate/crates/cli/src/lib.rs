//! Command-line front end for `adcalc`.
//!
//! [`run`] does all the work and returns the rendered output and exit code,
//! so the binary is a thin wrapper and tests can drive commands in-process.

use std::ffi::OsString;

use adcalc::{
    check_path, cocycle_residual, derivative, glue, integrate, make_grid, make_path_with,
    run_suite, symmetry_residual, Curve, Error, Interval, Suite, SquareFn, Tolerances,
};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_FAIL: i32 = 3;

/// Points per axis of the grid used for the glue command's diagnostics.
const GLUE_DIAGNOSTIC_POINTS: usize = 21;

#[derive(Debug, Parser)]
#[command(name = "adcalc", version, about = "Calculus on curves via divided-difference kernels")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Residual tolerance for kernel consistency and gluing.
    #[arg(long, global = true, value_name = "TOL")]
    tol: Option<f64>,
    /// Tolerance of the adaptive quadrature.
    #[arg(long = "quad-tol", global = true, value_name = "TOL")]
    quad_tol: Option<f64>,
    /// Oscillation threshold of the numerical path test.
    #[arg(long = "path-tol", global = true, value_name = "TOL")]
    path_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derivative as the diagonal of the kernel.
    Derive {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        domain: (f64, f64),
        /// Single evaluation point; otherwise a uniform grid is reported.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<f64>,
        /// Number of grid points when `--at` is absent.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Integral through the averaging kernel.
    Integrate {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Defaults to the interval spanned by `--from` and `--to`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        domain: Option<(f64, f64)>,
    },
    /// Numerical test of whether the curve is a path.
    CheckPath {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        domain: (f64, f64),
    },
    /// Kernel value at a pair of points.
    Kernel {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        domain: (f64, f64),
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        at: (f64, f64),
    },
    /// Glue the kernels of LEFT on [a, b] and RIGHT on [b, c].
    Glue {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        /// The whole interval a,c.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        domain: (f64, f64),
        #[arg(long, allow_hyphen_values = true)]
        junction: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        at: Option<(f64, f64)>,
    },
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two numbers separated by a comma, got '{s}'"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("'{}' is not a number", t.trim()))
    };
    Ok((num(a)?, num(b)?))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// Rendered result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Command result before rendering.
struct Report {
    status: &'static str,
    payload: Value,
    diagnostics: Value,
    seed: Option<u64>,
}

impl Report {
    fn ok(payload: Value, diagnostics: Value) -> Self {
        Self {
            status: "ok",
            payload,
            diagnostics,
            seed: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    exit_code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let json_mode = cli.json;
    let (report, exit_code, message) = match execute(&cli) {
        Ok(report) => {
            let code = if report.status == "fail" { EXIT_FAIL } else { EXIT_OK };
            (report, code, None)
        }
        Err(e) => {
            let code = match e {
                Error::Usage(_) => EXIT_USAGE,
                _ => EXIT_ERROR,
            };
            let report = Report {
                status: "error",
                payload: json!({ "error": error_json(&e) }),
                diagnostics: json!({}),
                seed: None,
            };
            (report, code, Some(format!("error: {e}\n")))
        }
    };
    let mut doc = Map::new();
    doc.insert("command".into(), json!(echo));
    doc.insert("status".into(), json!(report.status));
    doc.insert("payload".into(), report.payload);
    doc.insert("diagnostics".into(), report.diagnostics);
    if let Some(seed) = report.seed {
        doc.insert("seed".into(), json!(seed));
    }
    let doc = Value::Object(doc);
    let stdout = if json_mode {
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    } else {
        render_text(&doc)
    };
    Outcome {
        exit_code,
        stdout,
        stderr: message.unwrap_or_default(),
    }
}

fn tolerances(cli: &Cli) -> adcalc::Result<Tolerances> {
    let mut t = Tolerances::default();
    if let Some(v) = cli.tol {
        t.residual_tol = v;
    }
    if let Some(v) = cli.quad_tol {
        t.quadrature_tol = v;
    }
    if let Some(v) = cli.path_tol {
        t.path_detect_tol = v;
    }
    t.validate()?;
    Ok(t)
}

fn interval((lo, hi): (f64, f64)) -> adcalc::Result<Interval> {
    Interval::new(lo, hi)
}

/// A single number for scalars, an array otherwise.
fn vector(v: &[f64]) -> Value {
    match v {
        [x] => json!(x),
        _ => json!(v),
    }
}

fn execute(cli: &Cli) -> adcalc::Result<Report> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Derive {
            expr,
            domain,
            at,
            grid,
        } => cmd_derive(expr, interval(*domain)?, *at, *grid, &tol),
        Command::Integrate {
            expr,
            from,
            to,
            domain,
        } => cmd_integrate(expr, *from, *to, *domain, &tol),
        Command::CheckPath { expr, domain } => cmd_check_path(expr, interval(*domain)?, &tol),
        Command::Kernel { expr, domain, at } => cmd_kernel(expr, interval(*domain)?, *at, &tol),
        Command::Glue {
            left,
            right,
            domain,
            junction,
            at,
        } => cmd_glue(left, right, *domain, *junction, *at, &tol),
        Command::Verify { suite, seed } => cmd_verify(*suite, *seed, &tol),
    }
}

fn cmd_derive(
    expr: &str,
    domain: Interval,
    at: Option<f64>,
    grid: Option<usize>,
    tol: &Tolerances,
) -> adcalc::Result<Report> {
    let f = Curve::parse(expr, domain)?;
    let path = make_path_with(&f, tol)?;
    let df = derivative(&path);
    let check = make_grid(domain, tol.grid_default)?;
    let diagnostics = json!({ "consistency_residual": path.consistency_residual(&check)? });
    let payload = match at {
        Some(x) => json!({ "x": x, "derivative": vector(&df.eval(x)?) }),
        None => {
            let g = make_grid(domain, grid.unwrap_or(tol.grid_default))?;
            let values = g
                .points()
                .iter()
                .map(|&x| Ok(json!({ "x": x, "derivative": vector(&df.eval(x)?) })))
                .collect::<adcalc::Result<Vec<_>>>()?;
            json!({ "grid": values })
        }
    };
    Ok(Report::ok(payload, diagnostics))
}

fn cmd_integrate(
    expr: &str,
    from: f64,
    to: f64,
    domain: Option<(f64, f64)>,
    tol: &Tolerances,
) -> adcalc::Result<Report> {
    let diagnostics = json!({ "quadrature_tol": tol.quadrature_tol });
    if domain.is_none() && from == to {
        // Empty range with no declared domain: nothing to integrate, but the
        // integrand must still parse and evaluate at the point.
        let f = Curve::parse(expr, Interval::new(from, from + 1.0)?)?;
        let dim = f.eval(from)?.dim();
        let zero = vec![0.0; dim];
        return Ok(Report::ok(
            json!({ "from": from, "to": to, "value": vector(&zero), "error_estimate": 0.0 }),
            diagnostics,
        ));
    }
    let domain = interval(domain.unwrap_or((from.min(to), from.max(to))))?;
    let f = Curve::parse(expr, domain)?;
    let integral = integrate(&f, from, to, tol)?;
    Ok(Report::ok(
        json!({
            "from": from,
            "to": to,
            "value": vector(&integral.value),
            "error_estimate": integral.error_estimate,
        }),
        diagnostics,
    ))
}

fn cmd_check_path(expr: &str, domain: Interval, tol: &Tolerances) -> adcalc::Result<Report> {
    let f = Curve::parse(expr, domain)?;
    let report = check_path(&f, tol.path_detect_tol)?;
    Ok(Report::ok(
        serde_json::to_value(&report).expect("serializable"),
        json!({ "path_tol": tol.path_detect_tol, "probes": adcalc::adspace::PATH_PROBES }),
    ))
}

fn cmd_kernel(expr: &str, domain: Interval, (x, y): (f64, f64), tol: &Tolerances) -> adcalc::Result<Report> {
    let f = Curve::parse(expr, domain)?;
    let path = make_path_with(&f, tol)?;
    let h = path.kernel().eval(x, y)?;
    let mut diagnostics = Map::new();
    if x != y {
        let (fx, fy) = (f.eval(x)?, f.eval(y)?);
        let naive: Vec<f64> = fx.iter().zip(fy.iter()).map(|(a, b)| (b - a) / (y - x)).collect();
        let gap: Vec<f64> = naive.iter().zip(h.iter()).map(|(q, k)| q - k).collect();
        let residual = fx
            .iter()
            .zip(fy.iter())
            .zip(h.iter())
            .map(|((a, b), k)| (b - a - (y - x) * k).powi(2))
            .sum::<f64>()
            .sqrt();
        diagnostics.insert("naive_quotient".into(), vector(&naive));
        diagnostics.insert("naive_minus_kernel".into(), vector(&gap));
        diagnostics.insert("consistency_residual".into(), json!(residual));
    }
    Ok(Report::ok(
        json!({ "x": x, "y": y, "kernel": vector(&h) }),
        Value::Object(diagnostics),
    ))
}

fn cmd_glue(
    left: &str,
    right: &str,
    (a, c): (f64, f64),
    b: f64,
    at: Option<(f64, f64)>,
    tol: &Tolerances,
) -> adcalc::Result<Report> {
    let whole = Interval::new(a, c)?;
    whole.check(b)?;
    let h = make_path_with(&Curve::parse(left, Interval::new(a, b)?)?, tol)?;
    let k = make_path_with(&Curve::parse(right, Interval::new(b, c)?)?, tol)?;
    let gap = h.kernel().eval(b, b)?.distance(&k.kernel().eval(b, b)?);
    let l = glue(h.kernel(), k.kernel(), tol.residual_tol)?;

    let pts = make_grid(whole, GLUE_DIAGNOSTIC_POINTS)?.points().to_vec();
    let mut triples = Vec::with_capacity(pts.len().pow(3));
    let mut pairs = Vec::with_capacity(pts.len().pow(2));
    for &x in &pts {
        for &y in &pts {
            pairs.push((x, y));
            for &z in &pts {
                triples.push((x, y, z));
            }
        }
    }
    let diagnostics = json!({
        "junction_gap": gap,
        "cocycle_residual": cocycle_residual(&l, &triples)?,
        "symmetry_residual": symmetry_residual(&l, &pairs)?,
        "samples": pts.len(),
    });
    let mut payload = Map::new();
    payload.insert("domain".into(), json!([a, c]));
    payload.insert("junction".into(), json!(b));
    if let Some((x, y)) = at {
        payload.insert("x".into(), json!(x));
        payload.insert("y".into(), json!(y));
        payload.insert("kernel".into(), vector(&l.eval(x, y)?));
    }
    Ok(Report::ok(Value::Object(payload), diagnostics))
}

fn cmd_verify(suite: Suite, seed: u64, tol: &Tolerances) -> adcalc::Result<Report> {
    let reports = run_suite(suite, seed, tol)?;
    let unexpected = reports.iter().filter(|r| !r.as_expected()).count();
    let negative = reports.iter().filter(|r| !r.expected_to_hold).count();
    Ok(Report {
        status: if unexpected == 0 { "ok" } else { "fail" },
        payload: json!({
            "suite": suite.name(),
            "reports": serde_json::to_value(&reports).expect("serializable"),
        }),
        diagnostics: json!({
            "laws": reports.len(),
            "unexpected_outcomes": unexpected,
            "negative_controls": negative,
        }),
        seed: Some(seed),
    })
}

fn error_json(e: &Error) -> Value {
    let (kind, extra) = match e {
        Error::Syntax { offset, .. } => ("syntax", json!({ "offset": offset })),
        Error::UnknownIdentifier { name, offset } => {
            ("unknown_identifier", json!({ "name": name, "offset": offset }))
        }
        Error::Domain { node, at, .. } => ("domain", json!({ "node": node, "at": at })),
        Error::OutOfDomain { x, lo, hi } => ("out_of_domain", json!({ "x": x, "domain": [lo, hi] })),
        Error::NotAPath { witness, .. } => ("not_a_path", json!({ "witness": witness })),
        Error::DimensionMismatch { expected, found } => {
            ("dimension_mismatch", json!({ "expected": expected, "found": found }))
        }
        Error::GlueMismatch { junction, gap } => {
            ("glue_mismatch", json!({ "junction": junction, "gap": gap }))
        }
        Error::NotAdjacent { .. } => ("not_adjacent", json!({})),
        Error::QuadratureBudget {
            estimate,
            error_estimate,
            subintervals,
        } => (
            "quadrature_budget",
            json!({
                "partial_estimate": vector(estimate),
                "error_estimate": error_estimate,
                "subintervals": subintervals,
            }),
        ),
        Error::Usage(_) => ("usage", json!({})),
    };
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(kind));
    obj.insert("message".into(), json!(e.to_string()));
    if let Value::Object(fields) = extra {
        obj.extend(fields);
    }
    Value::Object(obj)
}

/// Inline form of a value: strings bare, everything else as compact JSON.
fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_into(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if key.is_empty() { k.clone() } else { format!("{key}.{k}") };
                render_into(out, &key, child);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, item) in items.iter().enumerate() {
                let line = match item {
                    Value::Object(map) => map
                        .iter()
                        .map(|(k, v)| format!("{k}={}", inline(v)))
                        .collect::<Vec<_>>()
                        .join(" "),
                    other => inline(other),
                };
                out.push_str(&format!("{key}[{i}]: {line}\n"));
            }
        }
        Value::Array(items) if key == "command" => {
            let words: Vec<String> = items.iter().map(inline).collect();
            out.push_str(&format!("{key}: {}\n", words.join(" ")));
        }
        other => out.push_str(&format!("{key}: {}\n", inline(other))),
    }
}

/// Text mode: one `key: value` line per leaf, one line per element of
/// arrays of records. Numbers use the same formatting as the JSON output.
fn render_text(doc: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, "", doc);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("adcalc").chain(args.iter().copied()))
    }

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pair("-1,1"), Ok((-1.0, 1.0)));
        assert_eq!(parse_pair("0, 3.2"), Ok((0.0, 3.2)));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn derive_at_a_point() {
        let out = run_args(&["derive", "x^2", "--domain", "0,1", "--at", "0.5"]);
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.stdout.contains("payload.derivative: 1.0\n"), "{}", out.stdout);
    }

    #[test]
    fn negative_domains_are_accepted() {
        let out = run_args(&["check-path", "relu(x)", "--domain", "-1,1"]);
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
        assert!(out.stdout.contains("payload.is_path: false"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["derive", "x"]).exit_code, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).exit_code, EXIT_USAGE);
        assert_eq!(run_args(&["derive", "x", "--domain", "1,0"]).exit_code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).exit_code, EXIT_OK);
        assert_eq!(run_args(&["--version"]).exit_code, EXIT_OK);
    }

    #[test]
    fn text_rendering_flattens_records() {
        let doc = json!({
            "command": ["a", "b"],
            "payload": { "v": 1.5, "rows": [{ "x": 0.0, "y": [1.0, 2.0] }] },
        });
        assert_eq!(
            render_text(&doc),
            "command: a b\npayload.v: 1.5\npayload.rows[0]: x=0.0 y=[1.0,2.0]\n"
        );
    }
}
