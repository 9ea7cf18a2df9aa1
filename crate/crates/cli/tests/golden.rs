mod common;

use std::collections::HashSet;

use common::{check_case, numbers, run_case, CASES};

#[test]
fn text_output_matches_golden_files() {
    let failures: Vec<String> = CASES.iter().filter_map(|c| check_case(c, false).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn json_output_matches_golden_files() {
    let failures: Vec<String> = CASES.iter().filter_map(|c| check_case(c, true).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn json_contains_every_number_of_the_text_output() {
    for c in CASES.iter().filter(|c| c.exit_code != 1) {
        // Only the value part of each `key: value` line; keys carry array indices.
        let text: String = run_case(c.args, false)
            .stdout
            .lines()
            .map(|l| l.split_once(": ").map_or("", |(_, v)| v))
            .collect::<Vec<_>>()
            .join("\n");
        let json = run_case(c.args, true).stdout;
        let available: HashSet<String> = numbers(&json).into_iter().collect();
        for n in numbers(&text) {
            assert!(available.contains(&n), "{}: {n} missing from JSON", c.name);
        }
    }
}

#[test]
fn json_documents_have_the_stable_shape() {
    for c in CASES.iter().filter(|c| c.exit_code != 1) {
        let out = run_case(c.args, true);
        let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
        let expected: &[&str] = if c.args.contains(&"verify") {
            &["command", "status", "payload", "diagnostics", "seed"]
        } else {
            &["command", "status", "payload", "diagnostics"]
        };
        assert_eq!(keys, expected, "{}", c.name);
        let status = doc["status"].as_str().unwrap();
        let expected_status = match c.exit_code {
            0 => "ok",
            3 => "fail",
            _ => "error",
        };
        assert_eq!(status, expected_status, "{}", c.name);
    }
}

#[test]
fn binary_honours_the_exit_code_contract() {
    let bin = env!("CARGO_BIN_EXE_adcalc");
    for (args, code) in [
        (&["derive", "x^2", "--domain", "0,1", "--at", "0.5"][..], 0),
        (&["--help"][..], 0),
        (&["derive"][..], 1),
        (&["derive", "relu(x)", "--domain", "-1,1"][..], 2),
        (&["integrate", "x +", "--from", "0", "--to", "1"][..], 2),
        (&["--tol", "1e-20", "verify", "--suite", "symmetry"][..], 3),
    ] {
        let status = std::process::Command::new(bin).args(args).output().unwrap();
        assert_eq!(status.status.code(), Some(code), "{args:?}");
    }
}
