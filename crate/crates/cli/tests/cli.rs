use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert-norms"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    assert_eq!(run(&["norm", "--from", "hardy-inf", "--to", "bloch"]).status.code(), Some(0));
    assert_eq!(run(&["norm", "--from", "bloch", "--to", "hardy-inf"]).status.code(), Some(2));
    assert_eq!(
        run(&["norm", "--from", "log-korenblum", "--to", "korenblum", "--alpha", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["eval", "--function", "const", "--z", "1.2"]).status.code(), Some(2));
    assert_eq!(
        run(&["norm", "--from", "bloch-alpha", "--to", "bloch-alpha", "--alpha", "2.5"]).status.code(),
        Some(3)
    );
}

#[test]
fn json_and_csv_agree() {
    let args = ["norm", "--from", "log-korenblum", "--to", "korenblum", "--alpha", "0.4"];
    let json = run(&[&args[..], &["--format", "json"]].concat());
    let csv = run(&[&args[..], &["--format", "csv"]].concat());
    assert!(json.status.success() && csv.status.success());
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    let row = &v["rows"][0];
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (h, c) in header.iter().zip(&cells) {
        if let (Some(x), Ok(y)) = (row[*h].as_f64(), c.parse::<f64>()) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{h}: {x} vs {y}");
        }
    }
}

#[test]
fn verify_is_deterministic_under_a_seed() {
    let args = ["verify", "--suite", "representations", "--seed", "7", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eval_matches_closed_form_for_constant() {
    let out = run(&["eval", "--function", "const", "--z", "0.5", "--form", "integral", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let re = v["rows"][0]["re"].as_f64().unwrap();
    let expected = 2.0f64.ln() / 0.5;
    assert!((re - expected).abs() <= 1e-12, "{re} vs {expected}");
}
