use std::process::{Command, Output};

use pseudohopf::verify::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudohopf"))
        .args(args)
        .env_remove("REPORT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_examples() {
    for (p, q, want) in [("1", "8", "M(16,R) ⊕ M(16,R)"), ("0", "7", "M(8,R) ⊕ M(8,R)"), ("0", "0", "R")] {
        let o = run(&["classify", "--p", p, "--q", q]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), want);
    }
}

#[test]
fn classify_out_of_range_is_usage_error() {
    let o = run(&["classify", "--p", "7", "--q", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p + q <= 12"));
}

#[test]
fn obstruction_examples() {
    let o = run(&["obstruction", "--s", "7", "--n", "16", "--base", "cayley"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Obstructed") && stdout(&o).contains("we get a contradiction"));

    let o = run(&["obstruction", "--s", "3", "--n", "8", "--base", "quaternionic"]);
    assert_eq!(stdout(&o).trim(), "Admissible");

    let o = run(&["obstruction", "--s", "2", "--n", "4", "--base", "any"]);
    assert!(stdout(&o).contains("Obstructed: Adams"));

    let o = run(&["obstruction", "--s", "6", "--n", "8", "--base", "real-hyperbolic", "--total", "complex"]);
    assert!(stdout(&o).contains("homomorphism is impossible to exist"));
}

#[test]
fn unknown_base_is_usage_error() {
    let o = run(&["obstruction", "--s", "3", "--n", "8", "--base", "octonionic"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn indefinite_theta_pinching_is_unsupported() {
    let o = run(&["verify", "--model", "theta", "--s", "3", "--check", "pinching"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported: indefinite base"), "{}", stderr(&o));
}

#[test]
fn unknown_model_and_check_are_usage_errors() {
    let o = run(&["verify", "--model", "sedenion-hopf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("quaternionic-hopf"));
    let o = run(&["verify", "--model", "complex-hopf", "--check", "lemma9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lemma3b"));
}

#[test]
fn verify_json_passes_and_round_trips() {
    let o = run(&[
        "verify", "--model", "quaternionic-hopf", "--k", "2", "--samples", "2e1", "--seed", "42", "--tol", "1e-8",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let report = VerificationReport::from_json(&text).unwrap();
    assert!(report.pass);
    assert_eq!(report.seed, 42);
    assert!(report.checks.iter().any(|c| c.name == "lemma3b"));
    let again = VerificationReport::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(again, report);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["name", "model", "params", "samples", "max_residual", "tol", "pass", "paper_anchor"] {
        assert!(value["checks"][0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn failing_check_exits_one() {
    // A tolerance far below double precision cannot be met.
    let o = run(&["verify", "--model", "octonionic-hopf", "--check", "lemma3c", "--samples", "5", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn report_dir_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_pseudohopf"))
        .args(["verify", "--check", "classify_table", "--format", "json"])
        .env("REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(VerificationReport::from_json(&written).unwrap().pass);
}

#[test]
fn bad_numbers_are_usage_errors() {
    assert_eq!(run(&["verify", "--all", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--all", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--all", "--samples", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}
