use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lounesto").chain(args.iter().copied());
    let code = lounesto::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn classify_reports_label_and_config() {
    let v = json(&["classify", "--spinor", "0,0,0,0,0,0,1,0", "--dual", "P"]);
    assert_eq!(v["result"]["label"], "1.6");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["seed"], 42);
}

#[test]
fn flags_override_config_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "seed = 7\nmass = 2.5\n# comment\ntrials = 11").unwrap();
    let path = f.path().to_str().unwrap();
    let v = json(&["--config", path, "--seed", "9", "classify", "--spinor", "1,0,0,0,0,0,0,0"]);
    assert_eq!(v["config"]["seed"], 9);
    assert_eq!(v["config"]["mass"], 2.5);
    assert_eq!(v["config"]["trials"], 11);
}

#[test]
fn config_file_errors_exit_one() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "colour = blue").unwrap();
    let (code, _, err) = run(&["--config", f.path().to_str().unwrap(), "tables"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown key"));
    let (code, _, _) = run(&["--config", "/nonexistent/lounesto.conf", "tables"]);
    assert_eq!(code, 1);
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(run(&["classify", "--spinor", "1,2,3"]).0, 1);
    assert_eq!(run(&["--momentum", "1,1,0,0", "tables"]).0, 1);
    assert_eq!(run(&["--mass", "-1", "tables"]).0, 1);
    assert_eq!(run(&["--format", "yaml", "tables"]).0, 1);
    assert_eq!(run(&["no-such-command"]).0, 1);
    assert_eq!(run(&["classify", "--spinor", "1,0,0,0,0,0,0,0", "--dual", "g9"]).0, 1);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("table-v"));
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn csv_and_markdown_carry_a_header_line() {
    let (code, out, _) = run(&["--format", "csv", "tables"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# lounesto "));
    assert!(out.contains("seed=42"));
    assert!(out.lines().any(|l| l.starts_with("1.6,")));
    let (code, out, _) = run(&["--format", "markdown", "classify", "--spinor", "1,0,0,0,0,0,0,0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<!-- lounesto "));
    assert!(out.contains("| class | 6 |"));
}

#[test]
fn operator_table_verifies() {
    let (code, _, _) = run(&["tables", "--verify"]);
    assert_eq!(code, 0);
}

#[test]
fn metric_dimensions() {
    assert_eq!(json(&["derive-eta"])["result"]["dimension"], 2);
    assert_eq!(json(&["derive-eta", "--parity"])["result"]["dimension"], 1);
    assert_eq!(json(&["derive-eta", "--hermitian"])["result"]["dimension"], 2);
}

#[test]
fn spin_sum_accepts_four_momentum() {
    let e = (1.0f64 + 0.25).sqrt().to_string();
    let m = format!("{e},0.5,0,0");
    let v = json(&["--momentum", &m, "spin-sum", "--family", "regular", "--dual", "P"]);
    assert_eq!(v["config"]["momentum"][0], 0.5);
}

#[test]
fn binary_exit_code_for_mismatched_table() {
    let out = Command::new(env!("CARGO_BIN_EXE_lounesto")).args(["table-v", "--verify", "--format", "csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification failed"));
    let out = Command::new(env!("CARGO_BIN_EXE_lounesto")).args(["tables", "--verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "5", "census", "--dual", "CT"];
    assert_eq!(run(&args).1, run(&args).1);
}
