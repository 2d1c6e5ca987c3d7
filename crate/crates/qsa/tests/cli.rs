//! Black-box tests of the `qsa` binary: exit codes, output formats,
//! and byte-identical reruns.

use std::process::{Command, Output};

fn qsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsa"))
        .args(args)
        .output()
        .expect("binary runs")
}

const FAST: &[&str] = &["--samples", "50000", "--replicates", "2", "--seed", "11"];

#[test]
fn assign_json_is_deterministic() {
    let args: Vec<&str> = ["assign", "--counts", "0,1,0", "--format", "json"]
        .iter()
        .chain(FAST)
        .copied()
        .collect();
    let a = qsa(&args);
    let b = qsa(&args);
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout, "reruns must be byte-identical");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("valid JSON");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["counts"], serde_json::json!([0, 1, 0]));
    assert_eq!(v["seed"], 11);
    assert_eq!(v["samples"], 50000);
    let d = v["diagonal"].as_array().unwrap();
    let sum: f64 = d.iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-12);
    // Two-space indentation.
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("  \""));
    assert!(text.ends_with('\n'));
}

#[test]
fn assign_csv_format() {
    let args: Vec<&str> = ["assign", "--counts", "1,0,1", "--format", "csv"]
        .iter()
        .chain(FAST)
        .copied()
        .collect();
    let out = qsa(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("field,value,stderr\n"));
    assert!(text.ends_with('\n'));
    assert!(text.lines().any(|l| l.starts_with("x8,")));
    assert!(text.lines().any(|l| l.starts_with("rho22,")));
}

#[test]
fn assign_output_file() {
    let dir = std::env::temp_dir().join("qsa-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let path_str = path.to_str().unwrap();
    let args: Vec<&str> = [
        "assign", "--counts", "0,0,0", "--format", "json", "--output", path_str,
    ]
    .iter()
    .chain(FAST)
    .copied()
    .collect();
    let out = qsa(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // (0,0,0) with the constant prior is exact.
    assert_eq!(v["exact_by_symmetry"], true);
    for x in v["bloch"].as_array().unwrap() {
        assert_eq!(x.as_f64().unwrap(), 0.0);
    }
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn gaussian_prior_flag() {
    let args: Vec<&str> = [
        "assign", "--counts", "0,0,0", "--prior", "gaussian", "--format", "json",
    ]
    .iter()
    .chain(FAST)
    .copied()
    .collect();
    let out = qsa(&args);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prior"], "gaussian");
    // The gaussian prior pulls rho22 well above 1/3 even with no data.
    assert!(v["diagonal"][1].as_f64().unwrap() > 0.5);
}

#[test]
fn usage_errors_exit_2() {
    // Unknown subcommand and malformed flags are parse errors.
    assert_eq!(qsa(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qsa(&["assign"]).status.code(), Some(2));
    assert_eq!(qsa(&["assign", "--counts", "1,2"]).status.code(), Some(2));
    assert_eq!(qsa(&["assign", "--counts", "a,b,c"]).status.code(), Some(2));
    // Sample budget below the floor.
    assert_eq!(qsa(&["assign", "--counts", "0,1,0", "--samples", "10"]).status.code(), Some(2));
    // N = 1 has no convex decomposition to test.
    assert_eq!(qsa(&["conjecture", "--N", "1"]).status.code(), Some(2));
    assert_eq!(qsa(&["conjecture", "--N", "6"]).status.code(), Some(2));
    // Breadth makes no sense for the constant prior.
    let out = qsa(&["assign", "--counts", "0,1,0", "--prior", "constant", "--breadth", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn conjecture_runs() {
    let out = qsa(&[
        "conjecture", "--N", "2", "--samples", "100000", "--replicates", "4", "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["N"], 2);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["all_within_3_sigma"], true);
}

#[test]
fn section_csv() {
    let out = qsa(&["section", "--axes", "3,8", "--resolution", "32", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y"));
    // The (x3, x8) section of the body is the probability simplex; its
    // vertices reach x8 = 1/sqrt(3) at top and -2/sqrt(3) at bottom.
    let ys: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let max = ys.iter().cloned().fold(f64::MIN, f64::max);
    let min = ys.iter().cloned().fold(f64::MAX, f64::min);
    assert!((max - 1.0 / 3f64.sqrt()).abs() < 0.05, "max {max}");
    assert!((min + 2.0 / 3f64.sqrt()).abs() < 0.05, "min {min}");
}

#[test]
fn marginal_grid_json() {
    let out = qsa(&[
        "marginal", "--axes", "3,8", "--grid", "16", "--samples-per-cell", "256",
        "--seed", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["grid"], 16);
    assert_eq!(v["density"].as_array().unwrap().len(), 16);
    assert!(!v["boundary"].as_array().unwrap().is_empty());
}

#[test]
fn validate_suites() {
    let out = qsa(&["validate", "--suite", "basis"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("basis: pass"));
    let out = qsa(&["validate", "--suite", "oracle", "--points", "20000"]);
    assert!(out.status.success());
}

#[test]
fn threads_env_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_qsa"))
        .env("QSA_THREADS", "zero")
        .args(["section", "--axes", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qsa"))
        .env("QSA_THREADS", "1")
        .args(["section", "--axes", "1,2"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
