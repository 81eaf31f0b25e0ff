//! Runs the `equinorm` binary against the bundled problem files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use equinorm::report::parse_matrix_csv;
use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equinorm")).args(args).output().expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fixedpoint_sup_norm() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("sup-norm.json");
    let out = run(&["fixedpoint", "--input", input.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&dir.path().join("fixedpoint.json"));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["config"]["N"], 8);
    assert!(report["run"]["state"]["eps"].as_array().unwrap().iter().all(|e| e.as_f64() == Some(0.0)));
    let (labels, d) = parse_matrix_csv(&std::fs::read_to_string(dir.path().join("distances.csv")).unwrap()).unwrap();
    assert_eq!(labels.len(), 8);
    for (i, row) in d.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            assert_eq!(v, if i == j { 0.0 } else { 1.0 });
        }
    }
}

#[test]
fn fixedpoint_mixed_norm() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("mixed-norm.json");
    let out = run(&["fixedpoint", "--input", input.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&dir.path().join("fixedpoint.json"));
    assert!(report["max_distance_deviation"].as_f64().unwrap() < 1e-8);
    assert!(!dir.path().join("distances.csv").exists());
}

#[test]
fn fixedpoint_iteration_cap_is_a_math_failure() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("mixed-norm.json");
    let out = run(&["fixedpoint", "--input", input.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(), "--max-iter", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"norm": {"variant": "Lq", "p": 2}, "N": 4}"#).unwrap();
    let out = run(&["fixedpoint", "--input", bad.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown variant"));
}

#[test]
fn renorm_euclidean_basis() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("basis-l2.json");
    let out = run(&["renorm", "--input", input.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (labels, d) = parse_matrix_csv(&std::fs::read_to_string(dir.path().join("distances.csv")).unwrap()).unwrap();
    assert_eq!(labels, vec!["e1", "e2"]);
    assert!((d[0][1] - 1.0).abs() < 1e-6);
    let svg = std::fs::read_to_string(dir.path().join("renorm.svg")).unwrap();
    assert!(svg.contains("original-ball") && svg.contains("renormed-ball"));
    assert!(svg.contains("<title>e1</title>") && svg.contains("<title>e2</title>"));
    let cert = json(&dir.path().join("certificate.json"));
    assert_eq!(cert["d_label"], "finite lower bound");
    assert_eq!(cert["outcome"]["outcome"], "certified");
    // the embedded norm round-trips through the norm schema
    let renorm = json(&dir.path().join("renorm.json"));
    let spec: equinorm::norms::NormSpec = serde_json::from_value(renorm["result"]["new_norm"].clone()).unwrap();
    assert_eq!(spec.variant_name(), "HullGauge");
}

#[test]
fn renorm_square_audit() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("square.json");
    let out = run(&["renorm", "--input", input.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap(), "--n-dirs", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let audit = json(&dir.path().join("audit.json"));
    assert_eq!(audit["distortion_bound"], 1.0);
    assert_eq!(audit["audit"]["n_dirs"], 200);
    assert!(audit["audit"]["max_ratio"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert!(audit["audit"]["min_ratio"].as_f64().unwrap() >= 0.5 - 1e-9);
}

#[test]
fn renorm_collinear_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = problem("collinear.json");
    let out = run(&["renorm", "--input", input.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let cert = json(&dir.path().join("certificate.json"));
    assert_eq!(cert["outcome"]["outcome"], "not_antipodal");
    assert_eq!((cert["outcome"]["i"].as_u64(), cert["outcome"]["j"].as_u64()), (Some(0), Some(1)));
    assert!(!dir.path().join("renorm.json").exists());
}

#[test]
fn suite_filter_and_unknown_names() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["suite", "--only", "danzer-grunbaum", "--out-dir", d]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "PASS danzer-grunbaum");
    let report = json(&dir.path().join("suite.json"));
    assert_eq!(report["criteria"].as_array().unwrap().len(), 1);
    assert!(dir.path().join("criteria/danzer-grunbaum.json").exists());

    let out = run(&["suite", "--only", "nonsense", "--out-dir", d]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in equinorm::suite::CRITERIA {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["renorm"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_configs_give_identical_reports() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let input = problem("square.json");
    for d in [&a, &b] {
        run(&["renorm", "--input", input.to_str().unwrap(), "--out-dir", d.path().to_str().unwrap(), "--n-dirs", "50", "--seed", "4"]);
    }
    for f in ["certificate.json", "renorm.json", "audit.json", "distances.csv", "renorm.svg"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}
