use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cqsum_cli::output::to_json;
use proptest::prelude::*;
use serde_json::Value;

fn cqsum(args: &[&str], config: Option<&Path>, out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cqsum"));
    cmd.args(args).arg("--out").arg(out).arg("--no-timestamp");
    if let Some(config) = config {
        cmd.arg("--config").arg(config);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const COVERAGE: &str = r#"{"schema": "cqsum-config/1", "command": "verify-coverage", "seed": 1,
    "params": {"p_v": [0.5, 0.5], "delta": 0.25, "trials": 50, "points": [{"n": 8, "k": 2}]}}"#;

#[test]
fn malformed_json_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "bad.json", r#"{"schema": "cqsum-config/1", "params": "#);
    let out = cqsum(&["km"], Some(&config), &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    let config = write(dir.path(), "typo.json", r#"{"schema": "cqsum-config/1", "parms": {}}"#);
    assert_eq!(cqsum(&["km"], Some(&config), &dir.path().join("out")).status.code(), Some(2));
}

#[test]
fn failed_preconditions_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let invalid_pmf = COVERAGE.replace("[0.5, 0.5]", "[0.5, 0.6]");
    let config = write(dir.path(), "pmf.json", &invalid_pmf);
    let out = cqsum(&["verify-coverage"], Some(&config), &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pmf"));
    let config = write(dir.path(), "coverage.json", COVERAGE);
    let out = cqsum(&["km"], Some(&config), &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(3), "command mismatch");
    let missing = dir.path().join("missing.json");
    assert_eq!(cqsum(&["km"], Some(&missing), &dir.path().join("out")).status.code(), Some(3));
}

#[test]
fn exceeded_budgets_exit_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "coverage.json", COVERAGE);
    let out = cqsum(&["verify-coverage", "--budget-enum", "2"], Some(&config), &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn unwritable_output_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "coverage.json", COVERAGE);
    let blocker = write(dir.path(), "file", "");
    let out = cqsum(&["verify-coverage"], Some(&config), &blocker);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_flag_overrides_the_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "coverage.json", COVERAGE);
    cqsum(&["verify-coverage", "--seed", "99"], Some(&config), &dir.path().join("a"));
    let report: Value = serde_json::from_slice(&fs::read(dir.path().join("a/report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 99);
    assert_eq!(report["result"][0]["seed"], 99);
    assert!(report.get("timestamp_unix").is_none());
}

#[test]
fn timestamps_appear_unless_suppressed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "coverage.json", COVERAGE);
    let status = Command::new(env!("CARGO_BIN_EXE_cqsum"))
        .args(["verify-coverage", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("t"))
        .status()
        .unwrap();
    assert!(status.success());
    let report: Value = serde_json::from_slice(&fs::read(dir.path().join("t/report.json")).unwrap()).unwrap();
    assert!(report["timestamp_unix"].is_u64());
    assert!(report["result"][0]["wall_time_s"].is_f64());
}

#[test]
fn example1_search_reproduces_the_witness_without_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = cqsum(&["example1", "--search"], None, dir.path());
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,q_noise,overlap,theta_star,structured_margin,unstructured_margin"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[4] > 0.0 && row[5] < 0.0);
}

#[test]
fn channel_files_are_resolved_next_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "channel.json",
        r#"{"kind": "example1", "q_noise": 0.1, "sigma0": {"diagonal": [1, 0]}, "sigma1": {"overlap": 0.3}}"#,
    );
    let config = write(
        dir.path(),
        "opt.json",
        r#"{"schema": "cqsum-config/1", "channel": {"file": "channel.json"},
            "params": {"q": 2, "grid": {"resolution": 2, "refine": false}}}"#,
    );
    let out = cqsum(&["optimize"], Some(&config), &dir.path().join("out"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert!(report["result"]["rate"].as_f64().unwrap() > 0.0);
}

proptest! {
    #[test]
    fn report_floats_round_trip_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let text = to_json(&vec![x]).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back[0].to_bits(), x.to_bits());
    }
}
