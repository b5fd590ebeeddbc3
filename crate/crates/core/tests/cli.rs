use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jointgiant")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn beta_prints_root_diagnostics() {
    let v = json(&run(&["beta", "--l1", "2.5", "--l2", "2.5"]));
    assert!(v["beta"].as_f64().unwrap() > 0.6);
    assert_eq!(v["positive_root_count"], 2);
    let v = json(&run(&["beta", "--l1", "2.4", "--l2", "2.4"]));
    assert_eq!(v["beta"].as_f64().unwrap(), 0.0);
}

#[test]
fn bd_and_diagonal_critical() {
    let v = json(&run(&["bd", "--l1", "2", "--l2", "3", "--dmax", "3"]));
    let q: Vec<f64> = v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(q.len(), 4);
    assert_eq!(q[0], 1.0);
    assert!(q.windows(2).all(|w| w[1] <= w[0]));
    let v = json(&run(&["diagonal-critical"]));
    assert!((v["lambda_star"].as_f64().unwrap() - 2.4554).abs() < 5e-4);
    assert!((v["beta_star"].as_f64().unwrap() - 0.5117).abs() < 5e-4);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["beta", "--l1", "-1", "--l2", "2"]).status.code(), Some(1));
    assert_eq!(run(&["beta", "--l1", "abc", "--l2", "2"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = dir.path().join("out.csv");
    let code = run(&["sweep", "--config", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code();
    assert_eq!(code, Some(3));
    let bad_dir = dir.path().join("nope").join("curve.csv");
    let code = run(&["curve", "--l1-min", "2", "--l1-max", "3", "--step", "0.5", "--out", bad_dir.to_str().unwrap()])
        .status
        .code();
    assert_eq!(code, Some(3));
}

#[test]
fn simulate_prints_csv_keys() {
    let v = json(&run(&["simulate", "--n", "2000", "--l1", "2.8", "--l2", "2.8", "--seed", "5", "--cores"]));
    for key in jointgiant::harness::CSV_HEADER.split(',') {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["n"], 2000);
    assert!(v["size_core"].as_u64().is_some());
    let plain = json(&run(&["simulate", "--n", "2000", "--l1", "2.8", "--l2", "2.8", "--seed", "5"]));
    assert_eq!(plain["largest"], v["largest"]);
    assert!(plain["size_core"].is_null());
}

#[test]
fn sweep_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    fs::write(
        &config,
        r#"[{"n": 3000, "lambda1": 2.6, "lambda2": 2.6, "seed": 1, "compute_cores": true},
            {"n": 3000, "lambda1": 2.0, "lambda2": 3.0, "seed": 2},
            {"n": 1, "lambda1": 1, "lambda2": 1, "seed": 0}]"#,
    )
    .unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "8")] {
        let out = run(&["sweep", "--config", config.to_str().unwrap(), "--out", path.to_str().unwrap(), "--threads", threads]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], jointgiant::harness::CSV_HEADER);
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3], "1,1,1,0,1,0,1,0,0,,,,0,,");
}

#[test]
fn sweep_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    fs::write(&config, r#"[{"n": 10, "lambda1": 1, "lambda2": 1, "seed": 0, "bogus": 1}]"#).unwrap();
    let out = dir.path().join("out.csv");
    let code = run(&["sweep", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code();
    assert_eq!(code, Some(1));
}

#[test]
fn curve_phase_and_census_files() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let out = run(&["curve", "--l1-min", "2", "--l1-max", "4", "--step", "0.5", "--out", curve.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&curve).unwrap();
    assert_eq!(text.lines().next(), Some("lambda1,lambda2_critical,beta_at_critical"));
    assert_eq!(text.lines().count(), 6);

    let csv = dir.path().join("phase.csv");
    let svg = dir.path().join("phase.svg");
    let args = ["phase", "--out-csv", csv.to_str().unwrap(), "--out-svg", svg.to_str().unwrap(), "--res", "8"];
    assert!(run(&args).status.success());
    let first = fs::read(&svg).unwrap();
    assert!(run(&args).status.success());
    assert_eq!(first, fs::read(&svg).unwrap());
    assert!(String::from_utf8(first).unwrap().contains("<polyline"));

    let census = dir.path().join("census.csv");
    let v = json(&run(&["census", "--n", "5000", "--l1", "2.3", "--l2", "2.3", "--seeds", "3", "--out", census.to_str().unwrap()]));
    assert!(v["first_moment_bound"].as_f64().unwrap().is_finite());
    let text = fs::read_to_string(&census).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 + 1);
}

#[test]
fn branching_estimate() {
    let v = json(&run(&["branching", "--l1", "2.5", "--l2", "2.5", "--event", "bd", "--level", "2", "--trials", "20000", "--seed", "9"]));
    let q = jointgiant::analytic::bd_prob(2.5, 2.5, 2)[2];
    let est = v["estimate"].as_f64().unwrap();
    assert!((est - q).abs() < 4.0 * v["std_error"].as_f64().unwrap());
    let rb = json(&run(&["branching", "--l1", "2.5", "--l2", "2.5", "--event", "rb", "--level", "1", "--trials", "2000", "--seed", "9"]));
    assert_eq!(rb["event"], "RB_1");
    assert_eq!(run(&["branching", "--l1", "2", "--l2", "2", "--event", "rb", "--level", "0", "--trials", "10", "--seed", "1"]).status.code(), Some(1));
}
