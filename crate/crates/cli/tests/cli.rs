//! End-to-end checks of the `cppe` binary.

use std::process::{Command, Output};

use cppe_cli::record::{from_jsonl, recompute_summary};

fn cppe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cppe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn calibrate_default_json() {
    let out = cppe(&["calibrate"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c = v["report"]["fpe_c"].as_u64().unwrap();
    assert!((754..=762).contains(&c), "fpe_c = {c}");
    assert_eq!(v["all_pass"], serde_json::Value::Bool(true));
}

#[test]
fn calibrate_strict_passes() {
    let out = cppe(&["calibrate", "--strict"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cppe(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cppe(&["simulate", "--n", "8"]).status.code(), Some(2));
    let bad_phase = cppe(&[
        "simulate",
        "--algorithm",
        "kitaev",
        "--n",
        "4",
        "--phase",
        "0.2101",
    ]);
    assert_eq!(bad_phase.status.code(), Some(2));
}

#[test]
fn simulate_kitaev_success_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let args = |path: &std::path::Path| {
        vec![
            "simulate".to_string(),
            "--algorithm".into(),
            "kitaev".into(),
            "--n".into(),
            "8".into(),
            "--reps".into(),
            "60".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            path.to_str().unwrap().to_string(),
        ]
    };
    for path in [&a, &b] {
        let out = Command::new(env!("CARGO_BIN_EXE_cppe"))
            .args(args(path))
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let text_a = std::fs::read_to_string(&a).unwrap();
    let text_b = std::fs::read_to_string(&b).unwrap();
    assert_eq!(text_a, text_b, "same config and seed must be byte-identical");

    let (records, summary) = from_jsonl(&text_a).unwrap();
    assert_eq!(records.len(), 60);
    assert!(summary.success_rate >= 0.75, "rate {}", summary.success_rate);
    // Lossless round trip through the summary recomputation.
    assert_eq!(summary, recompute_summary(&records));
}

#[test]
fn simulate_acpa_trials_shrink_with_k() {
    let run = |k: &str| {
        let out = cppe(&[
            "simulate",
            "--algorithm",
            "acpa",
            "--n",
            "6",
            "--k",
            k,
            "--reps",
            "3",
            "--seed",
            "11",
        ]);
        assert!(out.status.success());
        let (records, _) = from_jsonl(&stdout(&out)).unwrap();
        records[0].trials_per_unit
    };
    assert!(run("6") < run("3"));
}

#[test]
fn sweep_default_csv_grid() {
    let out = cppe(&["sweep"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "method_a,method_b,n,k,mode,ratio");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 800);
    assert!(rows[0].starts_with("kitaev,acpa,1,3,perfect,"));
}

#[test]
fn imperfect_sweep_is_shifted_perfect_sweep() {
    let grab = |mode: &str, k_min: &str, k_max: &str| {
        let out = cppe(&[
            "sweep", "--mode", mode, "--k-min", k_min, "--k-max", k_max, "--n-min",
            "10", "--n-max", "20",
        ]);
        assert!(out.status.success());
        stdout(&out)
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(grab("imperfect", "4", "10"), grab("perfect", "3", "9"));
}

#[test]
fn cost_table_row() {
    let out = cppe(&[
        "cost", "--method", "acpa", "--n", "64", "--k", "3", "--gamma", "1000",
        "--c-exponent", "1.0", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "rotation_exact"));
    let row = reader.records().next().unwrap().unwrap();
    let exact: f64 = row[headers.iter().position(|h| h == "u_gates_exact").unwrap()]
        .parse()
        .unwrap();
    let log2: f64 = row[headers.iter().position(|h| h == "u_gates_log2").unwrap()]
        .parse()
        .unwrap();
    assert!((log2 - exact.log2()).abs() < 1e-9);
}

#[test]
fn cost_fpe_rejects_n1() {
    let out = cppe(&["cost", "--method", "fpe", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "schema_version = 1\nalgorithm = \"acpa\"\nn = 6\nk = 3\nreps = 5\nseed = 3\n",
    )
    .unwrap();
    let run = || {
        let out = cppe(&["simulate", "--config", cfg.to_str().unwrap()]);
        assert!(out.status.success());
        stdout(&out)
    };
    assert_eq!(run(), run());
}
