use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/failures.dat")
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic-rules"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mine_fixture(extra: &[&str]) -> Output {
    let path = fixture();
    let mut args = vec!["--input", path.to_str().unwrap(), "--minsupp", "0.5", "--minconf", "0.5"];
    args.extend_from_slice(extra);
    cli(&args)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn constrained_fixture_run_end_to_end() {
    let out = mine_fixture(&["--partitions", "2", "--cycle-length", "2", "--cl", "1", "--agg", "SUM(0)>=1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["rules"],
        serde_json::json!([{
            "premise": [0], "conclusion": [1], "support": 0.5, "confidence": 1.0,
            "cycles": [{"l": 2, "o": 1}]
        }])
    );
    assert_eq!(report["config"]["algorithm"], "cbcar");
    assert_eq!(report["config"]["constraints"]["aggregates"], serde_json::json!(["SUM(0)>=1"]));
}

#[test]
fn constraints_rejected_outside_cbcar() {
    let out = mine_fixture(&["--algorithm", "sequential", "--cl", "1"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).contains("--algorithm"), "{}", stderr(&out));
}

#[test]
fn identical_runs_give_identical_rules() {
    let args = ["--algorithm", "interleaved", "--lmax", "4", "--allow-empty-premise"];
    let a: Value = serde_json::from_slice(&mine_fixture(&args).stdout).unwrap();
    let b: Value = serde_json::from_slice(&mine_fixture(&args).stdout).unwrap();
    assert_eq!(a["rules"], b["rules"]);
    assert!(!a["rules"].as_array().unwrap().is_empty());
}

#[test]
fn errors_name_the_flag() {
    for (args, flag) in [
        (vec!["--minsupp", "1.5"], "--minsupp"),
        (vec!["--cycle-length", "5"], "--cycle-length"),
        (vec!["--algorithm", "sequential", "--lmax", "9"], "--lmax"),
        (vec!["--partitions", "0"], "--partitions"),
        (vec!["--prm", "7"], "--prm"),
        (vec!["--agg", "SUM(0)>>1"], "--agg"),
        (vec!["--algorithm", "fpgrowth"], "--algorithm"),
        (vec!["--units-per-group", "0"], "--units-per-group"),
    ] {
        let out = mine_fixture(&args);
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn input_errors() {
    let out = cli(&["--input", "/definitely/missing.dat"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--input"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dat");
    std::fs::write(&bad, "0 1\n2 x\n").unwrap();
    let out = cli(&["--input", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    let msg = stderr(&out);
    assert!(msg.contains("--input") && msg.contains("line 2"), "{msg}");

    let out = cli(&["--minsupp", "0.5"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--input"));
}

#[test]
fn output_formats_and_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rules.csv");
    let out = mine_fixture(&["--partitions", "2", "--out-format", "csv", "--output", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        csv,
        "premise,conclusion,support,confidence,cycles\n0,1,0.5,1,2:1\n1,0,0.5,0.5714285714285714,2:1\n"
    );

    let text = mine_fixture(&["--out-format", "text", "--cl", "1"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("{0} => {1} (support 0.5000, confidence 1.0000, cycles (l=2, o=1))"), "{text}");
}

#[test]
fn sweep_and_compare_write_csv() {
    let out = mine_fixture(&["--algorithm", "pcar", "--sweep", "partitions", "--values", "1,2,4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1..].iter().all(|r| r.split(',').nth(2) == Some("2")), "{text}");

    let out = mine_fixture(&["--compare", "sequential,interleaved", "--lmax", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(2).unwrap().ends_with(",agree"), "{text}");

    let out = mine_fixture(&["--compare", "pcar"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--compare"));

    let out = mine_fixture(&["--sweep", "minsupp", "--values", "0.5,2"]);
    assert!(!out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}

#[test]
fn synthetic_input() {
    let out = cli(&[
        "--synthetic",
        "transactions=2000,items=40,per_unit=100",
        "--seed",
        "3",
        "--minsupp",
        "0.05",
        "--algorithm",
        "pcar",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["input"]["synthetic"]["transactions"], 2000);
    assert_eq!(report["config"]["seed"], 3);

    let out = cli(&["--synthetic", "transactions=lots"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("--synthetic"));
}
