//! Pins the full JSON report for the constrained fixture run. Timing and
//! the machine-specific input path are masked.

use std::path::PathBuf;

use cyclic_rules::bench::{self, Algorithm, DataSource, OutputFormat, RunConfig};
use cyclic_rules::{ConstraintSet, MiningParams};
use serde_json::Value;

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn masked(report: &str) -> Value {
    let mut v: Value = serde_json::from_str(report).unwrap();
    v["timing_ms"] = Value::from(0.0);
    v["config"]["input"] = serde_json::json!({"file": "failures.dat"});
    v
}

#[test]
fn fixture_report_matches_golden_file() {
    let config = RunConfig {
        input: DataSource::File(manifest().join("tests/data/failures.dat")),
        algorithm: Algorithm::Cbcar,
        params: MiningParams {
            minsupp: 0.5,
            minconf: 0.5,
            nb_partitions: 2,
            cycle_length: 2,
            ..Default::default()
        },
        constraints: ConstraintSet::builder()
            .conclusion([1])
            .aggregate("SUM(0)>=1".parse().unwrap())
            .build(),
        ..Default::default()
    };
    let report = bench::run(&config).unwrap();
    let actual = masked(&report.render(OutputFormat::Json).unwrap());
    let golden_path = manifest().join("tests/golden/fixture_report.json");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden_path, serde_json::to_string_pretty(&actual).unwrap() + "\n").unwrap();
    }
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(&golden_path).unwrap()).unwrap();
    assert_eq!(actual, golden);
}
