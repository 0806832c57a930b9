//! End-to-end tests of the `pursuit` binary: exit codes, file outputs,
//! and the derived-parameter desk check on the golden scenario.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pursuit"))
}

fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/golden_ellipse.json")
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(dir).unwrap();
    dir.join(name)
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn params_reports_the_golden_values() {
    let output = bin().arg("params").arg(golden_path()).output().unwrap();
    assert!(output.status.success());
    let derived: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(derived["d"], 6.0);
    assert_eq!(derived["c"], 2.0);
    let s11 = derived["sigma_i1_sq"][0].as_f64().unwrap();
    let s21 = derived["sigma_i1_sq"][1].as_f64().unwrap();
    let t11 = derived["t_i1"][0].as_f64().unwrap();
    let t21 = derived["t_i1"][1].as_f64().unwrap();
    assert!(((s11 - 200.0 / 221.0) / (200.0 / 221.0)).abs() < 1e-9);
    assert!(((s21 - 242.0 / 221.0) / (242.0 / 221.0)).abs() < 1e-9);
    assert!(((t11 - 7956.0 / 21.0) / (7956.0 / 21.0)).abs() < 1e-9);
    assert!(((t21 - 795_600.0 / 2541.0) / (795_600.0 / 2541.0)).abs() < 1e-9);
}

#[test]
fn run_golden_captures_with_exit_zero() {
    let report_path = tmp("golden_report.json");
    let trace_path = tmp("golden_trace.ndjson");
    let csv_path = tmp("golden_trace.csv");
    let output = bin()
        .arg("run")
        .arg(golden_path())
        .arg("--report")
        .arg(&report_path)
        .arg("--trace")
        .arg(&trace_path)
        .arg("--csv")
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stdout_of(&output));
    assert!(stdout_of(&output).contains("captured: pursuer 1"));

    // Report parses and embeds the same derived parameters as `params`.
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["captured"], true);
    assert_eq!(report["capturing_pursuer"], 1);
    let params_out = bin().arg("params").arg(golden_path()).output().unwrap();
    let derived: serde_json::Value = serde_json::from_str(&stdout_of(&params_out)).unwrap();
    assert_eq!(report["derived"], derived);

    // Every NDJSON line is a JSON object with the expected fields.
    let ndjson = std::fs::read_to_string(&trace_path).unwrap();
    assert!(ndjson.lines().count() > 100);
    for line in ndjson.lines().take(50) {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(row["t"].is_number());
        assert_eq!(row["pursuers"].as_array().unwrap().len(), 2);
        assert!(row["evader"]["position"].is_array());
        assert!(row["phase"].is_string());
    }

    // CSV has a header and one row per trace step.
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("t,phase,active,p1_x"));
    assert_eq!(lines.count(), ndjson.lines().count());
}

#[test]
fn run_is_byte_deterministic() {
    let a = tmp("det_a.ndjson");
    let b = tmp("det_b.ndjson");
    for path in [&a, &b] {
        let status = bin()
            .arg("run")
            .arg(golden_path())
            .arg("--trace")
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_error_exits_one() {
    let bad = tmp("bad_scenario.json");
    std::fs::write(
        &bad,
        r#"{
            "schema": 1,
            "region": {"kind": "ellipse", "center": [0,0], "semi_axes": [3,2], "rotation": 0},
            "pursuers": [{"position": [0,0], "budgets_sq": [-1.0, 1.0]}],
            "evader": {"position": [1,0], "budgets_sq": [1.0, 1.0], "kind": "idle"},
            "rng_seed": 1
        }"#,
    )
    .unwrap();
    let output = bin().arg("run").arg(&bad).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn hypothesis_violation_without_exploratory_exits_one() {
    let path = tmp("violated.json");
    std::fs::write(
        &path,
        r#"{
            "schema": 1,
            "region": {"kind": "ellipse", "center": [0,0], "semi_axes": [3,2], "rotation": 0},
            "pursuers": [{"position": [-1,0], "budgets_sq": [1.0, 1.0]}],
            "evader": {"position": [1,0], "budgets_sq": [5.0, 5.0], "kind": "greedy_flee"},
            "rng_seed": 1
        }"#,
    )
    .unwrap();
    let output = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(
        String::from_utf8_lossy(&output.stderr).contains("sufficiency condition"),
        "stderr should name the failed sufficiency condition"
    );
}

#[test]
fn exploratory_run_may_end_without_capture() {
    // One pursuer with far less energy than the evader: the splitter dump
    // breaks the only window's mirror at once and the run times out.
    let path = tmp("exploratory.json");
    std::fs::write(
        &path,
        r#"{
            "schema": 1,
            "region": {"kind": "ellipse", "center": [0,0], "semi_axes": [3,2], "rotation": 0},
            "pursuers": [{"position": [-1,0], "budgets_sq": [1.0, 1.0]}],
            "evader": {"position": [1,0.5], "budgets_sq": [50.0, 50.0],
                       "kind": "window_splitter", "overdraw_fraction": 0.0},
            "rng_seed": 1,
            "exploratory": true
        }"#,
    )
    .unwrap();
    let output = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let text = stdout_of(&output);
    assert!(text.contains("no capture"));
    assert!(text.contains("no guarantee was asserted"));
}

#[test]
fn verify_small_battery_passes() {
    let output = bin()
        .arg("verify")
        .arg("--n")
        .arg("2")
        .arg("--seed")
        .arg("7")
        .arg("--policies")
        .arg("idle,window_splitter")
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stdout_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("all runs captured within the bound"));
}

#[test]
fn verify_rejects_unknown_policy() {
    let output = bin()
        .arg("verify")
        .arg("--policies")
        .arg("teleport")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}
