//! Front-end behavior: exit codes, format overrides, artifact round-trips.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn gqueue(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gqueue"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn malformed_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[model]\nmu = \"ten\"\n").unwrap();
    let output = gqueue(&["solve", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1), "{output:?}");

    let missing = dir.path().join("missing.toml");
    let output = gqueue(&["solve", "--config", missing.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn unstable_model_exits_two_naming_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("unstable.toml");
    // Load 2 * 10 = 20 against mu = 10, no negative arrivals.
    std::fs::write(
        &cfg,
        r#"
[model]
mu = 10.0

[model.inter_arrival]
family = "exponential"
rate = 10.0

[model.batch]
2 = 1.0
"#,
    )
    .unwrap();
    let output = gqueue(&["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("lambda * gbar < mu"), "stderr: {stderr}");
}

#[test]
fn format_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.json");
    let output = gqueue(&[
        "solve",
        "--config",
        config_path("table1_m.toml").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(parsed["summary"]["l_arb"].is_f64());
}

#[test]
fn stdout_matches_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let to_file = gqueue(&[
        "solve",
        "--config",
        config_path("table1_m.toml").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    let to_stdout = gqueue(&[
        "solve",
        "--config",
        config_path("table1_m.toml").to_str().unwrap(),
    ]);
    assert!(to_stdout.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), to_stdout.stdout);
}

#[test]
fn csv_headers_are_the_documented_schemas() {
    let solve = gqueue(&[
        "solve",
        "--config",
        config_path("table1_m.toml").to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&solve.stdout).starts_with("n,p_pre,p_arb,ratio\n"));

    let sweep = gqueue(&[
        "sweep",
        "--config",
        config_path("fig1_eta_by_delta.toml").to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&sweep.stdout).starts_with("param,series,L,L_pre,p0,rb\n"));

    let sim = gqueue(&[
        "simulate",
        "--config",
        config_path("smoke_sim.toml").to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&sim.stdout).starts_with("n,p_pre,p_arb,ratio,se_pre,se_arb\n"));
}

#[test]
fn sweep_with_unstable_point_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        r#"
[model]
mu = 10.0
eta = 5.0
delta = 2.0

[model.inter_arrival]
family = "exponential"
rate = 10.0

[model.batch]
1 = 0.2
10 = 0.8

[sweep]
parameter = "eta"
grid = [0.0, 1.0]
series_delta = [0.0]
"#,
    )
    .unwrap();
    let output = gqueue(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("sweep point"), "stderr: {stderr}");
}

#[test]
fn simulation_json_artifact_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let output = gqueue(&[
        "simulate",
        "--config",
        config_path("smoke_sim.toml").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let parsed: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let result = &parsed["result"];
    assert_eq!(result["seed"].as_u64(), Some(7));
    assert_eq!(result["replications"].as_u64(), Some(3));
    let pmf: Vec<f64> = result["prearrival_pmf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let total: f64 = pmf.iter().sum();
    // Values are rounded to 8 decimals in the artifact.
    assert!((total - 1.0).abs() < 1e-5, "mass {total}");
}

#[test]
fn different_seeds_differ() {
    let a = gqueue(&[
        "simulate",
        "--config",
        config_path("smoke_sim.toml").to_str().unwrap(),
        "--seed",
        "1",
    ]);
    let b = gqueue(&[
        "simulate",
        "--config",
        config_path("smoke_sim.toml").to_str().unwrap(),
        "--seed",
        "2",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}
