use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use metamorph::telemetry::{SEGMENT_HEADER, VEHICLE_HEADER};
use serde_json::Value;

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn config() -> PathBuf {
    repo().join("configs/default.toml")
}

fn metamorph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metamorph"))
        .args(args)
        .env_remove("METAMORPH_POLAR_DIR")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().last().expect("stderr has a line");
    serde_json::from_str(line).expect("stderr is JSON")
}

fn first_line(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap().lines().next().unwrap().to_string()
}

fn run(out: &Path) -> Output {
    metamorph(&["run", s(&config()), "--scenario", "cruise_roll", "--out", s(out)])
}

#[test]
fn run_writes_telemetry_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(first_line(&tmp.path().join("vehicle.csv")), VEHICLE_HEADER.join(","));
    assert_eq!(first_line(&tmp.path().join("segments.csv")), SEGMENT_HEADER.join(","));

    let m: Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("run_manifest.json")).unwrap()).unwrap();
    assert_eq!(m["scenario"], "cruise_roll");
    assert_eq!(m["config"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["polars"].as_array().unwrap().len(), 10);
    assert_eq!(m["segments_per_side"], 8);

    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["samples"], m["samples"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run(a.path()).status.success());
    assert!(run(b.path()).status.success());
    for f in ["vehicle.csv", "segments.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn several_scenarios_get_their_own_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let o = metamorph(&[
        "run", s(&config()), "--scenario", "cruise_roll", "--scenario", "cruise_yaw", "--jobs", "2", "--out", s(tmp.path()),
    ]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 2);
    for n in ["cruise_roll", "cruise_yaw"] {
        assert!(tmp.path().join(n).join("vehicle.csv").is_file());
    }
}

#[test]
fn missing_polar_directory_exits_with_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = metamorph(&[
        "run", s(&config()), "--scenario", "cruise_roll", "--out", s(tmp.path()), "--polar-dir", s(&tmp.path().join("none")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "PolarError");
}

#[test]
fn unknown_config_key_reports_its_line() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "[airframe]\nwingspan = 0.5\nwing_span = 0.6\n").unwrap();
    let o = metamorph(&["run", s(&cfg), "--polar-dir", s(&repo().join("polars"))]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "ConfigError");
    assert_eq!(e["line"], 3);
}

#[test]
fn validate_polar_accepts_shipped_files() {
    let o = metamorph(&["validate-polar", s(&repo().join("polars"))]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("OK")).count(), 10);
}

#[test]
fn validate_polar_rejects_corrupt_and_empty_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let o = metamorph(&["validate-polar", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("WARN"));

    let src = repo().join("polars/NACA0010/NACA0010_Re0.100_M0.00_N9.0.txt");
    let text = std::fs::read_to_string(src).unwrap();
    let corrupt: String = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 14 { "  1.000  banana\n".to_string() } else { format!("{l}\n") })
        .collect();
    std::fs::write(tmp.path().join("bad.txt"), corrupt).unwrap();
    let o = metamorph(&["validate-polar", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("ERROR"));
}

#[test]
fn plot_writes_scripts_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(run(tmp.path()).status.success());
    let o = metamorph(&["plot", s(tmp.path())]);
    assert!(o.status.success());
    let v = std::fs::read(tmp.path().join("vehicle.gp")).unwrap();
    let g = std::fs::read(tmp.path().join("segments.gp")).unwrap();
    assert!(metamorph(&["plot", s(tmp.path())]).status.success());
    assert_eq!(v, std::fs::read(tmp.path().join("vehicle.gp")).unwrap());
    assert_eq!(g, std::fs::read(tmp.path().join("segments.gp")).unwrap());
}

#[test]
fn plot_without_telemetry_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let o = metamorph(&["plot", s(tmp.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "MissingTelemetry");
}

#[test]
fn trim_prints_glide_solution() {
    let o = metamorph(&["trim", s(&config())]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mode"], "glide");
    assert!(v["gamma_deg"].as_f64().unwrap() < 0.0);
    assert!(v["lift_to_drag"].as_f64().unwrap() > 1.0);
}
