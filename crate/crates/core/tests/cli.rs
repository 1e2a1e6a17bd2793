use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pulse_desync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pulse-desync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SCENARIO: &str = r#"{
  "schema": 1,
  "seed": 11,
  "topology": {"kind": "ring", "n": 4},
  "oscillators": {
    "frequencies": {"list": [1.0, 1.02, 0.98, 1.0]},
    "initial_phases": {"uniform": {"low": 0.0, "high": 0.1}}
  },
  "interaction": {"family": "smooth_log", "gain": 2.0},
  "delays": {"uniform": 0.0},
  "duration": 50.0,
  "sample_interval": 0.5
}"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.json");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap_or_default().to_string()
}

#[test]
fn simulate_writes_every_artifact() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), SCENARIO);
    let out = tmp.path().join("out");
    let o = pulse_desync(&["simulate", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("final P = "));

    assert_eq!(first_line(&out.join("snapshots.csv")), "t,x_1,x_2,x_3,x_4");
    assert_eq!(first_line(&out.join("events.csv")), "t,id,kind");
    assert_eq!(first_line(&out.join("order_parameter.csv")), "t,P");
    assert_eq!(first_line(&out.join("verdict.csv")), "edge,distance,alternating,desynchronized");
    assert_eq!(first_line(&out.join("limit_cycle.txt")), "period,order");
    let echoed = fs::read_to_string(out.join("scenario.json")).unwrap();
    assert!(echoed.contains("\"window_fraction\": 0.2"));

    let snapshots = fs::read_to_string(out.join("snapshots.csv")).unwrap();
    assert_eq!(snapshots.lines().count(), 1 + 101);
    let verdict = fs::read_to_string(out.join("verdict.csv")).unwrap();
    assert_eq!(verdict.lines().count(), 1 + 4);
    let events = fs::read_to_string(out.join("events.csv")).unwrap();
    assert!(events.lines().skip(1).all(|l| l.ends_with(",firing") || l.ends_with(",delivery")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), SCENARIO);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = pulse_desync(&["simulate", "--config", &config, "--out", dir.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["snapshots.csv", "events.csv", "order_parameter.csv", "verdict.csv", "limit_cycle.txt", "scenario.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn seed_override_changes_the_draw() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), SCENARIO);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(pulse_desync(&["simulate", "--config", &config, "--out", a.to_str().unwrap()]).status.success());
    assert!(pulse_desync(&["--seed", "12", "simulate", "--config", &config, "--out", b.to_str().unwrap()]).status.success());
    assert_ne!(fs::read(a.join("events.csv")).unwrap(), fs::read(b.join("events.csv")).unwrap());
}

#[test]
fn zero_frequency_names_the_oscillator() {
    let tmp = TempDir::new().unwrap();
    let text = SCENARIO.replace("[1.0, 1.02, 0.98, 1.0]", "[1.0, 1.02, 0.0, 1.0]");
    let config = write_config(tmp.path(), &text);
    let o = pulse_desync(&["simulate", "--config", &config, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("oscillators.frequencies"), "{err}");
    assert!(err.contains("oscillator 3"), "{err}");
}

#[test]
fn oversized_delay_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let text = SCENARIO.replace("\"uniform\": 0.0}", "\"uniform\": 0.6}");
    let config = write_config(tmp.path(), &text);
    let o = pulse_desync(&["simulate", "--config", &config, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("delay"), "{}", stderr(&o));
}

#[test]
fn malformed_json_is_a_validation_error() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "{ not json");
    let o = pulse_desync(&["simulate", "--config", &config, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reproduce_rejects_unknown_presets() {
    let tmp = TempDir::new().unwrap();
    let o = pulse_desync(&["reproduce", "--preset", "fig9", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fig5a"));
}

#[test]
fn reproduce_writes_a_limit_cycle() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("fig5a");
    let o = pulse_desync(&["reproduce", "--preset", "fig5a", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("fig5a: final P = "));
    let lc = fs::read_to_string(out.join("limit_cycle.txt")).unwrap();
    assert_eq!(lc.lines().nth(1), Some("1.031006962,1 3 2 5 4"));
}

#[test]
fn map_two_oscillators() {
    let tmp = TempDir::new().unwrap();
    let o = pulse_desync(&["map", "--n", "2", "--d0", "0.1", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("converged to ±0.5 after "), "{}", stdout(&o));
    let traj = fs::read_to_string(tmp.path().join("trajectory.csv")).unwrap();
    assert_eq!(traj.lines().next(), Some("step,d_1"));
    assert_eq!(traj.lines().nth(1), Some("0,0.1"));
    assert_eq!(traj.lines().count(), 1 + 201);

    let o = pulse_desync(&["map", "--n", "2", "--d0", "0"]);
    assert_eq!(stdout(&o).trim(), "unstable fixed point, no motion");
}

#[test]
fn map_rejects_unordered_start() {
    let o = pulse_desync(&["map", "--n", "4", "--d0", "0.5,0.2,0.7"]);
    assert_eq!(o.status.code(), Some(3));
    let o = pulse_desync(&["map", "--n", "4", "--d0", "0.5,0.2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn map_many_oscillators_reaches_splay() {
    let o = pulse_desync(&["map", "--n", "4", "--d0", "0.05,0.1,0.3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("converged to fixed point"), "{}", stdout(&o));
}

#[test]
fn rho_c_reports_the_critical_ratio() {
    let tmp = TempDir::new().unwrap();
    let o = pulse_desync(&["rho-c", "--gain", "2", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "rho_c = 1.1125 (tolerance 0.001)");
    assert_eq!(first_line(&tmp.path().join("rho_sweep.csv")), "rho,x_star,alternating");

    let o = pulse_desync(&["rho-c", "--tolerance", "1e-9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn orbits_counts_classes() {
    let tmp = TempDir::new().unwrap();
    let o = pulse_desync(&["orbits", "--n", "4", "--samples", "300", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("found 6, expected 6"), "{}", stdout(&o));
    let csv = fs::read_to_string(tmp.path().join("orbits.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
}

#[test]
fn quiet_suppresses_stdout_and_usage_errors_exit_two() {
    let o = pulse_desync(&["--quiet", "map", "--n", "2"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(pulse_desync(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pulse_desync(&["--help"]).status.code(), Some(0));
}
