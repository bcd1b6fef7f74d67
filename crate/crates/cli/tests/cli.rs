use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dnls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dnls"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("input.json");
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

const GROUND_STATE: &str =
    r#"{"equation": "gauged", "initial": {"family": "scaled_ground_state", "a": 1}}"#;

#[test]
fn cubic_at_the_threshold() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let r = dnls(&[
        "cubic",
        "--m0",
        "12.566370614",
        "--epsilon",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!(report["F_at_two_thirds"].as_f64().unwrap().abs() <= 1e-12 * PI.powi(3));
    assert_eq!(report["gwp_verdict"], "at_or_above");
    assert_eq!(json(&out.join("report.json")), report);
    assert_eq!(json(&out.join("config.json"))["m0"], 12.566370614);

    let below = dnls(&["cubic", "--m0", "12.5", "--out", out.to_str().unwrap()]);
    let report: Value = serde_json::from_slice(&below.stdout).unwrap();
    assert_eq!(report["gwp_verdict"], "below_threshold");
}

#[test]
fn gn_verify_on_the_ground_state() {
    let tmp = TempDir::new().unwrap();
    let r = dnls(&[
        "gn-verify",
        "--field",
        "Q",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!((report["gn1"]["ratio"].as_f64().unwrap() - 1.0).abs() <= 1e-8);
    assert!(report["gn2"]["ratio"].as_f64().unwrap() <= 1.0 + 1e-9);
    let manifest = json(&tmp.path().join("manifest.json"));
    assert_eq!(manifest["grid"]["n_points"], 1024);
    assert_eq!(manifest["seed"], 0);
}

#[test]
fn usage_and_config_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let out = out.to_str().unwrap();

    let r = dnls(&["simulate", "--out", out]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("Usage"));

    assert_eq!(dnls(&["frobnicate"]).status.code(), Some(2));

    let zero = write_config(
        tmp.path(),
        r#"{"equation": "gauged", "initial": {"family": "scaled_ground_state", "a": 0}}"#,
    );
    let r = dnls(&["simulate", "--config", &zero, "--out", out]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("zero initial data has no diagnostics"));

    let cfg = write_config(tmp.path(), GROUND_STATE);
    let r = dnls(&[
        "simulate",
        "--config",
        &cfg,
        "--set",
        "grid.n_points=1000",
        "--out",
        out,
    ]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("power of two"));

    let r = dnls(&[
        "simulate", "--config", &cfg, "--set", "steps=10", "--out", out,
    ]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("steps"));

    let r = dnls(&[
        "simulate",
        "--config",
        "/nonexistent/config.json",
        "--out",
        out,
    ]);
    assert_eq!(r.status.code(), Some(2));

    assert_eq!(dnls(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_writes_a_reproducible_run_directory() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), GROUND_STATE);
    let dirs = [tmp.path().join("a"), tmp.path().join("b")];
    for d in &dirs {
        let r = dnls(&[
            "simulate",
            "--config",
            &cfg,
            "--set",
            "t_final=0.1",
            "--out",
            d.to_str().unwrap(),
        ]);
        assert_eq!(
            r.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&r.stderr)
        );
    }
    for name in [
        "config.json",
        "series.csv",
        "series.json",
        "report.json",
        "manifest.json",
    ] {
        let a = fs::read(dirs[0].join(name)).unwrap();
        let b = fs::read(dirs[1].join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let csv = fs::read_to_string(dirs[0].join("series.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,mass,energy,momentum,l2_grad,l4,l6,f,bound_residual"
    );
    assert_eq!(lines.count(), 11);

    let echo = json(&dirs[0].join("config.json"));
    assert_eq!(echo["dt"], 1e-3);
    assert_eq!(echo["grid"]["length"], 40.0);
    assert_eq!(echo["t_final"], 0.1);

    let manifest = json(&dirs[0].join("manifest.json"));
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["status"], "ok");
    assert!(manifest["version"].is_string());
    let files: Vec<&str> = manifest["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    for name in [
        "config.json",
        "series.csv",
        "series.json",
        "report.json",
        "manifest.json",
    ] {
        assert!(files.contains(&name), "{name} missing from manifest");
    }
    let report = json(&dirs[0].join("report.json"));
    assert!(report["drift"]["mass_relative"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn blow_up_exits_1_with_partial_output() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"equation": "original", "initial": {"family": "gaussian", "amplitude": 6, "sigma": 0.5},
            "dt": 0.05, "t_final": 5, "output_every": 1, "dealias": false}"#,
    );
    let out = tmp.path().join("o");
    let r = dnls(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    let report = json(&out.join("report.json"));
    assert_eq!(report["status"], "blow_up");
    assert!(report["blow_up_time"].as_f64().unwrap() > 0.0);
    assert!(
        fs::read_to_string(out.join("series.csv"))
            .unwrap()
            .lines()
            .count()
            >= 2
    );
    assert_eq!(
        json(&out.join("manifest.json"))["status"],
        "numerical_failure"
    );
}

#[test]
fn sweep_writes_per_run_manifests() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let r = dnls(&[
        "sweep",
        "--amplitudes",
        "0.8,1.0",
        "--set",
        "t_final=0.05",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let report = json(&out.join("report.json"));
    let runs = report["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 2);
    for (i, a) in [0.8f64, 1.0].iter().enumerate() {
        assert!((runs[i]["mass"].as_f64().unwrap() - 2.0 * PI * a * a).abs() <= 1e-10);
        let dir = out.join(format!("run_{i:02}"));
        assert_eq!(json(&dir.join("manifest.json"))["status"], "ok");
        assert!(dir.join("series.csv").exists());
        assert_eq!(json(&dir.join("config.json"))["initial"]["a"], *a);
    }
    assert!(report["min_slack"].as_f64().unwrap() >= -1e-9);

    let bad = dnls(&[
        "sweep",
        "--amplitudes",
        "1.0,0.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn convergence_reports_fourth_order() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), GROUND_STATE);
    let r = dnls(&[
        "convergence",
        "--config",
        &cfg,
        "--set",
        "t_final=0.5",
        "--dts",
        "0.02,0.01,0.005",
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    let slope = report["slope"].as_f64().unwrap();
    assert!((3.7..=4.3).contains(&slope), "{slope}");

    let bad = dnls(&[
        "convergence",
        "--config",
        &cfg,
        "--dts",
        "0.02,0.01",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn seeded_suites_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let run = |name: &str, seed: &str| {
        let out = tmp.path().join(name);
        let r = dnls(&[
            "gauge-check",
            "--count",
            "20",
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(r.status.code(), Some(0));
        fs::read(out.join("report.json")).unwrap()
    };
    let a = run("a", "7");
    assert_eq!(a, run("b", "7"));
    assert_ne!(a, run("c", "8"));
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn invariants_and_ground_state_reports() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), GROUND_STATE);
    let r = dnls(&[
        "invariants",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("i").to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!((report["invariants"]["mass"].as_f64().unwrap() - 2.0 * PI).abs() <= 1e-8);
    assert!((report["invariants"]["momentum"].as_f64().unwrap() - 4.0).abs() <= 1e-8);
    assert_eq!(report["bound"]["regime"], "boost_regime");

    let original = write_config(
        tmp.path(),
        r#"{"equation": "original", "initial": {"family": "gaussian", "amplitude": 0.5}}"#,
    );
    let r = dnls(&[
        "invariants",
        "--config",
        &original,
        "--out",
        tmp.path().join("j").to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(report["invariants"]["form"], "original");
    assert!(report["f_bounds"]["value"].is_number());

    let r = dnls(&[
        "ground-state",
        "--out",
        tmp.path().join("g").to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!((report["f"].as_f64().unwrap() - 4.0 / PI.sqrt()).abs() <= 1e-8);
    assert!(report["elliptic_residual"].as_f64().unwrap() <= 1e-8);
}
