use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vibronic-echo"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn column(path: &Path, index: usize) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(index).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn run_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        assert!(run(&["run"], dir.path()).status.success());
    }
    let trace = fs::read(a.path().join("trace.csv")).unwrap();
    assert_eq!(trace, fs::read(b.path().join("trace.csv")).unwrap());
    let text = String::from_utf8(trace).unwrap();
    assert!(text.starts_with("t,re_d,im_d,abs_d,ground_pop,excited_pop\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn numeric_run_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let config = write_config(
            dir.path(),
            r#"{"units": "natural", "tau": 0.3, "min_points": 1024}"#,
        );
        let out = run(&["run", "--engine", "numeric", "--config", &config], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(
        fs::read(a.path().join("trace.csv")).unwrap(),
        fs::read(b.path().join("trace.csv")).unwrap()
    );
}

#[test]
fn zero_pulse_areas_give_no_dipole() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"area1": 0.0, "area2": 0.0}"#);
    assert!(run(&["run", "--config", &config], dir.path()).status.success());
    assert!(column(&dir.path().join("trace.csv"), 3).iter().all(|&d| d == 0.0));
}

#[test]
fn zero_first_pulse_leaves_only_the_second_response() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"area1": 0.0}"#);
    assert!(run(&["run", "--config", &config], dir.path()).status.success());
    let terms = dir.path().join("terms.csv");
    for index in [1, 2, 5, 6, 7, 8] {
        assert!(column(&terms, index).iter().all(|&v| v == 0.0), "column {index}");
    }
    let peak = column(&terms, 3).into_iter().fold(0.0, f64::max);
    assert!((peak - 0.5 * (std::f64::consts::PI / 3.0).sin()).abs() < 1e-12);
}

#[test]
fn effective_config_reproduces_the_run() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let config = write_config(a.path(), r#"{"area1": 1.0, "area2": 2.0, "record_stride": 3}"#);
    assert!(run(&["run", "--config", &config], a.path()).status.success());
    let effective = a.path().join("effective_config.json");
    let effective = effective.to_str().unwrap();
    assert!(run(&["run", "--config", effective], b.path()).status.success());
    for name in ["trace.csv", "terms.csv", "effective_config.json"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn natural_output_units() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["run", "--units", "natural"], dir.path()).status.success());
    let times = column(&dir.path().join("trace.csv"), 0);
    let abs = column(&dir.path().join("trace.csv"), 3);
    let onset = abs.iter().position(|&d| d > 0.0).unwrap();
    assert!(times[onset].abs() < 1e-12);
    let f: f64 = 3.079_370_320_094_258;
    let t_phi = std::f64::consts::FRAC_1_SQRT_2 / f;
    assert!((times.last().unwrap() - 11.0 * t_phi).abs() < 1e-2);
}

#[test]
fn analytic_scan_reports_the_quartic_law() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["scan-tau"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert!(csv.starts_with("tau,peak,xi,xi_analytic\n"));
    let xi = column(&dir.path().join("scan.csv"), 2);
    let xa = column(&dir.path().join("scan.csv"), 3);
    assert_eq!(xi, xa);
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    assert!((fit["exponent"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert!((fit["T_fit"].as_f64().unwrap() / 8.059_053_485e-15 - 1.0).abs() < 1e-9);
    assert!(fit["residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(fit["failures"], serde_json::json!([]));
}

#[test]
fn compare_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"units": "natural", "excited_force": 3.079, "tau": 0.05, "tail": 0.2, "min_points": 1024}"#,
    );
    let out = run(&["compare", "--config", &config], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("compare.json")).unwrap()).unwrap();
    assert!(report["sup_norm_relative"].as_f64().unwrap() < 0.01);
    assert!(report["peak_time_error_steps"].as_f64().unwrap() <= 1.0);
    assert_eq!(report["linearized_regime"], serde_json::json!(false));
}

#[test]
fn params_round_trip_through_natural_units() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["params"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("quantity,si,natural\n"));
    let row = text
        .lines()
        .find(|l| l.starts_with("dimensionless_force,"))
        .unwrap();
    let f: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    let config = write_config(
        dir.path(),
        &format!(r#"{{"units": "natural", "excited_force": {f:e}}}"#),
    );
    let out = run(&["params", "--config", &config], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text
        .lines()
        .find(|l| l.starts_with("dimensionless_force,"))
        .unwrap();
    assert!(row.contains(",n/a,"));
    let back: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((back - f).abs() <= 1e-12);
}

#[test]
fn zero_force_reports_infinite_times() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"excited_force": 0.0}"#);
    let out = run(&["params", "--config", &config], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "decoherence_time,inf,inf"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for json in [
        r#"{"colour": 1}"#,
        r#"{"area1": 7.0}"#,
        r#"{"mass": -1.0}"#,
        "not json",
    ] {
        let config = write_config(dir.path(), json);
        let out = run(&["run", "--config", &config], dir.path());
        assert_eq!(out.status.code(), Some(2), "{json}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["run", "--config", "/nonexistent/config.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), r#"{"taus": [1e-16, 2e-16, 3e-16]}"#);
    let out = run(&["scan-tau", "--config", &config], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    assert!(fit["fit_error"].is_string());
    assert!(fit["exponent"].is_null());
}
