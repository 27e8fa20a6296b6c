use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    code: i32,
    stderr: String,
    out: PathBuf,
}

fn twocentre(args: &[&str], config: Option<&str>) -> (Run, TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_twocentre"));
    cmd.args(args).arg("--out").arg(&out);
    if let Some(json) = config {
        let path = dir.path().join("config.json");
        std::fs::write(&path, json).unwrap();
        cmd.arg("--config").arg(path);
    }
    let Output { status, stderr, .. } = cmd.output().unwrap();
    let run = Run {
        code: status.code().unwrap_or(-1),
        stderr: String::from_utf8_lossy(&stderr).into_owned(),
        out,
    };
    (run, dir)
}

/// Data rows of a CSV file, comment and header lines removed.
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next().expect("header");
    lines.map(split_csv).collect()
}

fn split_csv(line: &str) -> Vec<String> {
    let mut fields = vec![String::new()];
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                chars.next();
                fields.last_mut().unwrap().push('"');
            }
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(String::new()),
            _ => fields.last_mut().unwrap().push(c),
        }
    }
    fields
}

#[test]
fn default_verify_passes_with_negative_control() {
    let (run, _dir) = twocentre(&["verify", "--seed", "5"], Some(r#"{"verify": {"points": 200}}"#));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&run.out.join("checks.csv"));
    let control: Vec<_> = rows.iter().filter(|r| r[1] == "negative-control").collect();
    assert!(!control.is_empty());
    assert!(control.iter().all(|r| r[4] == "FAIL-expected"));
    assert!(rows.iter().all(|r| r[4] != "FAIL"));
    let header = std::fs::read_to_string(run.out.join("checks.csv")).unwrap();
    assert!(header.starts_with("# twocentre 0.1.0 verify seed=5 config_sha256="));
}

#[test]
fn inverted_axes_are_a_usage_error() {
    let (run, _dir) = twocentre(&["verify"], Some(r#"{"system": {"a": 1.0, "b": 2.0, "mu": 1.0}}"#));
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("A>B>0"), "{}", run.stderr);
}

#[test]
fn malformed_invocations_exit_with_2() {
    assert_eq!(twocentre(&["frobnicate"], None).0.code, 2);
    assert_eq!(twocentre(&["verify", "--seed", "minus-one"], None).0.code, 2);
    assert_eq!(twocentre(&["verify", "--format", "xml"], None).0.code, 2);
    assert_eq!(twocentre(&["verify"], Some(r#"{"verify": {"pionts": 10}}"#)).0.code, 2);
    let (missing, _dir) = {
        let dir = tempfile::tempdir().unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_twocentre"))
            .args(["verify", "--config"])
            .arg(dir.path().join("absent.json"))
            .status()
            .unwrap();
        (status.code(), dir)
    };
    assert_eq!(missing, Some(2));
}

#[test]
fn failed_check_exits_with_1() {
    // Cutoffs listed in decreasing order make the commutator table grow.
    let cfg = r#"{"quantum": {"j_max": 8, "n_theta": 48, "n_phi": 48, "series": [8, 4], "j_cut": 2}}"#;
    let (run, _dir) = twocentre(&["quantum"], Some(cfg));
    assert_eq!(run.code, 1, "{}", run.stderr);
    assert!(run.out.join("diagnostics.json").exists());
}

#[test]
fn non_integer_charge_cites_the_dirac_condition() {
    let (run, _dir) = twocentre(&["quantum"], Some(r#"{"quantum": {"nu": 0.4}}"#));
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("2ν must be an integer"), "{}", run.stderr);
}

#[test]
fn free_spectrum_has_rotor_multiplicities() {
    let cfg = r#"{"system": {"a": 2.0, "b": 1.0, "mu": 0.0}, "quantum": {"j_max": 6, "n_theta": 32, "n_phi": 32, "series": [4, 6], "j_cut": 2}}"#;
    let (run, _dir) = twocentre(&["quantum"], Some(cfg));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let eig: Vec<f64> = csv_rows(&run.out.join("spectrum.csv")).iter().map(|r| r[1].parse().unwrap()).collect();
    let mut expected = Vec::new();
    for j in 0..=6u32 {
        expected.extend(std::iter::repeat(f64::from(j * (j + 1)) / 2.0).take(2 * j as usize + 1));
    }
    assert_eq!(eig.len(), expected.len());
    for (e, x) in eig.iter().zip(&expected) {
        assert!((e - x).abs() < 1e-10, "{e} vs {x}");
    }
}

#[test]
fn projected_geodesic_stays_on_the_sphere() {
    let cfg = r#"{"system": {"a": 2.0, "b": 1.0, "mu": 0.0}, "integrator": {"projection": "leaf"}}"#;
    let (run, _dir) = twocentre(&["simulate"], Some(cfg));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&run.out.join("trajectory.csv"));
    assert_eq!(rows.len(), 1001);
    for r in &rows {
        let q: Vec<f64> = r[4..7].iter().map(|s| s.parse().unwrap()).collect();
        let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-9, "t={} |q|={norm}", r[0]);
    }
}

#[test]
fn default_simulation_drift_is_small() {
    let (run, _dir) = twocentre(&["simulate", "--format", "json"], None);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.out.join("drift.json")).unwrap()).unwrap();
    assert_eq!(summary["termination"], "completed");
    for key in ["h", "f", "c1", "c2"] {
        let d = summary["drift"][key].as_f64().unwrap();
        assert!(d <= 1e-6, "{key} drift {d}");
    }
}

#[test]
fn charged_elliptic_check_skips_separation() {
    let cfg = r#"{"elliptic": {"charges": [1.0], "points": 500, "leaf_points": 20}}"#;
    let (run, _dir) = twocentre(&["elliptic-check"], Some(cfg));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&run.out.join("checks.csv"));
    let sep = rows.iter().find(|r| r[0].starts_with("separation")).unwrap();
    assert_eq!(sep[4], "SKIP");
    assert!(sep[5].contains("ν≠0"));
    assert!(rows.iter().any(|r| r[0].starts_with("H cartesian") && r[4] == "PASS"));
    assert!(rows.iter().any(|r| r[0].starts_with("F vs F1") && r[4] == "REPORT"));
}

#[test]
fn uncharged_elliptic_check_separates() {
    let cfg = r#"{"elliptic": {"charges": [0.0], "points": 500, "leaf_points": 20, "t_end": 10.0}}"#;
    let (run, _dir) = twocentre(&["elliptic-check"], Some(cfg));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows = csv_rows(&run.out.join("checks.csv"));
    let sep: Vec<_> = rows.iter().filter(|r| r[0].starts_with("separation")).collect();
    assert_eq!(sep.len(), 2);
    assert!(sep.iter().all(|r| r[4] == "PASS"));
}

#[test]
fn sweep_grid_has_one_entry_per_point() {
    let cfg = r#"{"sweep": {"a": [2.0, 3.0, 1.0], "b": [1.0], "mu": [-1.0, 0.0, 1.0], "points": 50}}"#;
    let (run, _dir) = twocentre(&["sweep", "--format", "json"], Some(cfg));
    assert_eq!(run.code, 0, "{}", run.stderr);
    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.out.join("sweep.json")).unwrap()).unwrap();
    let rows = bundle["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for row in rows {
        if row["a"] == 1.0 {
            assert!(row["skipped"].as_str().unwrap().contains("A>B>0"));
        } else {
            assert!(row["skipped"].is_null());
            let checks = row["checks"].as_array().unwrap();
            assert!(!checks.is_empty());
            assert!(checks.iter().all(|c| c["outcome"] == "pass"), "{row}");
        }
    }
}

#[test]
fn seed_flag_overrides_the_config() {
    let cfg = r#"{"seed": 1, "integrator": {"t_end": 1.0}}"#;
    let (a, _da) = twocentre(&["simulate", "--seed", "9"], Some(cfg));
    let (b, _db) = twocentre(&["simulate"], Some(r#"{"seed": 9, "integrator": {"t_end": 1.0}}"#));
    assert_eq!((a.code, b.code), (0, 0));
    let read = |r: &Run| std::fs::read(r.out.join("trajectory.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}
