//! Drives the `bouncer` binary.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn bouncer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bouncer")).args(args).output().expect("binary runs")
}

/// Header plus numeric rows of a CSV file, skipping `#` metadata.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().ok()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<Option<f64>>], name: &str) -> Vec<Option<f64>> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

fn run_to(dir: &tempfile::TempDir, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    let out = bouncer(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let a = run_to(&dir, "a", &["moments", "--nt", "9", "--format", format]);
        let b = run_to(&dir, "b", &["moments", "--nt", "9", "--format", format]);
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }
}

#[test]
fn density_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let path = run_to(&dir, "d.csv", &["density", "--nt", "3", "--tmin", "1", "--tmax", "3"]);
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "x", "density"]);
    let rows: Vec<[f64; 3]> = rows.iter().map(|r| [r[0].unwrap(), r[1].unwrap(), r[2].unwrap()]).collect();
    for t in [1.0, 2.0, 3.0] {
        let snap: Vec<&[f64; 3]> = rows.iter().filter(|r| r[0] == t).collect();
        let last = snap.last().unwrap();
        assert_eq!((last[1], last[2]), (0.0, 0.0));
        // Simpson: odd point count, weights 1,4,2,…,4,1 times h/3.
        let h = snap[1][1] - snap[0][1];
        let n = snap.len();
        assert_eq!(n % 2, 1);
        let sum: f64 = snap
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let w = if i == 0 || i == n - 1 { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * r[2]
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((sum - 1.0).abs() < 1e-9, "t={t}: {sum}");
    }
}

#[test]
fn moments_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = run_to(&dir, "m.csv", &["moments", "--nt", "21"]);
    let (header, rows) = read_csv(&path);
    let t = column(&header, &rows, "t");
    let p2 = column(&header, &rows, "p2_numeric");
    let p2_exact = column(&header, &rows, "p2_exact");
    let x = column(&header, &rows, "x_mean_numeric");
    let approx = column(&header, &rows, "x_mean_approx");
    for (a, b) in p2.iter().zip(&p2_exact) {
        assert!((a.unwrap() / b.unwrap() - 1.0).abs() < 1e-6);
    }
    // Demo packet collides at t = 2; β_t = √5 there.
    let at = t.iter().position(|&v| v == Some(2.0)).unwrap();
    let leading = -(5.0f64).sqrt() / PI.sqrt();
    assert!((x[at].unwrap() / leading - 1.0).abs() < 0.05);
    assert!(approx[0].is_none() && approx[at].is_some());
}

#[test]
fn autocorrelation_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = run_to(&dir, "a.csv", &["autocorr", "--nt", "25"]);
    let (header, rows) = read_csv(&path);
    let abs2 = column(&header, &rows, "abs2_a");
    assert!((abs2[0].unwrap() - 1.0).abs() < 1e-15);
    assert!(abs2.windows(2).all(|w| w[1].unwrap() < w[0].unwrap()));
    for part in ["re_a", "im_a"] {
        let closed = column(&header, &rows, part);
        let numeric = column(&header, &rows, &format!("{part}_numeric"));
        for (a, b) in closed.iter().zip(&numeric) {
            assert!((a.unwrap() - b.unwrap()).abs() < 1e-6);
        }
    }
}

#[test]
fn json_carries_schema_and_units() {
    let dir = tempfile::tempdir().unwrap();
    let path = run_to(&dir, "f.json", &["moments", "--kind", "free", "--nt", "3", "--format", "json", "--hbar", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["metadata"]["kind"], "free");
    assert_eq!(doc["metadata"]["units"]["hbar"].as_f64(), Some(2.0));
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert!(records[0]["x_mean_approx"].is_null());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# packet\nkind = bouncer\nx0 = -6\np0 = 3\nnt = 4\n").unwrap();
    let path = run_to(&dir, "c.json", &["moments", "--config", cfg.to_str().unwrap(), "--p0", "2", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(doc["metadata"]["params"]["x0"].as_f64(), Some(-6.0));
    assert_eq!(doc["metadata"]["params"]["p0"].as_f64(), Some(2.0));
    assert_eq!(doc["records"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["moments", "--x0", "1"][..],
        &["moments", "--kind", "psi0", "--p0", "1"],
        &["autocorr", "--kind", "psi0"],
        &["moments", "--nx", "2"],
        &["moments", "--kind", "sideways"],
        &["launch"],
    ] {
        let out = bouncer(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty() && out.stdout.is_empty());
    }
}

#[test]
fn narrow_grid_is_reported() {
    let out = bouncer(&["moments", "--xmin", "-5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tail"));
}

#[test]
fn validate_reports_each_check_once() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bouncer(&["validate", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let ids: Vec<&str> = doc["records"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let expected: Vec<String> = (1..=11).map(|i| format!("C{i}")).collect();
    assert_eq!(ids, expected);
    assert!(doc["records"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn validate_with_coarse_grid_fails() {
    let out = bouncer(&["validate", "--xmin", "-5"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("FAIL") && stderr.contains("tail"), "{stderr}");
}
