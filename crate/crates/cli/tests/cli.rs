//! End-to-end tests of the `loewner-lab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loewner-lab"))
}

fn run(args: &[&str], out: &Path) -> Output {
    bin()
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn last_point(csv: &str) -> (f64, f64) {
    let row: Vec<f64> = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    (row[1], row[2])
}

#[test]
fn trace_wang_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["trace", "--family", "wang", "--theta", "1.0471975511965979"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("trace_wang.csv")).unwrap();
    assert!(csv.starts_with("t,x,y\n"));
    let (x, y) = last_point(&csv);
    assert!(
        (x - 0.5).abs() < 2e-3 && (y - 3f64.sqrt() / 2.0).abs() < 2e-3,
        "{x} {y}"
    );
    let svg = fs::read_to_string(dir.path().join("trace_wang.svg")).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("<circle") && svg.contains("<line"));
}

#[test]
fn trace_gamma0_ends_near_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["trace", "--family", "gamma0", "--format", "csv,json"],
        dir.path(),
    );
    assert!(o.status.success());
    let (x, y) = last_point(&fs::read_to_string(dir.path().join("trace_gamma0.csv")).unwrap());
    assert!((x - 1.0).abs() < 2e-3 && y.abs() < 2e-3, "{x} {y}");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("trace_gamma0.json")).unwrap())
            .unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["family"], "gamma0");
}

#[test]
fn trace_sqrt_zero_is_vertical() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "trace",
            "--family",
            "sqrt",
            "--c",
            "0",
            "--steps",
            "200",
            "--samples",
            "20",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("trace_sqrt.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let row: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(row[1].abs() < 1e-12);
        assert!((row[2] - 2.0 * row[0].sqrt()).abs() < 1e-12);
    }
}

#[test]
fn trace_requires_family_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["trace", "--family", "wang"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--theta"));
    let o = run(
        &["trace", "--family", "emw", "--x0", "1", "--y0", "2"],
        dir.path(),
    );
    assert!(!o.status.success());
}

#[test]
fn verify_subset_passes_and_reports_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--only", "sle", "--tol", "2"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS 05_sle_identifications"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["tolerance_scale"], 2.0);
    assert_eq!(doc["criteria"].as_array().unwrap().len(), 1);
    assert_eq!(doc["pass"], true);
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["verify", "--only", "emw_collision", "--tol", "1e-30"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL 03_emw_collision"));
    let o = run(&["verify", "--only", "nothing-matches"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn compare_rejects_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["compare", "--deltas", ""], dir.path());
    assert!(!o.status.success());
}

#[test]
fn compare_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "compare",
        "--deltas",
        "1e-3,1e-4,1e-5",
        "--steps",
        "1000",
        "--format",
        "csv,svg,json",
    ];
    assert!(run(&args, a.path()).status.success());
    let o = bin()
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("LOEWNER_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 12);
    for n in names {
        assert_eq!(
            fs::read(a.path().join(&n)).unwrap(),
            fs::read(b.path().join(&n)).unwrap(),
            "{n:?} differs"
        );
    }
    let csv = fs::read_to_string(a.path().join("local_curve.csv")).unwrap();
    assert!(csv.starts_with("param,num,den,ratio\n"));
}

#[test]
fn bad_thread_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["trace", "--family", "sqrt", "--steps", "10", "--out"])
        .arg(dir.path())
        .env("LOEWNER_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert!(!o.status.success());
}
