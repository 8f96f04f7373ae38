//! Artifact contracts: report schema, filtering, and CSV layouts.

use loewner_lab::compare::local_ratio_weld;
use loewner_lab::output::REPORT_SCHEMA;
use loewner_lab::sle_zero::emw_sle44;
use loewner_lab::suite::{suite_report, SuiteConfig};
use loewner_lab::Driver;

#[test]
fn filtered_report_has_schema_and_records() {
    let (pass, rep) = suite_report(&SuiteConfig::default(), Some("sle"));
    assert!(pass);
    assert_eq!(rep["schema"], REPORT_SCHEMA);
    let crit = rep["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 1);
    for c in crit[0]["checks"].as_array().unwrap() {
        for key in ["check", "params", "residual", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "missing {key} in {c}");
        }
    }
}

#[test]
fn loosened_tolerance_is_reported() {
    let (_, rep) = suite_report(&SuiteConfig { tol_scale: 10.0 }, Some("arc"));
    assert_eq!(rep["tolerance_scale"], 10.0);
    let tol = rep["criteria"][0]["checks"][0]["tolerance"]
        .as_f64()
        .unwrap();
    assert!((tol - 1e-7).abs() < 1e-20);
}

#[test]
fn csv_values_round_trip() {
    let traj = emw_sle44(-1.0, 2.0, 0.2, 50).unwrap();
    let csv = traj.to_csv();
    let row: Vec<f64> = csv
        .lines()
        .nth(10)
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(row[0], traj.times[9]);
    assert_eq!(row[1], traj.driver[9]);
    assert_eq!(row[4], traj.force_points[9][1].re);

    let sweep = local_ratio_weld(&Driver::linear(1.0, 1.0), &[1e-3, 1e-4]).unwrap();
    let csv = sweep.to_csv();
    assert!(csv.starts_with("param,num,den,ratio\n"));
    assert_eq!(csv.lines().count(), 3);
}
