//! The acceptance suite: fourteen numeric criteria cross-validating the
//! closed forms, flows, weldings and comparisons of the library.

use crate::compare::{
    arc_exact_ratios, asymptotic_ratio_tables, local_ratio_curve, local_ratio_weld, tip_expansion,
};
use crate::drivers::{emw_lambda, emw_xi, wang_lambda_down, wang_xi, EmwParams, WangParams};
use crate::energy::{emw_energy, energy_quadrature, wang_energy, DEFAULT_PANELS};
use crate::error::Result;
use crate::families::{
    distinctness_gap, emw_universality_check, gamma0_trace, gamma_square_circle_distance,
    rational_map_r, universal_trace, variety_residual_gamma0, variety_residual_universal,
    wang_ode_report, wang_universality_check,
};
use crate::loewner_flow::{hitting_time, tip_point, trace_tip, Driver};
use crate::numerics::log_log_slope;
use crate::output::{report_json, CheckResult};
use crate::sle_zero::{
    conserved_rate_samples, driver_match, emw_sle44, verify_arc_sle33, verify_slit_sle22,
    verify_wang_sle8,
};
use crate::welding::{
    emw_weld_residual, emw_weld_solve, infinitesimal_welding_check, wang_weld, weld_from_driver,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

/// Suite-wide settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Multiplier applied to every upper-bound tolerance (`1.0` = pinned values).
    pub tol_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { tol_scale: 1.0 }
    }
}

impl SuiteConfig {
    fn tol(&self, t: f64) -> f64 {
        t * self.tol_scale
    }
}

/// One acceptance criterion.
#[derive(Clone, Copy)]
pub struct Criterion {
    /// Number `1..=14`.
    pub id: u8,
    /// Short identifier used for filtering.
    pub name: &'static str,
    /// One-line description.
    pub summary: &'static str,
    run: fn(&SuiteConfig) -> Vec<CheckResult>,
}

impl Criterion {
    /// Runs the criterion's checks.
    pub fn run(&self, cfg: &SuiteConfig) -> Vec<CheckResult> {
        (self.run)(cfg)
    }

    /// `"NN_name"`, the key used in reports.
    pub fn key(&self) -> String {
        format!("{:02}_{}", self.id, self.name)
    }
}

impl std::fmt::Debug for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Criterion")
            .field("id", &self.id)
            .field("name", &self.name)
            .finish()
    }
}

/// Upper-bound check: `residual ≤ tol`; errors become failed checks.
fn check(name: &str, params: Value, tol: f64, f: impl FnOnce() -> Result<f64>) -> CheckResult {
    match f() {
        Ok(r) if r.is_nan() => CheckResult::failed(name, params, tol, "residual is NaN"),
        Ok(r) => CheckResult::new(name, params, r.abs(), tol),
        Err(e) => CheckResult::failed(name, params, tol, e.to_string()),
    }
}

/// Lower-bound check `value ≥ bound`, reported as residual `max(0, bound − value)`
/// against tolerance 0 (not affected by the tolerance scale).
fn at_least(name: &str, params: Value, bound: f64, f: impl FnOnce() -> Result<f64>) -> CheckResult {
    match f() {
        Ok(v) if v.is_finite() => {
            let mut c = CheckResult::new(name, params, (bound - v).max(0.0), 0.0);
            c.note = Some(format!("observed {v:?}, required ≥ {bound:?}"));
            c
        }
        Ok(v) => CheckResult::failed(name, params, 0.0, format!("observed {v:?}")),
        Err(e) => CheckResult::failed(name, params, 0.0, e.to_string()),
    }
}

fn c01_wang_energy(cfg: &SuiteConfig) -> Vec<CheckResult> {
    [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3]
        .into_par_iter()
        .map(|theta| {
            check(
                "wang_energy_quadrature",
                json!({ "theta": theta }),
                cfg.tol(1e-6),
                || {
                    let xi = wang_xi(theta)?;
                    let q = energy_quadrature(&xi, xi.horizon(), DEFAULT_PANELS)?.value;
                    let exact = wang_energy(theta)?;
                    Ok((q - exact) / exact)
                },
            )
        })
        .collect()
}

fn c02_wang_tip(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![check(
        "wang_tip_trace",
        json!({ "theta": FRAC_PI_3, "steps": 20000 }),
        cfg.tol(2e-3),
        || {
            let d = wang_lambda_down(FRAC_PI_3)?;
            Ok(
                (trace_tip(&d, d.horizon(), 20_000)? - Complex64::from_polar(1.0, FRAC_PI_3))
                    .norm(),
            )
        },
    )]
}

fn c03_emw_collision(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let params = json!({ "x0": -1.0, "y0": 2.0 });
    let mut out: Vec<CheckResult> = [-1.0, 2.0]
        .into_iter()
        .map(|x| {
            check(
                "emw_collision_time",
                json!({ "x0": -1.0, "y0": 2.0, "point": x }),
                cfg.tol(1e-6),
                || {
                    let xi = emw_xi(-1.0, 2.0)?;
                    let t = hitting_time(&xi, x)?.unwrap_or(f64::INFINITY);
                    Ok(t - 13.0 / 24.0)
                },
            )
        })
        .collect();
    out.push(check("emw_terminal_driver", params, cfg.tol(1e-9), || {
        let p = EmwParams::new(-1.0, 2.0)?;
        Ok(emw_lambda(-1.0, 2.0)?.eval(p.tau) + 2.0 / 3.0)
    }));
    out
}

fn c04_emw_energy(cfg: &SuiteConfig) -> Vec<CheckResult> {
    [0.25, 0.5, 0.75]
        .into_par_iter()
        .map(|r| {
            check(
                "emw_energy_quadrature",
                json!({ "x0": -r, "y0": 1.0 }),
                cfg.tol(1e-6),
                || {
                    let xi = emw_xi(-r, 1.0)?;
                    let q = energy_quadrature(&xi, xi.horizon(), DEFAULT_PANELS)?.value;
                    let exact = emw_energy(r)?;
                    Ok((q - exact) / exact)
                },
            )
        })
        .collect()
}

fn c05_sle(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check(
            "sle0_minus8_wang",
            json!({ "theta": FRAC_PI_3 }),
            cfg.tol(1e-6),
            || Ok(verify_wang_sle8(FRAC_PI_3, 4000)?.sup_error),
        ),
        check(
            "sle0_minus4_emw",
            json!({ "x0": -1.0, "y0": 2.0 }),
            cfg.tol(1e-6),
            || {
                let p = EmwParams::new(-1.0, 2.0)?;
                let traj = emw_sle44(-1.0, 2.0, 0.9 * p.tau, 4000)?;
                let xi = emw_xi(-1.0, 2.0)?;
                Ok(driver_match(&traj, |t| xi.eval(t), 0.9 * p.tau).sup_error)
            },
        ),
        check(
            "sle0_minus2_slit_c",
            json!({ "start": [0.0, -2.0 * 2f64.sqrt(), 2f64.sqrt()] }),
            cfg.tol(1e-5),
            || {
                let fit = verify_slit_sle22(4000)?;
                Ok((fit.c - 2f64.sqrt()) / 2f64.sqrt())
            },
        ),
        check(
            "sle0_minus3_arc_identity",
            json!({}),
            cfg.tol(1e-10),
            || Ok(verify_arc_sle33(4000)?.max_identity_residual()),
        ),
        check(
            "sle0_minus3_arc_driver",
            json!({ "t0": 0.01 }),
            cfg.tol(1e-6),
            || Ok(verify_arc_sle33(4000)?.driver_sup_error),
        ),
    ]
}

fn c06_conserved(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check(
            "emw_conserved_rate",
            json!({ "x0": -1.0, "y0": 2.0 }),
            cfg.tol(1e-6),
            || {
                let p = EmwParams::new(-1.0, 2.0)?;
                let traj = emw_sle44(-1.0, 2.0, 0.9 * p.tau, 4000)?;
                Ok(conserved_rate_samples(&traj)
                    .iter()
                    .fold(0.0, |a, r| a.max((r + 24.0).abs())))
            },
        ),
        check(
            "wang_conservation",
            json!({ "theta": FRAC_PI_3 }),
            cfg.tol(1e-8),
            || Ok(wang_ode_report(FRAC_PI_3, 4000)?.conservation),
        ),
    ]
}

const LOCAL_DELTAS: [f64; 3] = [1e-3, 1e-4, 1e-5];

fn c07_local(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let (curve, weld) = rayon::join(
        || local_ratio_curve(&Driver::linear(1.0, 1.0), &LOCAL_DELTAS),
        || local_ratio_weld(&Driver::linear(1.0, 1.0), &LOCAL_DELTAS),
    );
    let mut out = Vec::new();
    for (name, sweep) in [("curve", curve), ("weld", weld)] {
        out.push(check(
            &format!("local_{name}_ratio"),
            json!({ "delta": 1e-4 }),
            cfg.tol(0.01),
            || {
                let s = sweep.as_ref().map_err(Clone::clone)?;
                Ok(s.ratios[1] / 1.125 - 1.0)
            },
        ));
        out.push(check(
            &format!("local_{name}_richardson"),
            json!({ "deltas": LOCAL_DELTAS }),
            cfg.tol(2e-3),
            || {
                let s = sweep.as_ref().map_err(Clone::clone)?;
                Ok(s.extrapolated.unwrap_or(f64::NAN) / 1.125 - 1.0)
            },
        ));
    }
    out
}

fn c08_arc(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let thetas = [FRAC_PI_4, FRAC_PI_3];
    let rows = arc_exact_ratios(&thetas);
    let mut out = Vec::new();
    for (i, theta) in thetas.iter().enumerate() {
        let row = rows.as_ref().map(|r| r[i]).map_err(Clone::clone);
        out.push(check(
            "arc_energy_quadrature",
            json!({ "theta": theta }),
            cfg.tol(1e-8),
            || {
                let r = row.clone()?;
                Ok(r.quadrature - r.closed_form)
            },
        ));
        out.push(check(
            "arc_ratio",
            json!({ "theta": theta }),
            cfg.tol(1e-6),
            || Ok(row.clone()?.ratio - 1.125),
        ));
    }
    out
}

fn c09_asymptotic(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let thetas = [FRAC_PI_2 - 0.01, FRAC_PI_2 + 0.01];
    let tables = asymptotic_ratio_tables(&thetas);
    let weld_c = (PI / 4.0).powi(2);
    let tip_c = (4.0 / PI).powi(2);
    let mut out = Vec::new();
    for (i, theta) in thetas.iter().enumerate() {
        let get = |side: usize| -> Result<f64> {
            let (w, t) = tables.as_ref().map_err(Clone::clone)?;
            Ok(if side == 0 { w.ratios[i] } else { t.ratios[i] })
        };
        out.push(check(
            "asymptotic_weld_side",
            json!({ "theta": theta }),
            cfg.tol(0.02),
            || Ok(get(0)? / weld_c - 1.0),
        ));
        out.push(check(
            "asymptotic_tip_side",
            json!({ "theta": theta }),
            cfg.tol(0.02),
            || Ok(get(1)? / tip_c - 1.0),
        ));
        out.push(check(
            "asymptotic_product",
            json!({ "theta": theta }),
            cfg.tol(0.04),
            || Ok(get(0)? * get(1)? - 1.0),
        ));
    }
    out
}

fn c10_varieties(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let (g0, gu) = rayon::join(
        || gamma0_trace(20_000, 400),
        || universal_trace(0.99, 20_000, 400),
    );
    let max_over = |tr: &Result<crate::CurveTrace>, f: &dyn Fn(Complex64) -> f64| -> Result<f64> {
        let tr = tr.as_ref().map_err(Clone::clone)?;
        Ok(tr.points.iter().map(|z| f(*z)).fold(0.0, f64::max))
    };
    vec![
        check(
            "gamma0_variety",
            json!({ "steps": 20000 }),
            cfg.tol(1e-3),
            || max_over(&g0, &|z| variety_residual_gamma0(z).residual.abs()),
        ),
        check(
            "universal_variety",
            json!({ "steps": 20000, "fraction": 0.99 }),
            cfg.tol(1e-3),
            || max_over(&gu, &|z| variety_residual_universal(z).residual.abs()),
        ),
        check(
            "universal_square_circle",
            json!({ "steps": 20000, "fraction": 0.99 }),
            cfg.tol(1e-3),
            || max_over(&gu, &gamma_square_circle_distance),
        ),
        check(
            "gamma0_rational_map_real",
            json!({ "steps": 20000 }),
            cfg.tol(1e-3),
            || max_over(&g0, &|z| rational_map_r(z).im.abs()),
        ),
    ]
}

fn c11_weldings(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        check(
            "wang_numeric_welding",
            json!({ "theta": FRAC_PI_3, "points": 20 }),
            cfg.tol(1e-5),
            || {
                let xi = wang_xi(FRAC_PI_3)?;
                // 21 pairs: the last is the welding endpoint, the first 20 are interior.
                let w = weld_from_driver(&xi, xi.horizon(), 21)?;
                if !w.failures.is_empty() {
                    return Err(crate::LabError::Solver(format!(
                        "{} welding pairs failed",
                        w.failures.len()
                    )));
                }
                let (xt, _) = crate::welding::wang_weld_endpoints(FRAC_PI_3)?;
                w.pairs[..20].iter().try_fold(0.0f64, |a, p| {
                    Ok(a.max((wang_weld(FRAC_PI_3, p.x.max(xt))? - p.y).abs()))
                })
            },
        ),
        check(
            "emw_implicit_residual",
            json!({ "x0": -1.0, "y0": 2.0, "points": 20 }),
            cfg.tol(1e-8),
            || {
                (1..=20).try_fold(0.0f64, |a, k| {
                    let x = -(k as f64) / 20.0;
                    let y = emw_weld_solve(-1.0, 2.0, x)?;
                    Ok(a.max(emw_weld_residual(-1.0, 2.0, x, y)))
                })
            },
        ),
    ]
}

fn c12_universality(cfg: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = vec![check(
        "wang_universality_hausdorff",
        json!({ "theta": FRAC_PI_3, "alpha": FRAC_PI_4, "steps": 20000 }),
        cfg.tol(1e-3),
        || wang_universality_check(FRAC_PI_3, FRAC_PI_4, 20_000, 400),
    )];
    for r in [0.25, 0.5] {
        out.push(check(
            "emw_truncation_ratio",
            json!({ "r": r }),
            cfg.tol(1e-4),
            || emw_universality_check(r, 2000),
        ));
    }
    out
}

const EXPANSION_DELTAS: [f64; 3] = [1e-3, 1e-4, 1e-5];

fn c13_expansions(_cfg: &SuiteConfig) -> Vec<CheckResult> {
    let lin = Driver::linear(1.0, 1.0);
    let weld = infinitesimal_welding_check(&lin, &EXPANSION_DELTAS);
    vec![
        at_least(
            "curve_expansion_order",
            json!({ "deltas": EXPANSION_DELTAS }),
            1.4,
            || {
                let res = EXPANSION_DELTAS
                    .iter()
                    .map(|&d| Ok((tip_point(&lin, d, 2000)? - tip_expansion(1.0, d)).norm()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(log_log_slope(&EXPANSION_DELTAS, &res))
            },
        ),
        at_least(
            "welding_expansion_order_x",
            json!({ "deltas": EXPANSION_DELTAS }),
            1.4,
            || Ok(weld.as_ref().map_err(Clone::clone)?.order_x),
        ),
        at_least(
            "welding_expansion_order_y",
            json!({ "deltas": EXPANSION_DELTAS }),
            1.4,
            || Ok(weld.as_ref().map_err(Clone::clone)?.order_y),
        ),
    ]
}

fn c14_distinctness(cfg: &SuiteConfig) -> Vec<CheckResult> {
    vec![
        at_least(
            "distinct_drivers",
            json!({ "theta": FRAC_PI_3 }),
            1e-3,
            || distinctness_gap(FRAC_PI_3, 400),
        ),
        check(
            "symmetric_case_zero",
            json!({ "theta": FRAC_PI_2 }),
            cfg.tol(1e-15),
            || {
                let w = wang_xi(FRAC_PI_2)?;
                let e = emw_xi(-1.0, 1.0)?;
                let tau = WangParams::new(FRAC_PI_2)?.tau.max(e.horizon());
                Ok((0..=100)
                    .map(|k| {
                        let t = tau * k as f64 / 100.0;
                        w.eval(t.min(w.horizon()))
                            .abs()
                            .max(e.eval(t.min(e.horizon())).abs())
                    })
                    .fold(0.0, f64::max))
            },
        ),
    ]
}

/// All fourteen criteria in order.
pub fn criteria() -> Vec<Criterion> {
    macro_rules! c {
        ($id:expr, $name:expr, $summary:expr, $f:ident) => {
            Criterion {
                id: $id,
                name: $name,
                summary: $summary,
                run: $f,
            }
        };
    }
    vec![
        c!(
            1,
            "wang_energy",
            "point-constrained minimizer energy by quadrature",
            c01_wang_energy
        ),
        c!(
            2,
            "wang_tip",
            "traced minimizer ends at e^{iθ}",
            c02_wang_tip
        ),
        c!(
            3,
            "emw_collision",
            "welded points collide at τ; terminal driver value",
            c03_emw_collision
        ),
        c!(
            4,
            "emw_energy",
            "welding-constrained minimizer energy by quadrature",
            c04_emw_energy
        ),
        c!(
            5,
            "sle_identifications",
            "SLE₀ force-point systems reproduce the closed-form drivers",
            c05_sle
        ),
        c!(
            6,
            "conserved_rates",
            "first integrals along the ODE systems",
            c06_conserved
        ),
        c!(
            7,
            "local_nine_eighths",
            "local energy ratios tend to 9/8",
            c07_local
        ),
        c!(
            8,
            "arc_nine_eighths",
            "orthogonal circular arc has exactly 9/8 the minimal energy",
            c08_arc
        ),
        c!(
            9,
            "asymptotic_constants",
            "(π/4)² and (4/π)² near the symmetric case",
            c09_asymptotic
        ),
        c!(
            10,
            "varieties",
            "traced limit curves lie on their algebraic varieties",
            c10_varieties
        ),
        c!(
            11,
            "welding_closed_forms",
            "numeric and implicit weldings match the closed forms",
            c11_weldings
        ),
        c!(
            12,
            "universality",
            "truncations and rescalings of universal curves",
            c12_universality
        ),
        c!(
            13,
            "expansions",
            "small-time curve and welding expansions",
            c13_expansions
        ),
        c!(
            14,
            "distinctness",
            "the two minimizer families differ off the symmetric case",
            c14_distinctness
        ),
    ]
}

/// Criteria whose key (`NN_name`) contains `filter` (all when `None`).
pub fn select(filter: Option<&str>) -> Vec<Criterion> {
    criteria()
        .into_iter()
        .filter(|c| filter.is_none_or(|f| c.key().contains(f) || c.id.to_string() == f))
        .collect()
}

/// Runs the selected criteria (in parallel) and returns `(key, checks)` in order.
pub fn run_suite(cfg: &SuiteConfig, filter: Option<&str>) -> Vec<(String, Vec<CheckResult>)> {
    select(filter)
        .par_iter()
        .map(|c| (c.key(), c.run(cfg)))
        .collect()
}

/// Runs the suite and renders the versioned JSON report.
pub fn suite_report(cfg: &SuiteConfig, filter: Option<&str>) -> (bool, Value) {
    let groups = run_suite(cfg, filter);
    let pass = groups.iter().all(|(_, c)| c.iter().all(CheckResult::pass));
    (pass, report_json(&groups, cfg.tol_scale))
}
