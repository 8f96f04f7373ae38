//! Implementations of the subcommands.

use crate::{CompareArgs, Family, Format, TraceArgs, VerifyArgs};
use anyhow::{bail, ensure, Context, Result};
use loewner_lab::compare::{
    arc_exact_ratios, asymptotic_ratio_tables, local_ratio_curve, local_ratio_weld,
    same_weld_distinct_curves,
};
use loewner_lab::drivers::{
    arc_time_for_angle, arc_time_for_ratio, circular_arc, emw_lambda, sqrt_c_from_alpha,
    sqrt_driver, universal_gamma_lambda, universal_truncation_time, wang_lambda_down,
};
use loewner_lab::energy::{energy_quadrature, DEFAULT_PANELS};
use loewner_lab::families::gamma0_lambda;
use loewner_lab::loewner_flow::{end_graded_grid, trace_curve_grid, trace_curve_sampled};
use loewner_lab::output::{
    csv_string, curve_csv, json_num, svg_polylines, CheckResult, SvgOptions, REPORT_SCHEMA,
};
use loewner_lab::suite::{run_suite, SuiteConfig};
use loewner_lab::{CurveTrace, Driver};
use serde_json::{json, Value};
use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn require(v: Option<f64>, flag: &str, family: &str) -> Result<f64> {
    v.with_context(|| format!("--family {family} needs {flag}"))
}

/// Driver, capacity horizon, whether to grade the grid towards the end, and JSON parameters.
fn family_driver(a: &TraceArgs) -> Result<(Driver, f64, bool, Value)> {
    Ok(match a.family {
        Family::Wang => {
            let theta = require(a.theta, "--theta", "wang")?;
            let d = wang_lambda_down(theta)?;
            (d.clone(), d.horizon(), false, json!({ "theta": theta }))
        }
        Family::Emw => {
            let (x0, y0) = (require(a.x0, "--x0", "emw")?, require(a.y0, "--y0", "emw")?);
            let d = emw_lambda(x0, y0)?;
            (d.clone(), d.horizon(), false, json!({ "x0": x0, "y0": y0 }))
        }
        Family::Gamma0 => {
            let d = gamma0_lambda()?;
            (d.clone(), d.horizon(), true, json!({}))
        }
        Family::Universal => {
            let d = universal_gamma_lambda();
            match a.ratio {
                Some(r) => (
                    d,
                    universal_truncation_time(r)?,
                    false,
                    json!({ "ratio": r }),
                ),
                None => {
                    let t = 0.99 * d.horizon();
                    (d, t, false, json!({ "fraction": 0.99 }))
                }
            }
        }
        Family::Arc => {
            let d = circular_arc();
            let (t, params) = match (a.theta, a.alpha) {
                (Some(_), Some(_)) => bail!("--family arc takes --theta or --alpha, not both"),
                (Some(th), None) => (arc_time_for_angle(th)?, json!({ "theta": th })),
                (None, Some(al)) => (arc_time_for_ratio(al)?, json!({ "alpha": al })),
                (None, None) => (d.horizon(), json!({})),
            };
            (d, t, t == 0.125, params)
        }
        Family::Sqrt => {
            let c = match (a.c, a.alpha) {
                (Some(_), Some(_)) => bail!("--family sqrt takes --c or --alpha, not both"),
                (Some(c), None) => c,
                (None, Some(al)) => sqrt_c_from_alpha(al)?,
                (None, None) => 0.0,
            };
            (sqrt_driver(c, 1.0), 1.0, false, json!({ "c": c }))
        }
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Wang => "wang",
        Family::Emw => "emw",
        Family::Gamma0 => "gamma0",
        Family::Universal => "universal",
        Family::Arc => "arc",
        Family::Sqrt => "sqrt",
    }
}

fn trace_json(
    name: &str,
    params: Value,
    steps: usize,
    t_end: f64,
    tr: &CurveTrace,
    energy: Value,
) -> Value {
    let tip = tr.tip();
    json!({
        "schema": REPORT_SCHEMA,
        "family": name,
        "params": params,
        "steps": steps,
        "capacity_time": t_end,
        "tip": [json_num(tip.re), json_num(tip.im)],
        "energy": energy,
        "samples": tr.times.iter().zip(&tr.points).map(|(t, z)| json!([t, z.re, z.im])).collect::<Vec<_>>(),
    })
}

/// `trace`: curve CSV `t,x,y`, JSON summary and SVG polyline.
pub fn trace(a: &TraceArgs) -> Result<()> {
    ensure!(
        a.steps > 0 && a.samples > 0,
        "--steps and --samples must be positive"
    );
    let (driver, t_end, graded, params) = family_driver(a)?;
    let tr = if graded {
        trace_curve_grid(&driver, &end_graded_grid(t_end, a.steps, 2.0), a.samples)?
    } else {
        trace_curve_sampled(&driver, t_end, a.steps, a.samples)?
    };
    let name = family_name(a.family);
    for f in &a.format {
        match f {
            Format::Csv => write(
                &a.out,
                &format!("trace_{name}.csv"),
                &curve_csv(&tr.times, &tr.points),
            )?,
            Format::Svg => {
                let opts = SvgOptions {
                    unit_circle: matches!(a.family, Family::Wang),
                    ..Default::default()
                };
                write(
                    &a.out,
                    &format!("trace_{name}.svg"),
                    &svg_polylines(&[&tr.points], opts),
                )?
            }
            Format::Json => {
                let energy = energy_quadrature(&driver, t_end, DEFAULT_PANELS)
                    .map(|r| r.to_json())
                    .unwrap_or_else(|e| json!({ "error": e.to_string() }));
                let doc = trace_json(name, params.clone(), a.steps, t_end, &tr, energy);
                write(
                    &a.out,
                    &format!("trace_{name}.json"),
                    &format!("{}\n", serde_json::to_string_pretty(&doc)?),
                )?
            }
        }
    }
    let tip = tr.tip();
    println!(
        "tip = {:?} + {:?}i at capacity time {:?}",
        tip.re, tip.im, t_end
    );
    Ok(())
}

/// `verify`: prints one line per criterion, writes the JSON report, returns overall pass.
pub fn verify(a: &VerifyArgs) -> Result<bool> {
    ensure!(
        a.tol > 0.0 && a.tol.is_finite(),
        "--tol must be a positive multiplier"
    );
    let cfg = SuiteConfig { tol_scale: a.tol };
    let groups = run_suite(&cfg, a.only.as_deref());
    ensure!(
        !groups.is_empty(),
        "no criterion matches --only {:?}",
        a.only.as_deref().unwrap_or("")
    );
    let mut all = true;
    for (key, checks) in &groups {
        let pass = checks.iter().all(CheckResult::pass);
        all &= pass;
        println!("{} {key}", if pass { "PASS" } else { "FAIL" });
        for c in checks.iter().filter(|c| !c.pass()) {
            println!(
                "  {} residual {:e} > tolerance {:e} {}",
                c.check,
                c.residual,
                c.tolerance,
                c.note.as_deref().unwrap_or("")
            );
        }
    }
    let report = loewner_lab::output::report_json(&groups, cfg.tol_scale);
    let text = format!("{}\n", serde_json::to_string_pretty(&report)?);
    match &a.out {
        Some(dir) => write(dir, "verify.json", &text)?,
        None => print!("{text}"),
    }
    Ok(all)
}

/// `compare`: local 9/8 sweeps, circular-arc table, asymptotic tables and the
/// same-welding figure.
pub fn compare(a: &CompareArgs) -> Result<()> {
    ensure!(!a.deltas.is_empty(), "--deltas must not be empty");
    ensure!(a.steps > 0, "--steps must be positive");
    let lin = Driver::linear(1.0, 1.0);
    let (curve, weld) = rayon::join(
        || local_ratio_curve(&lin, &a.deltas),
        || local_ratio_weld(&lin, &a.deltas),
    );
    let (curve, weld) = (curve?, weld?);
    let arc_thetas: Vec<f64> = (1..=16).map(|k| FRAC_PI_2 * k as f64 / 17.0).collect();
    let arc = arc_exact_ratios(&arc_thetas)?;
    let asym_thetas: Vec<f64> = (1..=12)
        .flat_map(|k| {
            let e = 0.4 * 0.6f64.powi(k - 1);
            [FRAC_PI_2 - e, FRAC_PI_2 + e]
        })
        .collect();
    let (asym_w, asym_t) = asymptotic_ratio_tables(&asym_thetas)?;
    let fig = same_weld_distinct_curves(a.theta, a.steps, 400)?;
    let want = |f: Format| a.format.contains(&f);
    if want(Format::Csv) {
        write(&a.out, "local_curve.csv", &curve.to_csv())?;
        write(&a.out, "local_weld.csv", &weld.to_csv())?;
        let arc_csv = csv_string(
            &["param", "num", "den", "ratio"],
            arc.iter()
                .map(|r| [r.theta, r.quadrature, -8.0 * r.theta.sin().ln(), r.ratio]),
        );
        write(&a.out, "arc_ratios.csv", &arc_csv)?;
        write(&a.out, "asymptotic_weld.csv", &asym_w.to_csv())?;
        write(&a.out, "asymptotic_tip.csv", &asym_t.to_csv())?;
        let rows = fig
            .wang
            .iter()
            .map(|z| [0.0, z.re, z.im])
            .chain(fig.emw.iter().map(|z| [1.0, z.re, z.im]));
        write(
            &a.out,
            "same_weld.csv",
            &csv_string(&["curve", "x", "y"], rows),
        )?;
    }
    if want(Format::Svg) {
        write(&a.out, "local_curve.svg", &curve.to_svg(true))?;
        write(&a.out, "local_weld.svg", &weld.to_svg(true))?;
        write(&a.out, "asymptotic_weld.svg", &asym_w.to_svg(false))?;
        write(&a.out, "asymptotic_tip.svg", &asym_t.to_svg(false))?;
        write(&a.out, "same_weld.svg", &fig.to_svg())?;
    }
    if want(Format::Json) {
        let sweep = |s: &loewner_lab::compare::RatioSweep| {
            json!({
                "label": s.label,
                "params": s.params,
                "ratios": s.ratios,
                "extrapolated": s.extrapolated.map(json_num),
                "order": s.order.map(json_num),
            })
        };
        let doc = json!({
            "schema": REPORT_SCHEMA,
            "local_curve": sweep(&curve),
            "local_weld": sweep(&weld),
            "asymptotic_weld": sweep(&asym_w),
            "asymptotic_tip": sweep(&asym_t),
            "same_weld": { "theta": fig.theta, "hausdorff": fig.distance, "emw_tip_arg": fig.emw_tip_arg },
        });
        write(
            &a.out,
            "compare.json",
            &format!("{}\n", serde_json::to_string_pretty(&doc)?),
        )?;
    }
    if let Some(l) = curve.extrapolated {
        println!("curve-side local ratio limit ≈ {l:?}");
    }
    if let Some(l) = weld.extrapolated {
        println!("welding-side local ratio limit ≈ {l:?}");
    }
    println!(
        "same-welding Hausdorff distance at θ = {:?}: {:?}",
        fig.theta, fig.distance
    );
    Ok(())
}
