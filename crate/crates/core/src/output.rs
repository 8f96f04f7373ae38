//! Deterministic artifact emitters: CSV tables, hand-written SVG plots and
//! versioned JSON verification reports.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;

/// JSON report schema version.
pub const REPORT_SCHEMA: u64 = 1;

/// Formats a number with the shortest representation that round-trips
/// (exponent notation for very large or small magnitudes).
pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

/// Builds a CSV document from a header and numeric rows.
pub fn csv_string<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: AsRef<[f64]>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.as_ref().iter().map(|v| fmt_num(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// CSV `t,x,y` of a sampled curve.
pub fn curve_csv(times: &[f64], points: &[Complex64]) -> String {
    csv_string(
        &["t", "x", "y"],
        times.iter().zip(points).map(|(t, z)| [*t, z.re, z.im]),
    )
}

/// Options for [`svg_polylines`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Pixel width of the image.
    pub width: f64,
    /// Draw the unit circle.
    pub unit_circle: bool,
    /// Draw the real axis.
    pub real_axis: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            width: 600.0,
            unit_circle: false,
            real_axis: true,
        }
    }
}

/// Renders one or more complex polylines as an SVG document. The view box is
/// fitted to the data (plus optional unit circle) with a 5% margin; the
/// imaginary axis points up.
pub fn svg_polylines(curves: &[&[Complex64]], opts: SvgOptions) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for c in curves {
        for z in c.iter().filter(|z| z.re.is_finite() && z.im.is_finite()) {
            xs.push(z.re);
            ys.push(z.im);
        }
    }
    if opts.unit_circle {
        xs.extend([-1.0, 1.0]);
        ys.extend([-1.0, 1.0]);
    }
    if xs.is_empty() {
        xs.extend([-1.0, 1.0]);
        ys.extend([0.0, 1.0]);
    }
    let fold = |v: &[f64]| {
        v.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                (a.min(x), b.max(x))
            })
    };
    let (mut x0, mut x1) = fold(&xs);
    let (mut y0, mut y1) = fold(&ys);
    if opts.real_axis {
        y0 = y0.min(0.0);
        y1 = y1.max(0.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let m = 0.05 * span;
    x0 -= m;
    x1 += m;
    y0 -= m;
    y1 += m;
    let (w, h) = (x1 - x0, y1 - y0);
    let px_w = opts.width;
    let px_h = opts.width * h / w;
    let map = |z: Complex64| ((z.re - x0) / w * px_w, (y1 - z.im) / h * px_h);
    let stroke = 0.002 * px_w;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
        fmt_num(px_w),
        fmt_num(px_h),
        fmt_num(px_w),
        fmt_num(px_h)
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    if opts.real_axis {
        let (ax, ay) = map(Complex64::new(x0, 0.0));
        let (bx, _) = map(Complex64::new(x1, 0.0));
        let _ = writeln!(
            s,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"gray\" stroke-width=\"{:.3}\"/>",
            ax, ay, bx, ay, stroke
        );
    }
    if opts.unit_circle {
        let (cx, cy) = map(Complex64::new(0.0, 0.0));
        let _ = writeln!(
            s,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"lightgray\" stroke-width=\"{:.3}\"/>",
            cx,
            cy,
            px_w / w,
            stroke
        );
    }
    let colors = ["black", "crimson", "steelblue", "darkgreen", "darkorange"];
    for (k, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c
            .iter()
            .filter(|z| z.re.is_finite() && z.im.is_finite())
            .map(|z| {
                let (a, b) = map(*z);
                format!("{a:.3},{b:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3}\"/>",
            pts.join(" "),
            colors[k % colors.len()],
            1.5 * stroke
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Outcome of one numeric verification.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    /// Check identifier, e.g. `"wang_energy"`.
    pub check: String,
    /// Parameters of the check as JSON.
    pub params: Value,
    /// Observed residual (non-negative; `inf` when the computation failed).
    pub residual: f64,
    /// Tolerance the residual is compared against.
    pub tolerance: f64,
    /// Optional note (e.g. failure message).
    pub note: Option<String>,
}

impl CheckResult {
    /// Builds a check result.
    pub fn new(check: impl Into<String>, params: Value, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            params,
            residual,
            tolerance,
            note: None,
        }
    }

    /// Check failed to compute; residual set to `+∞`.
    pub fn failed(
        check: impl Into<String>,
        params: Value,
        tolerance: f64,
        note: impl Into<String>,
    ) -> Self {
        Self {
            note: Some(note.into()),
            ..Self::new(check, params, f64::INFINITY, tolerance)
        }
    }

    /// `residual ≤ tolerance` (false for non-finite residuals).
    pub fn pass(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }

    /// JSON record `{check, params, residual, tolerance, pass}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("check".into(), json!(self.check));
        m.insert("params".into(), self.params.clone());
        m.insert("residual".into(), json_num(self.residual));
        m.insert("tolerance".into(), json_num(self.tolerance));
        m.insert("pass".into(), json!(self.pass()));
        if let Some(n) = &self.note {
            m.insert("note".into(), json!(n));
        }
        Value::Object(m)
    }
}

/// Finite numbers as JSON numbers, non-finite ones as strings.
pub fn json_num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// Versioned report document grouping results under named criteria.
pub fn report_json(groups: &[(String, Vec<CheckResult>)], tol_scale: f64) -> Value {
    let criteria: Vec<Value> = groups
        .iter()
        .map(|(name, checks)| {
            json!({
                "criterion": name,
                "pass": checks.iter().all(CheckResult::pass),
                "checks": checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema": REPORT_SCHEMA,
        "tolerance_scale": tol_scale,
        "pass": groups.iter().all(|(_, c)| c.iter().all(CheckResult::pass)),
        "criteria": criteria,
    })
}
