//! Energy comparisons between the two minimizer families: local 9/8 ratios
//! for small pieces, the exact 9/8 of the orthogonal circular arc, and the
//! asymptotic constants `(π/4)²` and `(4/π)²` near the symmetric case.

use crate::drivers::{arc_time_for_angle, circular_arc, emw_lambda, wang_lambda_down};
use crate::energy::{emw_energy, energy_quadrature, wang_energy, DEFAULT_PANELS};
use crate::error::{check_range, LabError, Result};
use crate::loewner_flow::{tip_point, trace_curve_sampled, trace_tip, Driver};
use crate::numerics::{bisect, hausdorff};
use crate::output::{csv_string, svg_polylines, SvgOptions};
use crate::welding::{wang_weld, wang_weld_endpoints, welded_pair_at};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

/// Default number of zipper / flow steps per sweep point.
pub const SWEEP_STEPS: usize = 4000;

/// Energies and ratios over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSweep {
    /// Sweep name.
    pub label: String,
    /// Parameter values (δ or θ).
    pub params: Vec<f64>,
    /// Numerator energies.
    pub num: Vec<f64>,
    /// Denominator energies.
    pub den: Vec<f64>,
    /// `num/den`.
    pub ratios: Vec<f64>,
    /// Richardson-extrapolated limit (δ → 0 sweeps with ≥ 3 points).
    pub extrapolated: Option<f64>,
    /// Observed convergence order used for the extrapolation.
    pub order: Option<f64>,
}

impl RatioSweep {
    fn new(label: impl Into<String>, params: Vec<f64>, num: Vec<f64>, den: Vec<f64>) -> Self {
        let ratios = num.iter().zip(&den).map(|(a, b)| a / b).collect();
        Self {
            label: label.into(),
            params,
            num,
            den,
            ratios,
            extrapolated: None,
            order: None,
        }
    }

    fn with_richardson(mut self) -> Self {
        if let Some((limit, order)) = richardson(&self.params, &self.ratios) {
            self.extrapolated = Some(limit);
            self.order = Some(order);
        }
        self
    }

    /// CSV `param,num,den,ratio`.
    pub fn to_csv(&self) -> String {
        csv_string(
            &["param", "num", "den", "ratio"],
            (0..self.params.len())
                .map(|i| [self.params[i], self.num[i], self.den[i], self.ratios[i]]),
        )
    }

    /// Line plot of the ratio against the parameter (`log₁₀` scale if `log_x`).
    pub fn to_svg(&self, log_x: bool) -> String {
        let pts: Vec<Complex64> = self
            .params
            .iter()
            .zip(&self.ratios)
            .map(|(p, r)| Complex64::new(if log_x { p.log10() } else { *p }, *r))
            .collect();
        svg_polylines(
            &[&pts],
            SvgOptions {
                real_axis: false,
                ..Default::default()
            },
        )
    }
}

/// Richardson extrapolation from the three smallest parameters of a geometric
/// grid, assuming `R(δ) = L + Cδ^p`. Returns `(L, p)`.
pub fn richardson(params: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    let mut idx: Vec<usize> = (0..params.len()).collect();
    idx.sort_by(|a, b| params[*b].total_cmp(&params[*a]));
    if idx.len() < 3 {
        return None;
    }
    let k = &idx[idx.len() - 3..];
    let (d1, d2, d3) = (params[k[0]], params[k[1]], params[k[2]]);
    let (r1, r2, r3) = (values[k[0]], values[k[1]], values[k[2]]);
    let q = d2 / d3;
    if ((d1 / d2) / q - 1.0).abs() > 1e-6 || r2 == r3 {
        return None;
    }
    let p = ((r1 - r2) / (r2 - r3)).ln() / q.ln();
    if !p.is_finite() || p <= 0.0 {
        return None;
    }
    Some((r3 - (r2 - r3) / (q.powf(p) - 1.0), p))
}

fn check_grid(deltas: &[f64]) -> Result<()> {
    if deltas.is_empty() {
        return Err(LabError::Precondition("empty δ grid".into()));
    }
    for &d in deltas {
        check_range("delta", d, d > 0.0 && d.is_finite(), "δ must be positive")?;
    }
    Ok(())
}

fn check_nonzero_slope(driver: &Driver) -> Result<()> {
    let a = driver.slope_estimate(0.0);
    if a == 0.0 || !a.is_finite() {
        return Err(LabError::Precondition(
            "driver needs a finite nonzero slope at t = 0".into(),
        ));
    }
    Ok(())
}

/// Tip expansion `γ(δ) ≈ 2i√δ + (2/3)aδ − (i/18)a²δ^{3/2}` with `a = λ̇(0)`.
pub fn tip_expansion(a: f64, delta: f64) -> Complex64 {
    Complex64::new(
        2.0 / 3.0 * a * delta,
        2.0 * delta.sqrt() - a * a / 18.0 * delta.powf(1.5),
    )
}

/// Curve-side local ratio: energy of `λ` on `[0, δ]` over the minimal energy
/// `−8 log sin(arg γ(δ))` of a curve through the traced tip.
pub fn local_ratio_curve(driver: &Driver, deltas: &[f64]) -> Result<RatioSweep> {
    check_grid(deltas)?;
    check_nonzero_slope(driver)?;
    let rows = deltas
        .par_iter()
        .map(|&d| {
            let num = energy_quadrature(driver, d, DEFAULT_PANELS)?.value;
            let tip = trace_tip(driver, d, SWEEP_STEPS)? - driver.eval(0.0);
            Ok((num, wang_energy(tip.arg())?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (num, den) = rows.into_iter().unzip();
    Ok(RatioSweep::new(
        format!("local_curve[{}]", driver.label()),
        deltas.to_vec(),
        num,
        den,
    )
    .with_richardson())
}

/// Largest `|γ(δ) − expansion| / δ^{3/2}` over the grid (bounded when the
/// traced tips follow the three-term expansion up to `O(δ²)`).
pub fn tip_expansion_defect(driver: &Driver, deltas: &[f64]) -> Result<f64> {
    check_grid(deltas)?;
    let a = driver.slope_estimate(0.0);
    deltas.iter().try_fold(0.0f64, |acc, &d| {
        let tip = trace_tip(driver, d, SWEEP_STEPS)? - driver.eval(0.0);
        Ok(acc.max((tip - tip_expansion(a, d)).norm() / d.powf(1.5)))
    })
}

/// Welding-side local ratio: energy of the upward driver `ξ` on `[0, δ]` over
/// the minimal energy of a curve welding the pair `(u(δ), v(δ))` welded at `δ`.
pub fn local_ratio_weld(driver: &Driver, deltas: &[f64]) -> Result<RatioSweep> {
    check_grid(deltas)?;
    check_nonzero_slope(driver)?;
    let rows = deltas
        .par_iter()
        .map(|&d| {
            let num = energy_quadrature(driver, d, DEFAULT_PANELS)?.value;
            let (u, v) = welded_pair_at(driver, d, SWEEP_STEPS)?;
            Ok((num, emw_energy(-u / v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (num, den) = rows.into_iter().unzip();
    Ok(RatioSweep::new(
        format!("local_weld[{}]", driver.label()),
        deltas.to_vec(),
        num,
        den,
    )
    .with_richardson())
}

/// Geometric δ grid `{1e−3, …, 1e−6}` (four points per decade).
pub fn default_deltas() -> Vec<f64> {
    (0..=12)
        .map(|k| 10f64.powf(-3.0 - k as f64 / 4.0))
        .collect()
}

/// One row of the circular-arc comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcRatioRow {
    /// Tip argument `θ`.
    pub theta: f64,
    /// Quadrature energy of the arc driver on `[0, t(θ)]`.
    pub quadrature: f64,
    /// Closed form `−9 log sin θ`.
    pub closed_form: f64,
    /// Quadrature energy over `−8 log sin θ`.
    pub ratio: f64,
}

/// Circular-arc energies at the given angles `θ ∈ (0, π/2)`.
pub fn arc_exact_ratios(thetas: &[f64]) -> Result<Vec<ArcRatioRow>> {
    let arc = circular_arc();
    thetas
        .par_iter()
        .map(|&theta| {
            let t = arc_time_for_angle(theta)?;
            let q = energy_quadrature(&arc, t, DEFAULT_PANELS)?.value;
            Ok(ArcRatioRow {
                theta,
                quadrature: q,
                closed_form: -9.0 * theta.sin().ln(),
                ratio: q / wang_energy(theta)?,
            })
        })
        .collect()
}

/// Argument `β(r)` of the tip of the welding minimizer with ratio `r ∈ (0, 1]`:
/// `2β = 3π/2 − arctan((2(1 + r) + (1 − r) log r)/(π(1 − r)))`.
pub fn beta_of_r(r: f64) -> Result<f64> {
    check_range("ratio", r, r > 0.0 && r <= 1.0, "ratio must lie in (0, 1]")?;
    if r == 1.0 {
        return Ok(FRAC_PI_2);
    }
    let arg = (2.0 * (1.0 + r) + (1.0 - r) * r.ln()) / (PI * (1.0 - r));
    Ok(0.5 * (1.5 * PI - arg.atan()))
}

/// Ratio `r ∈ (0, 1]` whose welding minimizer has tip argument `β ∈ [π/2, π)`.
/// Aborts if `β(r)` is not monotone on a sampling grid around the solution.
pub fn r_of_beta(beta: f64) -> Result<f64> {
    check_range(
        "beta",
        beta,
        (FRAC_PI_2..PI).contains(&beta),
        "tip argument must lie in [π/2, π)",
    )?;
    if beta == FRAC_PI_2 {
        return Ok(1.0);
    }
    let grid: Vec<f64> = (1..64).map(|k| k as f64 / 64.0).collect();
    let vals = grid
        .iter()
        .map(|&r| beta_of_r(r))
        .collect::<Result<Vec<_>>>()?;
    if vals.windows(2).any(|w| w[1] >= w[0]) {
        return Err(LabError::Solver(format!(
            "β(r) is not decreasing on the sampling grid: {vals:?}"
        )));
    }
    bisect(
        |r| beta_of_r(r).unwrap_or(f64::NAN) - beta,
        1e-300,
        1.0,
        1e-16,
    )
    .ok_or_else(|| LabError::Solver("β(r) inversion bracket failed".into()))
}

/// Welding-side and tip-side asymptotic ratio sweeps over `thetas`:
/// `I_EMW(r(θ))/I_Wang(θ)` with `r(θ) = −x_θ/y_θ`, and `I_EMW(r)/I_Wang(θ)`
/// with `β(r) = max(θ, π − θ)`.
pub fn asymptotic_ratio_tables(thetas: &[f64]) -> Result<(RatioSweep, RatioSweep)> {
    let mut wn = Vec::new();
    let mut tn = Vec::new();
    let mut den = Vec::new();
    for &theta in thetas {
        let (x, y) = wang_weld_endpoints(theta)?;
        let consistency = (wang_weld(theta, x)? - y).abs();
        if consistency > 1e-12 * (1.0 + y) {
            return Err(LabError::Solver(format!(
                "welding endpoints inconsistent at θ = {theta}: {consistency}"
            )));
        }
        wn.push(emw_energy(-x / y)?);
        let r = r_of_beta(theta.max(PI - theta))?;
        tn.push(emw_energy(r)?);
        den.push(wang_energy(theta)?);
    }
    Ok((
        RatioSweep::new("asymptotic_weld", thetas.to_vec(), wn, den.clone()),
        RatioSweep::new("asymptotic_tip", thetas.to_vec(), tn, den),
    ))
}

/// Paired traces of the minimizer through `e^{iθ}` and the welding minimizer
/// with the same welding endpoints `(x_θ, y_θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SameWeldFigure {
    /// Angle `θ`.
    pub theta: f64,
    /// Traced point-constrained minimizer.
    pub wang: Vec<Complex64>,
    /// Traced welding-constrained minimizer.
    pub emw: Vec<Complex64>,
    /// Hausdorff distance between the traces.
    pub distance: f64,
    /// Argument of the welding minimizer's tip.
    pub emw_tip_arg: f64,
}

impl SameWeldFigure {
    /// SVG with both traces and the unit circle.
    pub fn to_svg(&self) -> String {
        svg_polylines(
            &[&self.wang, &self.emw],
            SvgOptions {
                unit_circle: true,
                ..Default::default()
            },
        )
    }
}

/// Builds the same-welding comparison for `θ`.
pub fn same_weld_distinct_curves(theta: f64, n: usize, samples: usize) -> Result<SameWeldFigure> {
    let (x, y) = wang_weld_endpoints(theta)?;
    let wd = wang_lambda_down(theta)?;
    let ed = emw_lambda(x, y)?;
    let (a, b) = rayon::join(
        || trace_curve_sampled(&wd, wd.horizon(), n, samples),
        || trace_curve_sampled(&ed, ed.horizon(), n, samples),
    );
    let (a, b) = (a?.points, b?.points);
    let tip = tip_point(&ed, ed.horizon(), n)?;
    Ok(SameWeldFigure {
        theta,
        distance: hausdorff(&a, &b),
        wang: a,
        emw: b,
        emw_tip_arg: tip.arg(),
    })
}
