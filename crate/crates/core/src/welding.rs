//! Conformal weldings: numeric pairing by equal hitting times under the upward
//! flow, the closed-form welding of the point-constrained minimizers, the
//! implicit welding equation of the welding-constrained minimizers, welding
//! ratio trajectories and the small-time welding expansion.

use crate::drivers::{corner_driver, WangParams};
use crate::error::{check_range, LabError, Result};
use crate::loewner_flow::{
    base_images, flow_real_up, hitting_time_with, reverse_driver, Driver, RealFlow, DEFAULT_STEPS,
};
use crate::numerics::{bisect, log_log_slope};
use rayon::prelude::*;
use std::f64::consts::PI;

/// One welded pair: `x < 0` and `y > 0` meet the driver at the same time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldingPair {
    /// Left point.
    pub x: f64,
    /// Right point.
    pub y: f64,
    /// Common hitting time.
    pub tau: f64,
}

/// Sampled conformal welding of a hull.
#[derive(Debug, Clone, PartialEq)]
pub struct WeldingMap {
    /// Pairs ordered by increasing `|x|`.
    pub pairs: Vec<WeldingPair>,
    /// Endpoints `(x_T, y_T)` of the welded interval (the pair hitting at `T`).
    pub endpoints: (f64, f64),
    /// Per-pair bracketing failures (pair index and message); not fatal.
    pub failures: Vec<(usize, String)>,
}

/// Hitting time with "no collision" mapped to `+∞`.
fn hit_or_inf(driver: &Driver, x: f64, steps: usize) -> f64 {
    match hitting_time_with(driver, x, steps) {
        Ok(Some(t)) => t,
        _ => f64::INFINITY,
    }
}

/// The point on the side `sign` whose hitting time equals `target`, found by
/// bisection on the monotone map `|x| ↦ hitting time` inside `(0, bound]`.
fn point_with_hitting_time(
    driver: &Driver,
    sign: f64,
    target: f64,
    bound: f64,
    steps: usize,
) -> Option<f64> {
    let xi0 = driver.eval(0.0);
    let g = |a: f64| {
        let h = hit_or_inf(driver, xi0 + sign * a, steps);
        if h.is_finite() {
            h - target
        } else {
            1.0
        }
    };
    let tiny = 1e-14 * bound;
    bisect(g, tiny, bound, 1e-15 * bound).map(|a| xi0 + sign * a)
}

/// Distance from the driver start beyond which a point on side `sign` survives to `T`.
fn survival_bound(driver: &Driver, sign: f64, steps: usize) -> Result<f64> {
    let xi0 = driver.eval(0.0);
    let mut a = 2.0 * driver.horizon().sqrt().max(1e-300);
    for _ in 0..60 {
        if hit_or_inf(driver, xi0 + sign * a, steps).is_infinite() {
            return Ok(a);
        }
        a *= 2.0;
    }
    Err(LabError::Solver(
        "no surviving point found on one side of the driver".into(),
    ))
}

/// Numeric welding of the hull generated by the upward driver on `[0, T]`:
/// `n_pairs` points `x_k = k·x_T/n` are matched to the `y` with equal hitting time.
pub fn weld_from_driver(driver: &Driver, t_end: f64, n_pairs: usize) -> Result<WeldingMap> {
    weld_from_driver_with(driver, t_end, n_pairs, DEFAULT_STEPS)
}

/// [`weld_from_driver`] with an explicit number of integration steps per flow.
pub fn weld_from_driver_with(
    driver: &Driver,
    t_end: f64,
    n_pairs: usize,
    steps: usize,
) -> Result<WeldingMap> {
    if !(t_end > 0.0 && t_end <= driver.horizon() * (1.0 + 1e-12)) || n_pairs == 0 {
        return Err(LabError::Precondition(
            "welding needs 0 < T ≤ horizon and n_pairs ≥ 1".into(),
        ));
    }
    let d = driver.clone().with_horizon(t_end.min(driver.horizon()));
    let xi0 = d.eval(0.0);
    let left_bound = survival_bound(&d, -1.0, steps)?;
    let right_bound = survival_bound(&d, 1.0, steps)?;
    let x_end = point_with_hitting_time(&d, -1.0, t_end, left_bound, steps)
        .ok_or_else(|| LabError::Solver("left endpoint bracket failed".into()))?;
    let y_end = point_with_hitting_time(&d, 1.0, t_end, right_bound, steps)
        .ok_or_else(|| LabError::Solver("right endpoint bracket failed".into()))?;
    let results: Vec<std::result::Result<WeldingPair, String>> = (1..=n_pairs)
        .into_par_iter()
        .map(|k| {
            if k == n_pairs {
                return Ok(WeldingPair {
                    x: x_end,
                    y: y_end,
                    tau: t_end,
                });
            }
            let x = xi0 + (x_end - xi0) * k as f64 / n_pairs as f64;
            let tau = hitting_time_with(&d, x, steps)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("x = {x} does not collide before T"))?;
            let y = point_with_hitting_time(&d, 1.0, tau, y_end - xi0, steps)
                .ok_or_else(|| format!("no partner bracketed for x = {x}"))?;
            Ok(WeldingPair { x, y, tau })
        })
        .collect();
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => pairs.push(p),
            Err(m) => failures.push((k, m)),
        }
    }
    Ok(WeldingMap {
        pairs,
        endpoints: (x_end, y_end),
        failures,
    })
}

/// The pair welded at time `T` by an upward driver, computed by flowing the
/// base prime ends of the reversed (downward) driver.
pub fn welded_pair_at(driver: &Driver, t_end: f64, n: usize) -> Result<(f64, f64)> {
    let down = reverse_driver(driver, t_end)?;
    base_images(&down, t_end, n)
}

/// Endpoints `(x_θ, y_θ)` of the welding of the minimizer through `e^{iθ}`.
pub fn wang_weld_endpoints(theta: f64) -> Result<(f64, f64)> {
    WangParams::new(theta)?;
    let s = theta.sin();
    let c = theta.cos();
    let s3 = s.powi(3);
    Ok((
        -(s3 / (s - theta * c)).sqrt(),
        (s3 / (s + (PI - theta) * c)).sqrt(),
    ))
}

/// Closed-form welding `φ_θ(x) = −x/√(1 + π(cos θ/sin³θ)x²)` on `[x_θ, 0]`.
pub fn wang_weld(theta: f64, x: f64) -> Result<f64> {
    let p = WangParams::new(theta)?;
    let (xt, _) = wang_weld_endpoints(theta)?;
    check_range(
        "x",
        x,
        x <= 0.0 && x >= xt * (1.0 + 1e-12),
        "x must lie in [x_θ, 0]",
    )?;
    Ok(-x / (1.0 + PI * p.b() * x * x).sqrt())
}

/// `W(r, u) = ru + 1/u + (1 − r)·log|u|` (real branch).
pub fn emw_w(r: f64, u: f64) -> f64 {
    r * u + 1.0 / u + (1.0 - r) * u.abs().ln()
}

/// Möbius normalization `T(u) = (u − y0)/(u − x0)`.
pub fn emw_t(x0: f64, y0: f64, u: f64) -> f64 {
    (u - y0) / (u - x0)
}

fn emw_t_inv(x0: f64, y0: f64, v: f64) -> f64 {
    (v * x0 - y0) / (v - 1.0)
}

/// Residual `|W(r, T(y)) − W(r, T(x))|` of the implicit welding equation for a
/// candidate pair; for `r > 1` evaluated in the reflected frame.
pub fn emw_weld_residual(x0: f64, y0: f64, x: f64, y: f64) -> f64 {
    let (a, b, u, v) = if -x0 / y0 <= 1.0 {
        (x0, y0, x, y)
    } else {
        (-y0, -x0, -y, -x)
    };
    let r = -a / b;
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    (emw_w(r, emw_t(a, b, v)) - emw_w(r, emw_t(a, b, u))).abs()
}

fn emw_weld_small_ratio(x0: f64, y0: f64, x: f64) -> f64 {
    let r = -x0 / y0;
    if x == 0.0 {
        return 0.0;
    }
    if x <= x0 {
        return y0;
    }
    if r == 1.0 {
        return -x;
    }
    let s = y0 / x0;
    let target = emw_w(r, emw_t(x0, y0, x));
    // W(r, ·) decreases from its maximum at s to −∞ at 0⁻.
    let v = bisect(
        |v| emw_w(r, v) - target,
        s,
        s * 1e-300_f64.max(f64::MIN_POSITIVE),
        1e-17 * s.abs(),
    )
    .unwrap_or(s);
    emw_t_inv(x0, y0, v).clamp(0.0, y0)
}

/// Solves the implicit welding equation `W(r, T(φ(x))) = W(r, T(x))` for
/// `x ∈ [x0, 0]`, returning `φ(x) ∈ [0, y0]`. Ratios `r > 1` are handled by
/// conjugating with the reflection across the imaginary axis.
pub fn emw_weld_solve(x0: f64, y0: f64, x: f64) -> Result<f64> {
    crate::drivers::EmwParams::new(x0, y0)?;
    check_range("x", x, x >= x0 && x <= 0.0, "x must lie in [x0, 0]")?;
    if -x0 / y0 <= 1.0 {
        return Ok(emw_weld_small_ratio(x0, y0, x));
    }
    // Reflected curve welds (−y0, −x0) with ψ(u) = −φ⁻¹(−u); invert ψ by bisection.
    let (a, b) = (-y0, -x0);
    if x == 0.0 {
        return Ok(0.0);
    }
    if x <= x0 {
        return Ok(y0);
    }
    bisect(|y| emw_weld_small_ratio(a, b, -y) + x, 0.0, y0, 1e-16 * y0)
        .ok_or_else(|| LabError::Solver("reflected welding bracket failed".into()))
}

/// Samples of the welding ratio `r(t) = −(x_t − ξ_t)/(y_t − ξ_t)` along the upward
/// flow of `x0 < ξ(0) < y0`, at `samples` times before the first collision.
pub fn ratio_trajectory(
    driver: &Driver,
    x0: f64,
    y0: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    let tx = hitting_time_with(driver, x0, DEFAULT_STEPS)?;
    let ty = hitting_time_with(driver, y0, DEFAULT_STEPS)?;
    let end = tx
        .unwrap_or(driver.horizon())
        .min(ty.unwrap_or(driver.horizon()));
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let t = end * k as f64 / samples as f64;
            let xi = driver.eval(t);
            let pos = |p: f64| -> Result<f64> {
                match flow_real_up(driver, p, t, DEFAULT_STEPS)? {
                    RealFlow::Alive(v) => Ok(v - xi),
                    RealFlow::Collided(_) => Ok(0.0),
                }
            };
            Ok((t, -pos(x0)? / pos(y0)?))
        })
        .collect()
}

/// Welded base endpoints `(x(ε), y(ε))` of the piece of the corner curve between
/// capacity times `1` and `1 + ε`, computed by flowing the base prime ends of
/// the piece (the reversed driver has an unbounded derivative at the welding
/// time, which the hitting-time bisection resolves only to about 1%).
pub fn corner_welding(c: f64, eps: f64) -> Result<(f64, f64)> {
    check_range("eps", eps, eps > 0.0 && eps <= 1.0, "ε must lie in (0, 1]")?;
    let piece = corner_driver(c).shifted(1.0).with_horizon(eps);
    base_images(&piece, eps, 2000)
}

/// Harmonic-measure ratio `y/(y − x)` at the corner.
pub fn corner_ratio(c: f64, eps: f64) -> Result<f64> {
    let (x, y) = corner_welding(c, eps)?;
    Ok(y / (y - x))
}

/// Fit of the welded endpoints against `x(δ) = −2√δ + (2/3)aδ − (1/18)a²δ^{3/2}`
/// and `y(δ) = 2√δ + (2/3)aδ + (1/18)a²δ^{3/2}` with `a = ξ̇(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeldExpansionFit {
    /// Sampled δ values.
    pub deltas: Vec<f64>,
    /// Numeric left endpoints.
    pub x: Vec<f64>,
    /// Numeric right endpoints.
    pub y: Vec<f64>,
    /// `x − expansion`.
    pub residual_x: Vec<f64>,
    /// `y − expansion`.
    pub residual_y: Vec<f64>,
    /// Log-log slope of `|residual_x|` against δ.
    pub order_x: f64,
    /// Log-log slope of `|residual_y|` against δ.
    pub order_y: f64,
}

/// Compares the pair welded at time δ with the three-term expansion.
pub fn infinitesimal_welding_check(driver: &Driver, deltas: &[f64]) -> Result<WeldExpansionFit> {
    if deltas.is_empty() {
        return Err(LabError::Precondition("empty δ grid".into()));
    }
    let a = driver.slope_estimate(0.0);
    let pairs = deltas
        .iter()
        .map(|&d| welded_pair_at(driver, d, 2000))
        .collect::<Result<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let ex =
        |d: f64, s: f64| s * 2.0 * d.sqrt() + 2.0 / 3.0 * a * d + s / 18.0 * a * a * d.powf(1.5);
    let residual_x: Vec<f64> = deltas
        .iter()
        .zip(&x)
        .map(|(&d, &v)| v - ex(d, -1.0))
        .collect();
    let residual_y: Vec<f64> = deltas
        .iter()
        .zip(&y)
        .map(|(&d, &v)| v - ex(d, 1.0))
        .collect();
    let order = |r: &[f64]| {
        if deltas.len() < 2 || r.contains(&0.0) {
            f64::NAN
        } else {
            log_log_slope(deltas, r)
        }
    };
    Ok(WeldExpansionFit {
        order_x: order(&residual_x),
        order_y: order(&residual_y),
        deltas: deltas.to_vec(),
        x,
        y,
        residual_x,
        residual_y,
    })
}
