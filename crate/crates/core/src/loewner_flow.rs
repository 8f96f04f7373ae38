//! Downward and upward chordal Loewner evolution.
//!
//! The downward flow `ġ = 2/(g − λ)` maps the complement of a growing hull back
//! to the upper half-plane; the upward flow `ḣ = −2/(h − ξ)` grows a hull from
//! the real line. This module provides the [`Driver`] type, point flows with
//! swallowing detection, curve tracing by composed tilted-slit maps, hitting
//! times of real points, and the driver transforms (scaling, reversal).

use crate::error::{LabError, Result};
use crate::numerics::{bisect, rk4_complex, rk4_step};
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

/// Shared real function of time.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Default number of fixed RK4 steps used when an operation takes no grid.
pub const DEFAULT_STEPS: usize = 4000;

/// Distance `|x − ξ|` (or `|z − λ|`) below which a collision is declared.
pub const COLLISION_TOL: f64 = 1e-9;

/// Analytic derivative value of a driver at a time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    /// Finite one-sided or two-sided derivative.
    Finite(f64),
    /// The derivative blows up at this time (only at endpoints of the horizon).
    Unbounded,
}

/// A real driving function on `[0, horizon]`.
#[derive(Clone)]
pub struct Driver {
    eval: TimeFn,
    deriv: Option<TimeFn>,
    horizon: f64,
    label: String,
}

impl fmt::Debug for Driver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Driver")
            .field("label", &self.label)
            .field("horizon", &self.horizon)
            .field("has_derivative", &self.deriv.is_some())
            .finish()
    }
}

impl Driver {
    /// Driver without an analytic derivative.
    pub fn new(
        label: impl Into<String>,
        horizon: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: None,
            horizon,
            label: label.into(),
        }
    }

    /// Attach an analytic derivative; non-finite values mean [`Slope::Unbounded`].
    pub fn with_derivative(mut self, deriv: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    /// The identically zero driver on `[0, horizon]`.
    pub fn zero(horizon: f64) -> Self {
        Self::new("zero", horizon, |_| 0.0).with_derivative(|_| 0.0)
    }

    /// The linear driver `t ↦ slope·t` on `[0, horizon]`.
    pub fn linear(slope: f64, horizon: f64) -> Self {
        Self::new(format!("linear({slope})"), horizon, move |t| slope * t)
            .with_derivative(move |_| slope)
    }

    /// Value at time `t`.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Value at time `t`, rejecting non-finite results.
    pub fn checked_eval(&self, t: f64) -> Result<f64> {
        let v = self.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LabError::NonFinite {
                label: self.label.clone(),
                t,
            })
        }
    }

    /// Analytic derivative, if the driver carries one.
    pub fn slope(&self, t: f64) -> Option<Slope> {
        self.deriv.as_ref().map(|d| {
            let v = d(t);
            if v.is_finite() {
                Slope::Finite(v)
            } else {
                Slope::Unbounded
            }
        })
    }

    /// Whether an analytic derivative is attached.
    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    /// Derivative for use inside integrators: analytic when finite, otherwise a
    /// finite difference taken inside `[0, horizon]`.
    pub fn slope_estimate(&self, t: f64) -> f64 {
        if let Some(Slope::Finite(v)) = self.slope(t) {
            return v;
        }
        let h = 1e-7 * self.horizon.max(1e-300);
        let lo = (t - h).max(0.0);
        let hi = (t + h).min(self.horizon);
        if hi > lo {
            (self.eval(hi) - self.eval(lo)) / (hi - lo)
        } else {
            0.0
        }
    }

    /// Terminal time.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Family tag.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same function with a new label.
    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same function with a different horizon (the formula must make sense there).
    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    /// The reflected driver `−λ`, generating the mirror image across `iℝ`.
    pub fn negated(&self) -> Driver {
        let e = self.eval.clone();
        let mut out = Driver::new(format!("-{}", self.label), self.horizon, move |t| -e(t));
        if let Some(d) = self.deriv.clone() {
            out = out.with_derivative(move |t| -d(t));
        }
        out
    }

    /// The driver of the remaining curve after mapping down `γ[0, s]`:
    /// `t ↦ λ(s + t) − λ(s)` on `[0, horizon − s]`.
    pub fn shifted(&self, s: f64) -> Driver {
        let e = self.eval.clone();
        let base = self.eval(s);
        let mut out = Driver::new(format!("{}+{s}", self.label), self.horizon - s, move |t| {
            e(s + t) - base
        });
        if let Some(d) = self.deriv.clone() {
            out = out.with_derivative(move |t| d(s + t));
        }
        out
    }

    /// Uniform samples `(t_k, λ(t_k))`, `k = 0..=n`.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|k| {
                let t = self.horizon * k as f64 / n as f64;
                (t, self.eval(t))
            })
            .collect()
    }
}

/// Returns `t ↦ r·λ(t/r²)` with horizon `r²T`: the driver of the scaled curve `rγ`.
pub fn scale_driver(driver: &Driver, r: f64) -> Result<Driver> {
    crate::error::check_range("r", r, r > 0.0, "scale factor must be positive")?;
    let e = driver.eval.clone();
    let mut out = Driver::new(
        format!("{}*{r}", driver.label),
        r * r * driver.horizon,
        move |t| r * e(t / (r * r)),
    );
    if let Some(d) = driver.deriv.clone() {
        out = out.with_derivative(move |t| d(t / (r * r)) / r);
    }
    Ok(out)
}

/// Returns the reversed driver `ξ(t) = λ(T − t) − λ(T)` on `[0, T]`.
pub fn reverse_driver(driver: &Driver, t_end: f64) -> Result<Driver> {
    check_time(driver, t_end)?;
    let e = driver.eval.clone();
    let end = driver.checked_eval(t_end)?;
    let mut out = Driver::new(format!("rev({})", driver.label), t_end, move |t| {
        e((t_end - t).max(0.0)) - end
    });
    if let Some(d) = driver.deriv.clone() {
        out = out.with_derivative(move |t| -d((t_end - t).max(0.0)));
    }
    Ok(out)
}

fn check_time(driver: &Driver, t: f64) -> Result<()> {
    if !(t >= 0.0 && t <= driver.horizon * (1.0 + 1e-12)) {
        return Err(LabError::Precondition(format!(
            "time {t} outside [0, {}] for driver `{}`",
            driver.horizon, driver.label
        )));
    }
    Ok(())
}

/// State of a point carried by a Loewner flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowPoint {
    /// Current (uncentered) position.
    pub position: Complex64,
    /// Whether the flow still exists at the requested time.
    pub alive: bool,
    /// Swallowing / collision time when not alive.
    pub swallow_time: Option<f64>,
}

/// Capacity-parametrized sampled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace {
    /// Increasing capacity times.
    pub times: Vec<f64>,
    /// Curve points `γ(t_k)` in the closed upper half-plane.
    pub points: Vec<Complex64>,
}

impl CurveTrace {
    /// Last sampled point.
    pub fn tip(&self) -> Complex64 {
        *self.points.last().expect("non-empty trace")
    }
}

fn check_start(driver: &Driver, z0: Complex64, t1: f64, steps: usize) -> Result<()> {
    check_time(driver, t1)?;
    if steps == 0 {
        return Err(LabError::Precondition("steps must be positive".into()));
    }
    if !(z0.re.is_finite() && z0.im.is_finite()) || z0.im < 0.0 {
        return Err(LabError::Precondition(format!(
            "start point {z0} must lie in the closed upper half-plane"
        )));
    }
    if z0.im == 0.0 && z0.re == driver.checked_eval(0.0)? {
        return Err(LabError::Precondition(
            "start point coincides with the driver at t = 0".into(),
        ));
    }
    Ok(())
}

/// Complex point flow with step halving near the driver; `sign = 2` for the
/// downward flow and `−2` for the upward flow.
fn flow_complex(
    driver: &Driver,
    z0: Complex64,
    t1: f64,
    steps: usize,
    sign: f64,
) -> Result<FlowPoint> {
    let h0 = t1 / steps as f64;
    let h_min = 1e-18 * t1.max(1e-300);
    let field = |t: f64, z: Complex64| sign / (z - driver.eval(t));
    let mut t = 0.0;
    let mut z = z0;
    while t < t1 {
        let mut h = h0.min(t1 - t);
        loop {
            let dist = (z - driver.checked_eval(t)?).norm();
            if dist < COLLISION_TOL || h <= h_min {
                return Ok(FlowPoint {
                    position: z,
                    alive: false,
                    swallow_time: Some(t + 0.5 * h),
                });
            }
            // |z − λ| < 10·h·|ż| with |ż| = 2/|z − λ|
            if dist * dist < 20.0 * h {
                h *= 0.5;
                continue;
            }
            let next = rk4_complex(&field, t, z, h);
            if !(next.re.is_finite() && next.im.is_finite()) || (z.im > 0.0 && next.im < 0.0) {
                h *= 0.5;
                continue;
            }
            z = next;
            t += h;
            break;
        }
    }
    Ok(FlowPoint {
        position: z,
        alive: true,
        swallow_time: None,
    })
}

/// Outcome of flowing a real point upward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealFlow {
    /// Still real and distinct from the driver at the end time.
    Alive(f64),
    /// Met the driver at this time.
    Collided(f64),
}

/// Upward flow of a real point, integrated in `d = (x − ξ)²`, which satisfies
/// `ḋ = −4 − 2(x − ξ)ξ̇` and therefore reaches zero transversally at collision.
pub fn flow_real_up(driver: &Driver, x0: f64, t1: f64, steps: usize) -> Result<RealFlow> {
    check_time(driver, t1)?;
    let xi0 = driver.checked_eval(0.0)?;
    if x0 == xi0 {
        return Err(LabError::Precondition(
            "start point coincides with the driver at t = 0".into(),
        ));
    }
    if t1 == 0.0 {
        return Ok(RealFlow::Alive(x0));
    }
    let s = (x0 - xi0).signum();
    let u0 = (x0 - xi0).abs();
    let rhs =
        |t: f64, d: &[f64; 1]| [-4.0 - 2.0 * s * d[0].max(0.0).sqrt() * driver.slope_estimate(t)];
    let h0 = t1 / steps.max(1) as f64;
    let mut t = 0.0;
    let mut d = u0 * u0;
    while t < t1 {
        let h = h0.min(t1 - t);
        let next = rk4_step(&rhs, t, &[d], h)[0];
        if next.is_nan() {
            return Err(LabError::NonFinite {
                label: driver.label().to_string(),
                t,
            });
        }
        if next > 0.0 {
            d = next;
            t = if t1 - t <= h0 { t1 } else { t + h };
            continue;
        }
        let tol = 1e-16 * t1.max(1e-300);
        let hit = bisect(|hh| rk4_step(&rhs, t, &[d], hh)[0], 0.0, h, tol)
            .ok_or_else(|| LabError::Solver("collision bracket lost".into()))?;
        return Ok(RealFlow::Collided(t + hit));
    }
    let u = d.sqrt();
    if u <= 1e-6 * u0.max(t1.sqrt()) {
        return Ok(RealFlow::Collided(t1 - 0.25 * d));
    }
    Ok(RealFlow::Alive(driver.eval(t1) + s * u))
}

/// Downward flow `ġ = 2/(g − λ)` of `z0` up to time `t1` with `steps` RK4 steps.
pub fn evolve_point_down(
    driver: &Driver,
    z0: Complex64,
    t1: f64,
    steps: usize,
) -> Result<FlowPoint> {
    check_start(driver, z0, t1, steps)?;
    flow_complex(driver, z0, t1, steps, 2.0)
}

/// Upward flow `ḣ = −2/(h − ξ)` of `z0` up to time `t1` with `steps` RK4 steps.
/// Real starting points stay real until they collide with the driver.
pub fn evolve_point_up(driver: &Driver, z0: Complex64, t1: f64, steps: usize) -> Result<FlowPoint> {
    check_start(driver, z0, t1, steps)?;
    if z0.im == 0.0 {
        return Ok(match flow_real_up(driver, z0.re, t1, steps)? {
            RealFlow::Alive(x) => FlowPoint {
                position: Complex64::new(x, 0.0),
                alive: true,
                swallow_time: None,
            },
            RealFlow::Collided(tc) => FlowPoint {
                position: Complex64::new(driver.eval(tc), 0.0),
                alive: false,
                swallow_time: Some(tc),
            },
        });
    }
    flow_complex(driver, z0, t1, steps, -2.0)
}

/// First time the upward flow of the real point `x0` meets the driver, or `None`
/// if it survives past the horizon.
pub fn hitting_time(driver: &Driver, x0: f64) -> Result<Option<f64>> {
    hitting_time_with(driver, x0, DEFAULT_STEPS)
}

/// [`hitting_time`] with an explicit number of base steps.
pub fn hitting_time_with(driver: &Driver, x0: f64, steps: usize) -> Result<Option<f64>> {
    Ok(match flow_real_up(driver, x0, driver.horizon(), steps)? {
        RealFlow::Collided(t) => Some(t),
        RealFlow::Alive(_) => None,
    })
}

/// One tilted-slit substep: the exact mapping-up function for a driver
/// increment of the form `c√(t − t_{k−1})`.
#[derive(Debug, Clone, Copy)]
struct Slit {
    alpha: f64,
    x: f64,
    y: f64,
}

/// Angle fraction `α ∈ (0, 1)` of the straight slit generated by `c√t`,
/// the solution of `c = 2(1 − 2α)/√(α(1 − α))`.
pub fn slit_alpha(c: f64) -> f64 {
    let r = (16.0 + c * c).sqrt();
    if c >= 0.0 {
        8.0 / (r * (r + c))
    } else {
        1.0 - 8.0 / (r * (r - c))
    }
}

impl Slit {
    fn new(dl: f64, dt: f64) -> Self {
        let alpha = slit_alpha(dl / dt.sqrt());
        let sq = dt.sqrt();
        Slit {
            alpha,
            x: -2.0 * ((1.0 - alpha) / alpha).sqrt() * sq,
            y: 2.0 * (alpha / (1.0 - alpha)).sqrt() * sq,
        }
    }

    /// `F(z) = (z − y)^α (z − x)^{1−α}` on the closed upper half-plane.
    fn map(&self, z: Complex64) -> Complex64 {
        (self.alpha * ln_uhp(z - self.y) + (1.0 - self.alpha) * ln_uhp(z - self.x)).exp()
    }
}

/// Principal logarithm with the argument forced into `[0, π]`.
fn ln_uhp(w: Complex64) -> Complex64 {
    let im = if w.im > 0.0 { w.im } else { 0.0 };
    Complex64::new(w.norm().ln(), im.atan2(w.re))
}

fn build_slits(driver: &Driver, t_end: f64, n: usize) -> Result<(f64, Vec<Slit>)> {
    check_time(driver, t_end)?;
    if n == 0 {
        return Err(LabError::Precondition("n must be positive".into()));
    }
    let grid: Vec<f64> = (0..=n).map(|k| t_end * k as f64 / n as f64).collect();
    build_slits_on(driver, &grid)
}

fn build_slits_on(driver: &Driver, grid: &[f64]) -> Result<(f64, Vec<Slit>)> {
    if grid.len() < 2 || grid[0] != 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::Precondition(
            "time grid must start at 0 and increase strictly".into(),
        ));
    }
    check_time(driver, *grid.last().unwrap_or(&0.0))?;
    let values = grid
        .iter()
        .map(|&t| driver.checked_eval(t))
        .collect::<Result<Vec<_>>>()?;
    let slits = values
        .windows(2)
        .zip(grid.windows(2))
        .map(|(v, t)| Slit::new(v[1] - v[0], t[1] - t[0]))
        .collect();
    Ok((values[0], slits))
}

/// Grid `t_k = T(1 − (1 − k/n)^p)` refined towards `T`, for drivers with a
/// square-root singularity at the terminal time (`p = 1` is the uniform grid).
pub fn end_graded_grid(t_end: f64, n: usize, power: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            if k == n {
                t_end
            } else {
                t_end * (1.0 - (1.0 - k as f64 / n as f64).powf(power))
            }
        })
        .collect()
}

fn compose_tip(base: f64, slits: &[Slit], m: usize) -> Complex64 {
    let mut z = Complex64::new(0.0, 0.0);
    for s in slits[..m].iter().rev() {
        z = s.map(z);
    }
    z + base
}

/// Traces `γ(t_k)`, `t_k = kT/n`, by composing tilted-slit maps fitted to the
/// driver increments. Cost is quadratic in `n`; see [`trace_curve_sampled`].
pub fn trace_curve(driver: &Driver, t_end: f64, n: usize) -> Result<CurveTrace> {
    trace_curve_sampled(driver, t_end, n, n)
}

/// Like [`trace_curve`] on an `n`-step grid but only evaluating `samples + 1`
/// evenly spaced grid points (always including both ends).
pub fn trace_curve_sampled(
    driver: &Driver,
    t_end: f64,
    n: usize,
    samples: usize,
) -> Result<CurveTrace> {
    let (base, slits) = build_slits(driver, t_end, n)?;
    let samples = samples.clamp(1, n);
    let idx: Vec<usize> = (0..=samples)
        .map(|k| ((k as f64 * n as f64 / samples as f64).round() as usize).min(n))
        .collect();
    let points: Vec<Complex64> = idx
        .par_iter()
        .map(|&m| compose_tip(base, &slits, m))
        .collect();
    let times = idx.iter().map(|&m| t_end * m as f64 / n as f64).collect();
    Ok(CurveTrace { times, points })
}

/// Traces the curve on an arbitrary increasing time grid starting at 0,
/// evaluating `samples + 1` grid points evenly spaced in index.
pub fn trace_curve_grid(driver: &Driver, grid: &[f64], samples: usize) -> Result<CurveTrace> {
    let (base, slits) = build_slits_on(driver, grid)?;
    let n = slits.len();
    let samples = samples.clamp(1, n);
    let idx: Vec<usize> = (0..=samples)
        .map(|k| ((k as f64 * n as f64 / samples as f64).round() as usize).min(n))
        .collect();
    let points: Vec<Complex64> = idx
        .par_iter()
        .map(|&m| compose_tip(base, &slits, m))
        .collect();
    let times = idx.iter().map(|&m| grid[m]).collect();
    Ok(CurveTrace { times, points })
}

/// The traced tip `γ(T)` on an `n`-step grid (linear cost).
pub fn trace_tip(driver: &Driver, t_end: f64, n: usize) -> Result<Complex64> {
    let (base, slits) = build_slits(driver, t_end, n)?;
    Ok(compose_tip(base, &slits, n))
}

/// Coefficient `a` in `F(z) = z + b + a/z + O(z⁻²)` for the composed centered
/// mapping-up function of a traced hull; equals `−2T` in capacity parametrization.
pub fn trace_capacity_coefficient(driver: &Driver, t_end: f64, n: usize) -> Result<f64> {
    let (_, slits) = build_slits(driver, t_end, n)?;
    let shift = driver.eval(t_end) - driver.eval(0.0);
    let estimate = |r: f64| {
        let w = Complex64::new(0.0, r);
        let mut z = w;
        for s in slits.iter().rev() {
            z = s.map(z);
        }
        ((z - w - shift) * w).re
    };
    // Richardson on the O(1/R) remainder.
    let r = 1e3 * t_end.sqrt().max(1e-12);
    Ok(2.0 * estimate(2.0 * r) - estimate(r))
}

/// Local exponent `c = lim (f(w²) − f(0))/w` of a driver-like function at `w → 0`,
/// zero when the function has a finite slope there.
fn sqrt_exponent(f: &impl Fn(f64) -> f64, smooth: bool, scale: f64) -> f64 {
    if smooth {
        return 0.0;
    }
    let eps = 1e-8 * scale.sqrt();
    (f(eps * eps) - f(0.0)) / eps
}

/// Integrates `dz/dw = k·w/(z − μ(w²))` on `[0, W]` starting from `z ≈ μ(0) + p·w`,
/// i.e. a Loewner flow in square-root time started at the driver. The first
/// steps are graded geometrically to stay inside the RK4 stability region.
fn sqrt_time_flow(
    mu: &impl Fn(f64) -> f64,
    k: f64,
    p: Complex64,
    w_end: f64,
    n: usize,
) -> Complex64 {
    let field = |w: f64, z: Complex64| k * w / (z - mu(w * w));
    let h = w_end / n as f64;
    let kappa = (0.5 * p.norm_sqr() / k.abs()).min(1.0);
    let mut w = 1e-10 * w_end;
    let mut z = mu(w * w) + p * w;
    while w < w_end {
        let step = h.min(kappa * w).min(w_end - w);
        z = rk4_complex(&field, w, z, step);
        w = if w_end - w <= step { w_end } else { w + step };
    }
    z
}

/// Centered images `(g_T(0⁻) − λ(T), g_T(0⁺) − λ(T))` of the two base prime ends,
/// i.e. the pair of real points welded at time `T` under the reversed driver.
///
/// Integrated in `w = √t`, where the flow started at the driver is regular.
pub fn base_images(driver: &Driver, t_end: f64, n: usize) -> Result<(f64, f64)> {
    check_time(driver, t_end)?;
    if t_end == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mu = |s: f64| driver.eval(s);
    let smooth = matches!(driver.slope(0.0), Some(Slope::Finite(_)));
    let c = sqrt_exponent(&mu, smooth, t_end);
    let root = (c * c + 16.0).sqrt();
    let w_end = t_end.sqrt();
    let left = sqrt_time_flow(&mu, 4.0, Complex64::new(0.5 * (c - root), 0.0), w_end, n);
    let right = sqrt_time_flow(&mu, 4.0, Complex64::new(0.5 * (c + root), 0.0), w_end, n);
    let end = driver.checked_eval(t_end)?;
    Ok((left.re - end, right.re - end))
}

/// The tip `γ(T)` computed by flowing the driver value upward in square-root time
/// (`γ(T) = h_T(λ(T))` with upward driver `λ(T − s)`); fourth-order accurate for
/// smooth drivers.
pub fn tip_point(driver: &Driver, t_end: f64, n: usize) -> Result<Complex64> {
    check_time(driver, t_end)?;
    let start = driver.checked_eval(t_end)?;
    if t_end == 0.0 {
        return Ok(Complex64::new(start, 0.0));
    }
    let mu = |s: f64| driver.eval((t_end - s).max(0.0));
    let smooth = matches!(driver.slope(t_end), Some(Slope::Finite(_)));
    let c = sqrt_exponent(&mu, smooth, t_end);
    let mut root = Complex64::new(c * c - 16.0, 0.0).sqrt();
    if root.im < 0.0 {
        root = -root;
    }
    let p = 0.5 * (c + root);
    Ok(sqrt_time_flow(&mu, -4.0, p, t_end.sqrt(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn graded_grid_tracing() {
        let d = Driver::linear(1.0, 1.0);
        let g = end_graded_grid(1.0, 50, 1.0);
        assert_eq!(g.len(), 51);
        let a = trace_curve_grid(&d, &g, 10).unwrap();
        let b = trace_curve_sampled(&d, 1.0, 50, 10).unwrap();
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((p - q).norm() < 1e-12);
        }
        let g2 = end_graded_grid(1.0, 50, 2.0);
        assert!(g2.windows(2).all(|w| w[1] > w[0]) && g2[50] == 1.0);
        assert!(g2[50] - g2[49] < g2[1] - g2[0]);
        assert!(trace_curve_grid(&d, &[0.0, 0.5, 0.4], 2).is_err());
    }

    #[test]
    fn zero_driver_downward_closed_forms() {
        let d = Driver::zero(10.0);
        // i lies on the hull [0, 2i√t] and is swallowed at t = 1/4.
        let p = evolve_point_down(&d, c(0.0, 1.0), 1.0, 2000).unwrap();
        assert!(!p.alive);
        assert!((p.swallow_time.unwrap() - 0.25).abs() < 1e-8);
        let z0 = c(1.0, 1.0);
        let p = evolve_point_down(&d, z0, 1.0, 200).unwrap();
        assert!(p.alive);
        assert!((p.position - (z0 * z0 + 4.0).sqrt()).norm() < 1e-10);
        let q = evolve_point_down(&d, c(2.0, 0.0), 3.0, 200).unwrap();
        assert_relative_eq!(q.position.re, 4.0, epsilon = 1e-10);
        assert_eq!(q.position.im, 0.0);
    }

    #[test]
    fn zero_driver_upward_real_points() {
        let d = Driver::zero(10.0);
        let p = evolve_point_up(&d, c(3.0, 0.0), 1.0, 400).unwrap();
        assert_relative_eq!(p.position.re, 5f64.sqrt(), epsilon = 1e-10);
        let q = evolve_point_up(&d, c(-2.0, 0.0), 2.0, 400).unwrap();
        assert!(!q.alive);
        assert_relative_eq!(q.swallow_time.unwrap(), 1.0, epsilon = 1e-9);
        let r = evolve_point_up(&d, c(0.0, 1.0), 0.0, 10).unwrap();
        assert_eq!(r.position, c(0.0, 1.0));
    }

    #[test]
    fn zero_driver_hitting_time() {
        let d = Driver::zero(4.0);
        assert_relative_eq!(
            hitting_time(&d, 2.0).unwrap().unwrap(),
            1.0,
            epsilon = 1e-10
        );
        assert_eq!(hitting_time(&Driver::zero(0.5), 2.0).unwrap(), None);
    }

    #[test]
    fn start_on_driver_is_rejected() {
        let d = Driver::zero(1.0);
        assert!(evolve_point_down(&d, c(0.0, 0.0), 0.5, 10).is_err());
        assert!(hitting_time(&d, 0.0).is_err());
    }

    #[test]
    fn downward_swallowing_is_reported() {
        // i is swallowed at t = 1/4 by the zero driver.
        let d = Driver::zero(1.0);
        let p = evolve_point_down(&d, c(0.0, 1.0), 0.5, 2000).unwrap();
        assert!(!p.alive);
        assert!((p.swallow_time.unwrap() - 0.25).abs() < 1e-8, "{:?}", p);
        assert!(p.position.re.is_finite());
    }

    #[test]
    fn zero_driver_trace_is_vertical() {
        let d = Driver::zero(1.0);
        let tr = trace_curve(&d, 1.0, 100).unwrap();
        for (t, z) in tr.times.iter().zip(&tr.points) {
            assert!((z - c(0.0, 2.0 * t.sqrt())).norm() < 1e-12, "{t} {z}");
        }
    }

    #[test]
    fn sqrt_driver_traces_straight_ray() {
        let cc = 2f64.sqrt();
        let alpha = slit_alpha(cc);
        assert_relative_eq!(alpha, 1.0 / 3.0, epsilon = 1e-15);
        let d = Driver::new("sqrt", 1.0, move |t: f64| cc * t.sqrt());
        // A single substep is exact.
        let tip = trace_tip(&d, 1.0, 1).unwrap();
        assert_relative_eq!(tip.arg(), alpha * std::f64::consts::PI, epsilon = 1e-14);
        let tr = trace_curve_sampled(&d, 1.0, 2000, 40).unwrap();
        for z in tr.points.iter().skip(1) {
            assert!((z.arg() - std::f64::consts::PI / 3.0).abs() < 2e-3, "{z}");
        }
    }

    #[test]
    fn capacity_coefficient_is_minus_two_t() {
        let d = Driver::new("sin", 1.0, |t: f64| (3.0 * t).sin());
        let a = trace_capacity_coefficient(&d, 1.0, 500).unwrap();
        assert!((a + 2.0).abs() < 10.0 / 500.0, "{a}");
    }

    #[test]
    fn tip_point_matches_trace_for_smooth_driver() {
        let d = Driver::linear(1.0, 1.0);
        let a = tip_point(&d, 1.0, 400).unwrap();
        let b = tip_point(&d, 1.0, 800).unwrap();
        assert!((a - b).norm() < 1e-11);
        let tr = trace_tip(&d, 1.0, 4000).unwrap();
        assert!((a - tr).norm() < 1e-3, "{a} {tr}");
        assert!((tip_point(&Driver::zero(1.0), 1.0, 50).unwrap() - c(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn base_images_of_zero_and_sqrt_drivers() {
        let (x, y) = base_images(&Driver::zero(1.0), 1.0, 100).unwrap();
        assert_relative_eq!(x, -2.0, epsilon = 1e-12);
        assert_relative_eq!(y, 2.0, epsilon = 1e-12);
        let cc = 2f64.sqrt();
        let d = Driver::new("sqrt", 1.0, move |t: f64| cc * t.sqrt());
        let (x, y) = base_images(&d, 1.0, 200).unwrap();
        assert_relative_eq!(x, -2.0 * 2f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(y, 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn scaling_and_reversal() {
        let cc = 1.7;
        let d = Driver::new("sqrt", 2.0, move |t: f64| cc * t.sqrt());
        let s = scale_driver(&d, 3.0).unwrap();
        assert_relative_eq!(s.horizon(), 18.0);
        for t in [0.0, 0.3, 5.0, 18.0] {
            assert_relative_eq!(s.eval(t), d.eval(t), epsilon = 1e-12);
        }
        assert!(scale_driver(&d, 0.0).is_err());
        let lin = Driver::new("sq", 1.0, |t: f64| t * t + 0.5);
        let r = reverse_driver(&lin, 1.0).unwrap();
        assert_eq!(r.eval(0.0), 0.0);
        let rr = reverse_driver(&r, 1.0).unwrap();
        for t in [0.0, 0.25, 0.7, 1.0] {
            assert_relative_eq!(rr.eval(t), lin.eval(t) - lin.eval(0.0), epsilon = 1e-14);
        }
    }

    #[test]
    fn up_down_duality() {
        let d = Driver::new("sin", 1.0, |t: f64| (2.0 * t).sin())
            .with_derivative(|t| 2.0 * (2.0 * t).cos());
        let rev = reverse_driver(&d, 1.0).unwrap();
        let end = d.eval(1.0);
        for z0 in [c(0.3, 1.0), c(-1.0, 0.5), c(2.0, 2.0)] {
            let down = evolve_point_down(&d, z0, 1.0, 2000).unwrap();
            let centered = down.position - end;
            let up = evolve_point_up(&rev, centered, 1.0, 2000).unwrap();
            assert!((up.position + end - z0).norm() < 1e-9, "{z0}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn zero_driver_down_matches_sqrt(re in 0.2..3.0f64, left in any::<bool>(), im in 0.1..3.0f64, t in 0.0..2.0f64) {
            let z0 = c(if left { -re } else { re }, im);
            let p = evolve_point_down(&Driver::zero(2.0), z0, t, 400).unwrap();
            let mut exact = (z0 * z0 + 4.0 * t).sqrt();
            if exact.im < 0.0 {
                exact = -exact;
            }
            prop_assert!((p.position - exact).norm() < 1e-8);
        }

        #[test]
        fn real_points_stay_real_upward(x in 0.5..3.0f64, slope in -1.0..1.0f64) {
            let d = Driver::linear(slope, 0.05);
            let p = evolve_point_up(&d, c(x, 0.0), 0.05, 200).unwrap();
            prop_assert_eq!(p.position.im, 0.0);
        }

        #[test]
        fn scaling_is_exact(r in 0.1..10.0f64, t in 0.0..1.0f64) {
            let d = Driver::new("cube", 1.0, |t: f64| t.powi(3));
            let s = scale_driver(&d, r).unwrap();
            prop_assert!((s.eval(r * r * t) - r * d.eval(t)).abs() < 1e-12 * r.max(1.0));
        }
    }
}
