//! Closed-form drivers, terminal data and parameter maps for the explicit
//! families: point-constrained (Wang) minimizers, welding-constrained (EMW)
//! minimizers and their universal curve, the orthogonal circular arc, straight
//! slits (`c√t`), and the corner curve.

use crate::error::{check_range, Result};
use crate::loewner_flow::{slit_alpha, Driver};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Tolerance within which an angle is treated as exactly `π/2`.
const RIGHT_ANGLE_TOL: f64 = 1e-15;

fn is_right_angle(theta: f64) -> bool {
    (theta - FRAC_PI_2).abs() < RIGHT_ANGLE_TOL
}

/// Parameters of the minimizer from `0` through `e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WangParams {
    /// Target angle in `(0, π)`.
    pub theta: f64,
    /// Capacity time at which `e^{iθ}` is reached: `(1 − cos(2θ)/2)/6`.
    pub tau: f64,
    /// Terminal value of the upward driver: `−(4/3)cos θ`.
    pub terminal_xi: f64,
}

impl WangParams {
    /// Validates `θ ∈ (0, π)`.
    pub fn new(theta: f64) -> Result<Self> {
        check_range(
            "theta",
            theta,
            theta > 0.0 && theta < PI,
            "angle must lie in (0, π)",
        )?;
        Ok(Self {
            theta,
            tau: wang_tau(theta),
            terminal_xi: -4.0 / 3.0 * theta.cos(),
        })
    }

    /// `b = cos θ / sin³θ`, the constant in `x = b·y³` along the tip trajectory.
    pub fn b(&self) -> f64 {
        if is_right_angle(self.theta) {
            0.0
        } else {
            self.theta.cos() / self.theta.sin().powi(3)
        }
    }

    /// Squared imaginary part `Y = y²` of the centered tip image as a function of
    /// the remaining time `σ = τ − t`: the real root of `b²Y³/3 + Y = 4σ`.
    pub fn tip_y2(&self, sigma: f64) -> f64 {
        let b = self.b();
        if b == 0.0 {
            return 4.0 * sigma;
        }
        if sigma <= 0.0 {
            return 0.0;
        }
        // Cardano with k = 1/b²; A + B rewritten as (A³ + B³)/(A² − AB + B²)
        // to avoid cancellation.
        let k = 1.0 / (b * b);
        let r = (36.0 * sigma * sigma + k).sqrt();
        let a = (6.0 * sigma + r).cbrt();
        let bb = (-k / (6.0 * sigma + r)).cbrt();
        k.cbrt() * 12.0 * sigma / (a * a - a * bb + bb * bb)
    }
}

/// Terminal time `τ_θ = (1 − cos(2θ)/2)/6` of the minimizer through `e^{iθ}`.
pub fn wang_tau(theta: f64) -> f64 {
    (1.0 - (2.0 * theta).cos() / 2.0) / 6.0
}

/// Upward driver `ξ_θ` of the minimizer through `e^{iθ}` on `[0, τ_θ]`.
///
/// `θ = π/2` gives the zero driver on `[0, 1/4]`; `θ > π/2` gives `−ξ_{π−θ}`.
pub fn wang_xi(theta: f64) -> Result<Driver> {
    let p = WangParams::new(theta)?;
    wang_xi_extended(theta, p.tau)
}

/// `ξ_θ` with an arbitrary horizon: the closed form is defined for all `t ≥ 0`,
/// which is used by the universality statement.
pub fn wang_xi_extended(theta: f64, horizon: f64) -> Result<Driver> {
    let p = WangParams::new(theta)?;
    check_range(
        "horizon",
        horizon,
        horizon >= 0.0,
        "horizon must be nonnegative",
    )?;
    let b = p.b();
    if b == 0.0 {
        return Ok(Driver::zero(horizon).relabel("wang_xi(pi/2)"));
    }
    Ok(
        Driver::new(format!("wang_xi({theta})"), horizon, move |t: f64| {
            -4.0 / 3.0 * b * p.tip_y2(t).powf(1.5)
        })
        .with_derivative(move |t: f64| {
            let y = p.tip_y2(t).sqrt();
            -8.0 * b * y / (b * b * y.powi(4) + 1.0)
        }),
    )
}

/// Downward driver `λ_θ(t) = ξ_θ(τ − t) − ξ_θ(τ)` in closed (Cardano) form.
pub fn wang_lambda_down(theta: f64) -> Result<Driver> {
    let p = WangParams::new(theta)?;
    let b = p.b();
    if b == 0.0 {
        return Ok(Driver::zero(p.tau).relabel("wang_lambda(pi/2)"));
    }
    let cos = theta.cos();
    let tau = p.tau;
    Ok(
        Driver::new(format!("wang_lambda({theta})"), tau, move |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            4.0 / 3.0 * (cos - b * p.tip_y2(tau - t).powf(1.5))
        })
        .with_derivative(move |t: f64| {
            let y = p.tip_y2(tau - t).sqrt();
            8.0 * b * y / (b * b * y.powi(4) + 1.0)
        }),
    )
}

/// Centered downward image `G_t(e^{iθ}) = x(t) + i y(t)` of the target point
/// under the minimizer's flow, `0 ≤ t ≤ τ_θ`.
pub fn wang_tip_image(theta: f64, t: f64) -> Result<Complex64> {
    let p = WangParams::new(theta)?;
    check_range(
        "t",
        t,
        t >= 0.0 && t <= p.tau * (1.0 + 1e-12),
        "time must lie in [0, τ_θ]",
    )?;
    if t == 0.0 {
        return Ok(Complex64::from_polar(1.0, theta));
    }
    let y = p.tip_y2(p.tau - t).sqrt();
    Ok(Complex64::new(p.b() * y.powi(3), y))
}

/// Upward driver `ξ₀(t) = −(8/√3)√t` on `[0, 1/12]` of the limit curve `γ₀`.
pub fn gamma0_xi() -> Driver {
    let c = 8.0 / 3f64.sqrt();
    Driver::new("gamma0_xi", 1.0 / 12.0, move |t: f64| {
        -c * t.max(0.0).sqrt()
    })
    .with_derivative(move |t: f64| -0.5 * c / t.sqrt())
}

/// Parameters of the minimizer welding `x0 < 0 < y0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmwParams {
    /// Left welded point.
    pub x0: f64,
    /// Right welded point.
    pub y0: f64,
    /// Ratio `r = −x0/y0`.
    pub r: f64,
    /// Hitting time `(x0² − 4x0y0 + y0²)/24`.
    pub tau: f64,
    /// Terminal downward driver value `−(2/3)(x0 + y0)`.
    pub terminal_lambda: f64,
}

impl EmwParams {
    /// Validates `x0 < 0 < y0`.
    pub fn new(x0: f64, y0: f64) -> Result<Self> {
        check_range("x0", x0, x0 < 0.0, "left point must be negative")?;
        check_range("y0", y0, y0 > 0.0, "right point must be positive")?;
        Ok(Self::unchecked(x0, y0))
    }

    fn unchecked(x0: f64, y0: f64) -> Self {
        Self {
            x0,
            y0,
            r: -x0 / y0,
            tau: (x0 * x0 - 4.0 * x0 * y0 + y0 * y0) / 24.0,
            terminal_lambda: -2.0 / 3.0 * (x0 + y0),
        }
    }
}

/// Closed-form downward driver value; valid for `x0 ≤ 0 < y0`, `x0 + y0 ≠ 0`.
fn emw_lambda_value(x0: f64, y0: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = x0 + y0;
    let diff = y0 - x0;
    let d = diff * diff / (24f64.powf(2.0 / 3.0) * s.abs().powf(2.0 / 3.0));
    let q = diff.powi(6) / (576.0 * s * s);
    let a = (q - t * t).max(0.0);
    let w = Complex64::new(a.sqrt(), t).powf(2.0 / 3.0);
    let val = d + 2.0 * w.re;
    -16.0 / 3f64.sqrt() * s.signum() * t.powf(1.5) * val.powf(-1.5)
}

/// Derivative from the closed first-order relation `λ̇ = −16λ/(λ² − (32/3)t)`.
fn emw_lambda_slope(lambda: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let den = lambda * lambda - 32.0 / 3.0 * t;
    if den.abs() <= 1e-12 * (lambda * lambda + t) {
        return f64::INFINITY;
    }
    -16.0 * lambda / den
}

fn emw_driver(x0: f64, y0: f64, label: String) -> Driver {
    let p = EmwParams::unchecked(x0, y0);
    if x0 + y0 == 0.0 {
        return Driver::zero(p.tau).relabel(label);
    }
    Driver::new(label, p.tau, move |t| emw_lambda_value(x0, y0, t))
        .with_derivative(move |t| emw_lambda_slope(emw_lambda_value(x0, y0, t), t))
}

/// Downward driver `λ_{x0,y0}` of the minimizer welding `x0` to `y0`, on `[0, τ]`.
pub fn emw_lambda(x0: f64, y0: f64) -> Result<Driver> {
    EmwParams::new(x0, y0)?;
    Ok(emw_driver(x0, y0, format!("emw_lambda({x0},{y0})")))
}

/// Upward driver of the same curve, `ξ(t) = λ(τ − t) − λ(τ)`.
pub fn emw_xi(x0: f64, y0: f64) -> Result<Driver> {
    let d = emw_lambda(x0, y0)?;
    crate::loewner_flow::reverse_driver(&d, d.horizon())
        .map(|d| d.relabel(format!("emw_xi({x0},{y0})")))
}

/// Downward driver `λ_Γ` of the universal curve `(x² + y²)² = −4xy` on `[0, π/6]`.
pub fn universal_gamma_lambda() -> Driver {
    emw_driver(0.0, 2.0 * PI.sqrt(), "universal_gamma".into())
}

/// Capacity time `t(r)` at which the truncation of the universal curve is a
/// minimizer with welding ratio `r ∈ (0, 1)`.
pub fn universal_truncation_time(r: f64) -> Result<f64> {
    check_range("ratio", r, r > 0.0 && r < 1.0, "ratio must lie in (0, 1)")?;
    Ok(PI / 6.0 * (1.0 - r) * (r * r + 4.0 * r + 1.0) / (1.0 + r).powi(3))
}

/// Driver value `−(4√π/3)((1 − r)/(1 + r))^{3/2}` at the truncation time `t(r)`.
pub fn universal_terminal_value(r: f64) -> Result<f64> {
    check_range("ratio", r, r > 0.0 && r < 1.0, "ratio must lie in (0, 1)")?;
    Ok(-4.0 * PI.sqrt() / 3.0 * ((1.0 - r) / (1.0 + r)).powf(1.5))
}

/// Driver `λ₁(t) = (3/2)(1 − √(1 − 8t))` on `[0, 1/8]` of the arc of the circle
/// `|z − 1/2| = 1/2` from `0` to `1`.
pub fn circular_arc() -> Driver {
    Driver::new("circular_arc", 0.125, |t: f64| {
        1.5 * (1.0 - (1.0 - 8.0 * t).max(0.0).sqrt())
    })
    .with_derivative(|t: f64| 6.0 / (1.0 - 8.0 * t).sqrt())
}

/// Arc point `γ₁(t)`.
pub fn arc_point(t: f64) -> Complex64 {
    let s = (1.0 - 8.0 * t).max(0.0).sqrt();
    Complex64::new(1.0 - s, s.sqrt() * (1.0 - s).sqrt())
}

/// Time `(1 − sin⁴θ)/8` at which the arc tip has argument `θ ∈ (0, π/2]`.
pub fn arc_time_for_angle(theta: f64) -> Result<f64> {
    check_range(
        "theta",
        theta,
        theta > 0.0 && theta <= FRAC_PI_2,
        "angle must lie in (0, π/2]",
    )?;
    Ok((1.0 - theta.sin().powi(4)) / 8.0)
}

/// Centered welding endpoints `(x_t, y_t) = −1 + √(1−8t) ∓ √(1 − √(1−8t))`.
pub fn arc_welding_endpoints(t: f64) -> Result<(f64, f64)> {
    check_range(
        "t",
        t,
        (0.0..=0.125).contains(&t),
        "time must lie in [0, 1/8]",
    )?;
    let s = (1.0 - 8.0 * t).sqrt();
    let v = (1.0 - s).sqrt();
    Ok((-1.0 + s - v, -1.0 + s + v))
}

/// Time `1/8 − 2α²(1 − α)²` at which the arc welding has `y/(y − x) = α ∈ (0, 1/2]`.
pub fn arc_time_for_ratio(alpha: f64) -> Result<f64> {
    check_range(
        "alpha",
        alpha,
        alpha > 0.0 && alpha <= 0.5,
        "ratio must lie in (0, 1/2]",
    )?;
    Ok(0.125 - 2.0 * alpha * alpha * (1.0 - alpha) * (1.0 - alpha))
}

/// Uncentered base images `(g_t(0⁻), g_t(0⁺))` for the arc scaled by `2√2`
/// (driver `3√2(1 − √(1 − t))` on `[0, 1]`).
pub fn scaled_arc_base_images(t: f64) -> (f64, f64) {
    let r2 = 2f64.sqrt();
    let s = (1.0 - t).sqrt();
    let v = (1.0 - s).sqrt();
    (r2 - r2 * s - 2.0 * r2 * v, r2 - r2 * s + 2.0 * r2 * v)
}

/// Driver `λ(t) = c√t` of a straight slit, on `[0, horizon]`.
pub fn sqrt_driver(c: f64, horizon: f64) -> Driver {
    Driver::new(format!("sqrt({c})"), horizon, move |t: f64| {
        c * t.max(0.0).sqrt()
    })
    .with_derivative(move |t: f64| if c == 0.0 { 0.0 } else { 0.5 * c / t.sqrt() })
}

/// Angle fraction `α` of the slit generated by `c√t` (angle `πα` with `ℝ₊`).
pub fn sqrt_alpha(c: f64) -> f64 {
    slit_alpha(c)
}

/// Coefficient `c = 2(1 − 2α)/√(α(1 − α))` generating the slit of angle `πα`.
pub fn sqrt_c_from_alpha(alpha: f64) -> Result<f64> {
    check_range(
        "alpha",
        alpha,
        alpha > 0.0 && alpha < 1.0,
        "alpha must lie in (0, 1)",
    )?;
    Ok(2.0 * (1.0 - 2.0 * alpha) / (alpha * (1.0 - alpha)).sqrt())
}

/// Welded base endpoints `(x_t, y_t)` of the slit of angle `πα` at time `t`.
pub fn sqrt_endpoints(alpha: f64, t: f64) -> Result<(f64, f64)> {
    check_range(
        "alpha",
        alpha,
        alpha > 0.0 && alpha < 1.0,
        "alpha must lie in (0, 1)",
    )?;
    let s = t.sqrt();
    Ok((
        -2.0 * ((1.0 - alpha) / alpha).sqrt() * s,
        2.0 * (alpha / (1.0 - alpha)).sqrt() * s,
    ))
}

/// Driver of the corner curve: `0` on `[0, 1]` (vertical segment) followed by
/// `c√(t − 1)` on `[1, 2]` (a straight slit at angle `πα(c)` after mapping down).
pub fn corner_driver(c: f64) -> Driver {
    Driver::new(format!("corner({c})"), 2.0, move |t: f64| {
        if t <= 1.0 {
            0.0
        } else {
            c * (t - 1.0).sqrt()
        }
    })
}
