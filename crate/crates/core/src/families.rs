//! Family-level structure of the two minimizer families: their ODE systems,
//! universality, algebraic varieties, the rational map of the limit curve,
//! the even-angle approach and distinctness of the two families.

use crate::drivers::{
    emw_xi, gamma0_xi, universal_gamma_lambda, universal_truncation_time, wang_lambda_down,
    wang_tip_image, wang_xi, wang_xi_extended, EmwParams, WangParams,
};
use crate::error::{check_range, Result};
use crate::loewner_flow::{
    base_images, end_graded_grid, reverse_driver, tip_point, trace_curve_grid, trace_curve_sampled,
    CurveTrace, Driver,
};
use crate::numerics::{hausdorff, rk4_step};
use crate::welding::wang_weld_endpoints;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

/// Sampled solution of a three-dimensional (driver, x, y) ODE system.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    /// Uniform sample times.
    pub times: Vec<f64>,
    /// Driver samples.
    pub driver: Vec<f64>,
    /// Second state component (`x`).
    pub x: Vec<f64>,
    /// Third state component (`y`).
    pub y: Vec<f64>,
}

fn solve3(f: impl Fn(&[f64; 3]) -> [f64; 3], start: [f64; 3], t_end: f64, n: usize) -> OdeSolution {
    let h = t_end / n as f64;
    let rhs = |_t: f64, s: &[f64; 3]| f(s);
    let mut s = start;
    let mut out = OdeSolution {
        times: vec![0.0],
        driver: vec![s[0]],
        x: vec![s[1]],
        y: vec![s[2]],
    };
    for k in 0..n {
        s = rk4_step(&rhs, k as f64 * h, &s, h);
        out.times.push(if k + 1 == n {
            t_end
        } else {
            (k + 1) as f64 * h
        });
        out.driver.push(s[0]);
        out.x.push(s[1]);
        out.y.push(s[2]);
    }
    out
}

/// Downward system `λ̇ = 8x/|z|², ẋ = −6x/|z|², ẏ = −2y/|z|²` for the centered
/// image `z = x + iy` of `e^{iθ}`, on `[0, 0.9τ_θ]` with `n` RK4 steps.
pub fn wang_ode_solve(theta: f64, n: usize) -> Result<OdeSolution> {
    let p = WangParams::new(theta)?;
    let f = |s: &[f64; 3]| {
        let r2 = s[1] * s[1] + s[2] * s[2];
        [8.0 * s[1] / r2, -6.0 * s[1] / r2, -2.0 * s[2] / r2]
    };
    Ok(solve3(f, [0.0, theta.cos(), theta.sin()], 0.9 * p.tau, n))
}

/// Residuals of the downward system against the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WangOdeReport {
    /// `sup |λ − λ_θ|`.
    pub driver_error: f64,
    /// `sup |z − G_t(e^{iθ})|`.
    pub tip_error: f64,
    /// `sup |x sin³θ − cos θ·y³|`.
    pub conservation: f64,
}

/// Compares [`wang_ode_solve`] with the closed-form driver and tip image.
pub fn wang_ode_report(theta: f64, n: usize) -> Result<WangOdeReport> {
    let sol = wang_ode_solve(theta, n)?;
    let lambda = wang_lambda_down(theta)?;
    let (s3, c) = (theta.sin().powi(3), theta.cos());
    let mut rep = WangOdeReport {
        driver_error: 0.0,
        tip_error: 0.0,
        conservation: 0.0,
    };
    for i in 0..sol.times.len() {
        let t = sol.times[i];
        let z = Complex64::new(sol.x[i], sol.y[i]);
        rep.driver_error = rep.driver_error.max((sol.driver[i] - lambda.eval(t)).abs());
        rep.tip_error = rep.tip_error.max((z - wang_tip_image(theta, t)?).norm());
        rep.conservation = rep
            .conservation
            .max((sol.x[i] * s3 - c * sol.y[i].powi(3)).abs());
    }
    Ok(rep)
}

/// Upward system `ξ̇ = −4/x − 4/y, ẋ = 2/x + 4/y, ẏ = 4/x + 2/y` for the
/// centered welded points, on `[0, 0.9τ]` with `n` RK4 steps.
pub fn emw_ode_solve(x0: f64, y0: f64, n: usize) -> Result<OdeSolution> {
    let p = EmwParams::new(x0, y0)?;
    let f = |s: &[f64; 3]| {
        let (ix, iy) = (1.0 / s[1], 1.0 / s[2]);
        [
            -4.0 * ix - 4.0 * iy,
            2.0 * ix + 4.0 * iy,
            4.0 * ix + 2.0 * iy,
        ]
    };
    Ok(solve3(f, [0.0, x0, y0], 0.9 * p.tau, n))
}

/// Residuals of the upward system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmwOdeReport {
    /// `sup |ξ − ξ_{x0,y0}|` against the closed-form upward driver.
    pub driver_error: f64,
    /// `sup |ξ̇ − 16(ξ − ξ_τ)/((ξ − ξ_τ)² − (32/3)(τ − t))|` along the solution.
    pub auxiliary_residual: f64,
    /// `sup |Ȧ + (3/4)ξ̇|` by central differences, `A = (x + y)/2`.
    pub average_residual: f64,
    /// `sup |Q̇ + 24|` by central differences, `Q = (y − x)² − 2xy`.
    pub conserved_rate_residual: f64,
}

/// Compares [`emw_ode_solve`] with the closed form and its first integrals.
pub fn emw_ode_report(x0: f64, y0: f64, n: usize) -> Result<EmwOdeReport> {
    let p = EmwParams::new(x0, y0)?;
    let sol = emw_ode_solve(x0, y0, n)?;
    let xi = emw_xi(x0, y0)?;
    let xi_tau = 2.0 / 3.0 * (x0 + y0);
    let mut rep = EmwOdeReport {
        driver_error: 0.0,
        auxiliary_residual: 0.0,
        average_residual: 0.0,
        conserved_rate_residual: 0.0,
    };
    let q = |i: usize| (sol.y[i] - sol.x[i]).powi(2) - 2.0 * sol.x[i] * sol.y[i];
    for i in 0..sol.times.len() {
        let t = sol.times[i];
        rep.driver_error = rep.driver_error.max((sol.driver[i] - xi.eval(t)).abs());
        let rate = -4.0 / sol.x[i] - 4.0 / sol.y[i];
        let d = sol.driver[i] - xi_tau;
        let den = d * d - 32.0 / 3.0 * (p.tau - t);
        if den != 0.0 {
            rep.auxiliary_residual = rep.auxiliary_residual.max((rate - 16.0 * d / den).abs());
        }
        if i > 0 && i + 1 < sol.times.len() {
            let dt = sol.times[i + 1] - sol.times[i - 1];
            let da = 0.5 * (sol.x[i + 1] + sol.y[i + 1] - sol.x[i - 1] - sol.y[i - 1]) / dt;
            let dxi = (sol.driver[i + 1] - sol.driver[i - 1]) / dt;
            rep.average_residual = rep.average_residual.max((da + 0.75 * dxi).abs());
            rep.conserved_rate_residual = rep
                .conserved_rate_residual
                .max(((q(i + 1) - q(i - 1)) / dt + 24.0).abs());
        }
    }
    Ok(rep)
}

/// A point together with an exact polynomial residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarietyResidual {
    /// Evaluated point.
    pub point: Complex64,
    /// Polynomial value at the point.
    pub residual: f64,
}

/// `(4 − 3x)y² − 3x(x − 1)²`, vanishing on the limit curve `γ₀`.
pub fn variety_residual_gamma0(z: Complex64) -> VarietyResidual {
    let (x, y) = (z.re, z.im);
    VarietyResidual {
        point: z,
        residual: (4.0 - 3.0 * x) * y * y - 3.0 * x * (x - 1.0).powi(2),
    }
}

/// `(x² + y²)² + 4xy`, vanishing on the universal curve `Γ`.
pub fn variety_residual_universal(z: Complex64) -> VarietyResidual {
    let (x, y) = (z.re, z.im);
    VarietyResidual {
        point: z,
        residual: (x * x + y * y).powi(2) + 4.0 * x * y,
    }
}

/// Distance of `z²` from the circle `|w + i| = 1` (which contains `Γ²`).
pub fn gamma_square_circle_distance(z: Complex64) -> f64 {
    ((z * z + Complex64::i()).norm() - 1.0).abs()
}

/// `R(z) = z²(z − 3)/(1 − 3z)`, real on `ℝ` and on `γ₀`.
pub fn rational_map_r(z: Complex64) -> Complex64 {
    z * z * (z - 3.0) / (1.0 - 3.0 * z)
}

/// Downward driver of `γ₀` (the reversal of `ξ₀ = −(8/√3)√t` on `[0, 1/12]`).
pub fn gamma0_lambda() -> Result<Driver> {
    let xi = gamma0_xi();
    reverse_driver(&xi, xi.horizon()).map(|d| d.relabel("gamma0_lambda"))
}

/// Trace of `γ₀` with `n` zipper steps and `samples` output points. The
/// driver has a square-root singularity where `γ₀` lands on `ℝ`, so the steps
/// are graded quadratically towards the terminal time.
pub fn gamma0_trace(n: usize, samples: usize) -> Result<CurveTrace> {
    let d = gamma0_lambda()?;
    trace_curve_grid(&d, &end_graded_grid(d.horizon(), n, 2.0), samples)
}

/// Trace of the universal curve `Γ` up to capacity `fraction·π/6`.
pub fn universal_trace(fraction: f64, n: usize, samples: usize) -> Result<CurveTrace> {
    check_range(
        "fraction",
        fraction,
        fraction > 0.0 && fraction <= 1.0,
        "fraction must lie in (0, 1]",
    )?;
    let d = universal_gamma_lambda();
    trace_curve_sampled(&d, fraction * d.horizon(), n, samples)
}

/// Angle between the negative real axis and the secant through the last 1% of
/// the trace samples (at least one sample), i.e. `π − arg(γ_{n−k} − γ_n)`.
/// For a curve landing on `ℝ` from above this is the angle it makes with the
/// part of `ℝ` to the left of the landing point.
pub fn terminal_secant_angle(trace: &CurveTrace) -> f64 {
    let n = trace.points.len();
    let k = (n / 100).max(1).min(n - 1);
    let d = trace.points[n - 1 - k] - trace.points[n - 1];
    PI - d.arg()
}

/// Capacity time `t_α` and scale `r` under which the minimizer through
/// `e^{iθ}`, continued to `t_α`, becomes the minimizer through `e^{iα}`.
pub fn wang_universality_params(theta: f64, alpha: f64) -> Result<(f64, f64)> {
    let pt = WangParams::new(theta)?;
    let pa = WangParams::new(alpha)?;
    if pt.b() == 0.0 || pa.b() == 0.0 {
        return Ok((pa.tau, 1.0));
    }
    let ratio = (theta.sin().powi(3) / theta.cos()) * (alpha.cos() / alpha.sin().powi(3));
    let t_alpha = ratio / 6.0 * (1.0 - (2.0 * alpha).cos() / 2.0);
    Ok((t_alpha, ratio.sqrt()))
}

/// Hausdorff distance between the rescaled curve generated by `ξ_θ` on
/// `[0, t_α]` and the traced minimizer through `e^{iα}` (same side of `iℝ`).
pub fn wang_universality_check(theta: f64, alpha: f64, n: usize, samples: usize) -> Result<f64> {
    let (t_alpha, r) = wang_universality_params(theta, alpha)?;
    let extended = wang_xi_extended(theta, t_alpha)?;
    let down = reverse_driver(&extended, t_alpha)?;
    let (a, b) = rayon::join(
        || trace_curve_sampled(&down, t_alpha, n, samples),
        || wang_lambda_down(alpha).and_then(|d| trace_curve_sampled(&d, d.horizon(), n, samples)),
    );
    let a: Vec<Complex64> = a?.points.iter().map(|z| z / r).collect();
    Ok(hausdorff(&a, &b?.points))
}

/// `|−x/y − r|` for the pair welded by the truncation `Γ[0, t(r)]`.
pub fn emw_universality_check(r: f64, n: usize) -> Result<f64> {
    let t = universal_truncation_time(r)?;
    let (x, y) = base_images(&universal_gamma_lambda(), t, n)?;
    Ok((-x / y - r).abs())
}

/// Angles `arg G_t(γ(T))` of the centered image of the tip after mapping down
/// `γ[0, t]`, for each `t` in `grid` (each `t < T`).
pub fn even_angle_check(
    driver: &Driver,
    t_end: f64,
    grid: &[f64],
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    grid.par_iter()
        .map(|&t| {
            check_range(
                "t",
                t,
                t >= 0.0 && t < t_end,
                "grid times must lie in [0, T)",
            )?;
            let rest = driver.shifted(t);
            Ok((t, tip_point(&rest, t_end - t, n)?.arg()))
        })
        .collect()
}

/// Default grid for [`even_angle_check`]: `T(1 − 10^{-k/4})`, ending at `T − 10⁻⁴T`.
pub fn even_angle_grid(t_end: f64) -> Vec<f64> {
    (0..=16)
        .map(|k| t_end * (1.0 - 10f64.powf(-(k as f64) / 4.0)))
        .collect()
}

/// Whether the last angle of an even-angle run is within `tol` of `π/2`.
pub fn even_angle_terminal_ok(angles: &[(f64, f64)], tol: f64) -> bool {
    angles
        .last()
        .is_some_and(|(_, a)| (a - FRAC_PI_2).abs() <= tol)
}

/// Sup-norm gap on `[0, min(τ_θ, τ)]` between the upward minimizer driver
/// through `e^{iθ}` and the upward driver of the welding minimizer with the
/// same welding endpoints `(x_θ, y_θ)`.
pub fn distinctness_gap(theta: f64, samples: usize) -> Result<f64> {
    let wang = wang_xi(theta)?;
    let (x, y) = wang_weld_endpoints(theta)?;
    let emw = emw_xi(x, y)?;
    let t_max = wang.horizon().min(emw.horizon());
    Ok((0..=samples)
        .map(|k| {
            let t = t_max * k as f64 / samples as f64;
            (wang.eval(t) - emw.eval(t)).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner_flow::trace_tip;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn wang_ode_right_angle() {
        let sol = wang_ode_solve(FRAC_PI_2, 400).unwrap();
        for i in 0..sol.times.len() {
            assert!(sol.x[i].abs() < 1e-15 && sol.driver[i].abs() < 1e-15);
            assert_relative_eq!(sol.y[i], (1.0 - 4.0 * sol.times[i]).sqrt(), epsilon = 1e-10);
        }
    }

    #[test]
    fn wang_ode_matches_closed_form() {
        for theta in [FRAC_PI_3, 1.2, 2.0] {
            let rep = wang_ode_report(theta, 4000).unwrap();
            assert!(
                rep.driver_error < 1e-6 && rep.tip_error < 1e-6,
                "{theta}: {rep:?}"
            );
            assert!(rep.conservation < 1e-8, "{theta}: {rep:?}");
        }
    }

    #[test]
    fn emw_ode_matches_closed_form() {
        let rep = emw_ode_report(-1.0, 2.0, 4000).unwrap();
        assert!(rep.driver_error < 1e-6, "{rep:?}");
        assert!(rep.auxiliary_residual < 1e-6, "{rep:?}");
        assert!(rep.average_residual < 1e-6, "{rep:?}");
        assert!(rep.conserved_rate_residual < 1e-6, "{rep:?}");
        let sym = emw_ode_solve(-1.0, 1.0, 200).unwrap();
        for i in 0..sym.times.len() {
            assert!(sym.driver[i].abs() < 1e-14);
            // ẋ = 2/x − 4/x with y = −x, so x² = 1 − 4t
            assert_relative_eq!(sym.x[i], -(1.0 - 4.0 * sym.times[i]).sqrt(), epsilon = 1e-9);
        }
    }

    #[test]
    fn varieties_and_rational_map() {
        assert_eq!(
            variety_residual_gamma0(Complex64::new(0.0, 0.0)).residual,
            0.0
        );
        assert_eq!(
            variety_residual_gamma0(Complex64::new(1.0, 0.0)).residual,
            0.0
        );
        assert_eq!(
            variety_residual_universal(Complex64::new(0.0, 0.0)).residual,
            0.0
        );
        assert_eq!(variety_residual_universal(Complex64::i()).residual, 1.0);
        assert_eq!(
            rational_map_r(Complex64::new(1.0, 0.0)),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(rational_map_r(Complex64::new(3.0, 0.0)).norm(), 0.0);
        // local orders 2, 3, 2 at the fixed points 0, 1, ∞
        let e = 1e-4;
        let z = Complex64::new(e, 0.0);
        assert_relative_eq!(rational_map_r(z).re / (e * e), -3.0, epsilon = 1e-2);
        let w = Complex64::new(1.0 + e, 0.0);
        assert_relative_eq!(
            (rational_map_r(w) - 1.0).re / e.powi(3),
            -0.5,
            epsilon = 1e-2
        );
        let big = Complex64::new(1.0 / e, 0.0);
        assert_relative_eq!(rational_map_r(big).re * e * e * 3.0, -1.0, epsilon = 1e-3);
        // points of the variety are real under R
        for x in [0.1, 0.5, 0.9] {
            let y = (3.0 * x * (x - 1.0f64).powi(2) / (4.0 - 3.0 * x)).sqrt();
            assert!(rational_map_r(Complex64::new(x, y)).im.abs() < 1e-12);
        }
        // Γ² lies on the circle |w + i| = 1
        for phi in [1.7, 2.0, 2.6] {
            let rho = (-4.0 * f64::cos(phi) * f64::sin(phi)).sqrt();
            let z = Complex64::from_polar(rho, phi);
            assert!(variety_residual_universal(z).residual.abs() < 1e-12);
            assert!(gamma_square_circle_distance(z) < 1e-12);
        }
    }

    #[test]
    fn gamma0_trace_lies_on_variety() {
        let tr = gamma0_trace(20_000, 400).unwrap();
        let tip = tr.tip();
        assert!((tip - Complex64::new(1.0, 0.0)).norm() < 2e-3, "{tip}");
        let worst = tr
            .points
            .iter()
            .map(|z| variety_residual_gamma0(*z).residual.abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "{worst}");
        let im = tr
            .points
            .iter()
            .map(|z| rational_map_r(*z).im.abs())
            .fold(0.0, f64::max);
        assert!(im < 1e-3, "{im}");
        let ang = terminal_secant_angle(&tr);
        assert!((ang - FRAC_PI_3).abs() < 0.1, "{ang}");
    }

    #[test]
    fn universal_trace_lies_on_variety() {
        let tr = universal_trace(0.99, 20_000, 200).unwrap();
        let worst = tr
            .points
            .iter()
            .map(|z| variety_residual_universal(*z).residual.abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "{worst}");
        let circ = tr
            .points
            .iter()
            .map(|z| gamma_square_circle_distance(*z))
            .fold(0.0, f64::max);
        assert!(circ < 1e-3, "{circ}");
    }

    #[test]
    fn wang_universality() {
        let (t, r) = wang_universality_params(FRAC_PI_3, FRAC_PI_3).unwrap();
        assert_relative_eq!(r, 1.0, epsilon = 1e-14);
        assert_relative_eq!(t, WangParams::new(FRAC_PI_3).unwrap().tau, epsilon = 1e-14);
        let (t, r) = wang_universality_params(FRAC_PI_3, FRAC_PI_4).unwrap();
        assert!((r - 1.612).abs() < 1e-3 && (t - 0.433).abs() < 1e-3);
        let d = wang_universality_check(FRAC_PI_3, FRAC_PI_4, 20_000, 200).unwrap();
        assert!(d < 1e-3, "{d}");
    }

    #[test]
    fn emw_universality() {
        for r in [0.25, 0.5] {
            let res = emw_universality_check(r, 2000).unwrap();
            assert!(res < 1e-4, "{r}: {res}");
        }
    }

    #[test]
    fn even_angle() {
        let zero = Driver::zero(1.0);
        let a = even_angle_check(&zero, 1.0, &[0.0, 0.5, 0.9], 200).unwrap();
        for (_, ang) in a {
            assert_relative_eq!(ang, FRAC_PI_2, epsilon = 1e-12);
        }
        let lin = Driver::linear(1.0, 1.0);
        let grid = even_angle_grid(1.0);
        let a = even_angle_check(&lin, 1.0, &grid, 400).unwrap();
        assert!(even_angle_terminal_ok(&a, 0.05), "{a:?}");
        assert!((a[0].1 - FRAC_PI_2).abs() > 0.05);
        let xi = wang_xi(FRAC_PI_3).unwrap();
        let down = reverse_driver(&xi, xi.horizon()).unwrap();
        let a =
            even_angle_check(&down, down.horizon(), &even_angle_grid(down.horizon()), 400).unwrap();
        assert!(even_angle_terminal_ok(&a, 0.05), "{a:?}");
        // sanity: the tip used by the check is the traced tip
        let tip = tip_point(&lin, 1.0, 400).unwrap();
        assert!((tip - trace_tip(&lin, 1.0, 4000).unwrap()).norm() < 1e-3);
    }

    #[test]
    fn distinct_families() {
        assert!(distinctness_gap(FRAC_PI_3, 400).unwrap() > 1e-3);
        assert_eq!(distinctness_gap(FRAC_PI_2, 400).unwrap(), 0.0);
    }
}
