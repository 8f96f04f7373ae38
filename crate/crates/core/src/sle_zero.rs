//! Deterministic SLE₀(ρ₁,…,ρₙ): the driver is steered by force points through
//! a coupled ODE system, integrated downward or upward.
//!
//! Downward: `λ̇ = Σ −ρ_j Re(1/(U_j − λ))`, `U̇_j = 2/(U_j − λ)`.
//! Upward: `ξ̇ = Σ ρ_j Re(1/(V_j − ξ))`, `V̇_j = −2/(V_j − ξ)`.
//! The system is advanced in centered coordinates `Z_j = U_j − λ`.

use crate::drivers::{scaled_arc_base_images, wang_lambda_down, WangParams};
use crate::error::{LabError, Result};
use crate::loewner_flow::Driver;
use crate::output::csv_string;
use num_complex::Complex64;

/// Flow direction of the Loewner chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Mapping-down flow `ġ = 2/(g − λ)`.
    Down,
    /// Upward flow `ḣ = −2/(h − ξ)`.
    Up,
}

impl Direction {
    /// The opposite direction.
    pub fn flipped(self) -> Self {
        match self {
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}

/// Initial data of an SLE₀ run.
#[derive(Debug, Clone, PartialEq)]
pub struct SleZeroConfig {
    /// Flow direction.
    pub direction: Direction,
    /// Weights `ρ_j`, one per force point.
    pub rho: Vec<f64>,
    /// Initial driver value.
    pub start_driver: f64,
    /// Initial force points (closed upper half-plane).
    pub start_force_points: Vec<Complex64>,
}

impl SleZeroConfig {
    /// Builds and validates a configuration.
    pub fn new(
        direction: Direction,
        rho: Vec<f64>,
        start_driver: f64,
        start_force_points: Vec<Complex64>,
    ) -> Result<Self> {
        let cfg = Self {
            direction,
            rho,
            start_driver,
            start_force_points,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.rho.is_empty() || self.rho.len() != self.start_force_points.len() {
            return Err(LabError::Precondition(
                "need one weight per force point and at least one force point".into(),
            ));
        }
        for z in &self.start_force_points {
            if !(z.re.is_finite() && z.im.is_finite()) || z.im < 0.0 {
                return Err(LabError::Precondition(
                    "force points must lie in the closed upper half-plane".into(),
                ));
            }
            if (*z - self.start_driver).norm() == 0.0 {
                return Err(LabError::Precondition(
                    "force point coincides with the driver at t = 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The requested horizon was reached.
    Horizon,
    /// A force point met the driver.
    Collision,
}

/// Sampled solution of an SLE₀ system (uncentered force points).
#[derive(Debug, Clone, PartialEq)]
pub struct SleZeroTrajectory {
    /// Direction the samples were integrated in.
    pub direction: Direction,
    /// Weights of the force points.
    pub rho: Vec<f64>,
    /// Sample times (increasing, starting at 0).
    pub times: Vec<f64>,
    /// Driver samples.
    pub driver: Vec<f64>,
    /// `force_points[i][j]` is force point `j` at sample `i`.
    pub force_points: Vec<Vec<Complex64>>,
    /// Stop condition.
    pub stop_reason: StopReason,
}

impl SleZeroTrajectory {
    /// Final sample time.
    pub fn end_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    /// Centered force point `j` at sample `i`.
    pub fn centered(&self, i: usize, j: usize) -> Complex64 {
        self.force_points[i][j] - self.driver[i]
    }

    /// CSV `t,xi,v1_re,v1_im,...`.
    pub fn to_csv(&self) -> String {
        let n = self.rho.len();
        let mut header: Vec<String> = vec!["t".into(), "xi".into()];
        for j in 1..=n {
            header.push(format!("v{j}_re"));
            header.push(format!("v{j}_im"));
        }
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = (0..self.times.len()).map(|i| {
            let mut row = vec![self.times[i], self.driver[i]];
            for z in &self.force_points[i] {
                row.push(z.re);
                row.push(z.im);
            }
            row
        });
        csv_string(&header_refs, rows)
    }
}

struct State {
    lambda: f64,
    z: Vec<Complex64>,
}

fn derivative(dir: Direction, rho: &[f64], z: &[Complex64]) -> (f64, Vec<Complex64>) {
    let sign = match dir {
        Direction::Down => 1.0,
        Direction::Up => -1.0,
    };
    let drive: f64 = -sign * rho.iter().zip(z).map(|(r, w)| r * w.inv().re).sum::<f64>();
    let dz = z.iter().map(|w| sign * 2.0 / w - drive).collect();
    (drive, dz)
}

fn rk4(dir: Direction, rho: &[f64], s: &State, h: f64) -> State {
    let add = |z: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
        z.iter().zip(k).map(|(a, b)| a + b * c).collect()
    };
    let (l1, k1) = derivative(dir, rho, &s.z);
    let (l2, k2) = derivative(dir, rho, &add(&s.z, &k1, h / 2.0));
    let (l3, k3) = derivative(dir, rho, &add(&s.z, &k2, h / 2.0));
    let (l4, k4) = derivative(dir, rho, &add(&s.z, &k3, h));
    let z = (0..s.z.len())
        .map(|j| s.z[j] + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0))
        .collect();
    State {
        lambda: s.lambda + h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4),
        z,
    }
}

/// Driver increment below which a refined step near a collision ends the run.
pub const COLLISION_INCREMENT: f64 = 1e-12;

/// Integrates the SLE₀ system on `[0, horizon]` with `n` nominal RK4 steps.
///
/// Steps are halved while some centered force point satisfies
/// `|Z| < 10·h·|Ż|`; once refined steps move the driver by less than
/// [`COLLISION_INCREMENT`] the run stops with [`StopReason::Collision`].
pub fn integrate(config: &SleZeroConfig, horizon: f64, n: usize) -> Result<SleZeroTrajectory> {
    config.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) || n == 0 {
        return Err(LabError::Precondition(
            "need a positive horizon and n ≥ 1".into(),
        ));
    }
    let dir = config.direction;
    let rho = &config.rho;
    let mut s = State {
        lambda: config.start_driver,
        z: config
            .start_force_points
            .iter()
            .map(|u| u - config.start_driver)
            .collect(),
    };
    let h0 = horizon / n as f64;
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut driver = vec![s.lambda];
    let mut points = vec![config.start_force_points.clone()];
    let record = |t: f64,
                  s: &State,
                  times: &mut Vec<f64>,
                  driver: &mut Vec<f64>,
                  points: &mut Vec<Vec<Complex64>>| {
        times.push(t);
        driver.push(s.lambda);
        points.push(s.z.iter().map(|w| w + s.lambda).collect());
    };
    let mut stop = StopReason::Horizon;
    let mut k = 0usize;
    while t < horizon {
        let remaining = horizon - t;
        let mut h = if k + 1 >= n {
            remaining
        } else {
            h0.min(remaining)
        };
        let (_, dz) = derivative(dir, rho, &s.z);
        let mut refined = false;
        while s
            .z
            .iter()
            .zip(&dz)
            .any(|(w, d)| w.norm() < 10.0 * h * d.norm())
            && h > 1e-18 * horizon
        {
            h *= 0.5;
            refined = true;
        }
        let mut next = rk4(dir, rho, &s, h);
        // Reject steps that leave the closed half-plane or carry a real point across the driver.
        while (!next.lambda.is_finite()
            || next.z.iter().zip(&s.z).any(|(a, b)| {
                !(a.re.is_finite() && a.im.is_finite())
                    || a.im < 0.0
                    || (b.im == 0.0 && a.re * b.re <= 0.0)
            }))
            && h > 1e-18 * horizon
        {
            h *= 0.5;
            refined = true;
            next = rk4(dir, rho, &s, h);
        }
        if h <= 1e-18 * horizon {
            stop = StopReason::Collision;
            break;
        }
        let increment = (next.lambda - s.lambda).abs();
        t += h;
        s = next;
        record(t, &s, &mut times, &mut driver, &mut points);
        if refined && increment < COLLISION_INCREMENT {
            stop = StopReason::Collision;
            break;
        }
        if !refined {
            k += 1;
        }
    }
    Ok(SleZeroTrajectory {
        direction: dir,
        rho: rho.clone(),
        times,
        driver,
        force_points: points,
        stop_reason: stop,
    })
}

/// Time reversal: `ξ_t = λ_{T−t} − λ_T`, `V_t = U_{T−t} − λ_T`, direction flipped.
pub fn reverse_trajectory(traj: &SleZeroTrajectory) -> SleZeroTrajectory {
    let t_end = traj.end_time();
    let l_end = *traj.driver.last().unwrap_or(&0.0);
    let idx: Vec<usize> = (0..traj.times.len()).rev().collect();
    SleZeroTrajectory {
        direction: traj.direction.flipped(),
        rho: traj.rho.clone(),
        times: idx.iter().map(|&i| t_end - traj.times[i]).collect(),
        driver: idx.iter().map(|&i| traj.driver[i] - l_end).collect(),
        force_points: idx
            .iter()
            .map(|&i| traj.force_points[i].iter().map(|u| u - l_end).collect())
            .collect(),
        stop_reason: StopReason::Horizon,
    }
}

/// Sup-norm comparison of a trajectory's driver against a reference driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverMatch {
    /// `sup |λ(t_i) − reference(t_i)|` over samples with `t_i ≤ until`.
    pub sup_error: f64,
    /// End of the compared interval.
    pub until: f64,
    /// Number of compared samples.
    pub samples: usize,
}

/// Compares trajectory driver samples on `[0, until]` with `reference`.
pub fn driver_match(
    traj: &SleZeroTrajectory,
    reference: impl Fn(f64) -> f64,
    until: f64,
) -> DriverMatch {
    let mut sup: f64 = 0.0;
    let mut samples = 0;
    for (t, l) in traj.times.iter().zip(&traj.driver) {
        if *t <= until {
            sup = sup.max((l - reference(*t)).abs());
            samples += 1;
        }
    }
    DriverMatch {
        sup_error: sup,
        until,
        samples,
    }
}

/// Downward SLE₀(−8) from `(0, e^{iθ})` against the closed-form downward
/// minimizer driver on `[0, 0.9τ_θ]`.
pub fn verify_wang_sle8(theta: f64, n: usize) -> Result<DriverMatch> {
    let p = WangParams::new(theta)?;
    let cfg = SleZeroConfig::new(
        Direction::Down,
        vec![-8.0],
        0.0,
        vec![Complex64::from_polar(1.0, theta)],
    )?;
    let until = 0.9 * p.tau;
    let traj = integrate(&cfg, until, n)?;
    let reference = wang_lambda_down(theta)?;
    Ok(driver_match(&traj, |t| reference.eval(t), until))
}

/// Residuals of the circular-arc SLE₀(−3,−3) identification.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSleReport {
    /// Start time `t₀ > 0` of the integration (both base images coincide at 0).
    pub start_time: f64,
    /// Sup error between the integrated driver and `3√2(1 − √(1 − t))` on `[t₀, 0.9]`.
    pub driver_sup_error: f64,
    /// Times at which the closed-form identity was evaluated.
    pub identity_times: Vec<f64>,
    /// Relative residual of `λ̇ = 3/(g₋ − λ) + 3/(g₊ − λ)` at those times.
    pub identity_residuals: Vec<f64>,
}

impl ArcSleReport {
    /// Largest identity residual.
    pub fn max_identity_residual(&self) -> f64 {
        self.identity_residuals.iter().fold(0.0, |a, b| a.max(*b))
    }
}

fn scaled_arc_lambda(t: f64) -> f64 {
    3.0 * 2f64.sqrt() * (1.0 - (1.0 - t).sqrt())
}

/// Relative residual of the closed-form identity `λ̇ = 3/(g₋ − λ) + 3/(g₊ − λ)`
/// for the scaled orthogonal arc at time `t ∈ (0, 1)`.
pub fn arc_identity_residual(t: f64) -> f64 {
    let lambda = scaled_arc_lambda(t);
    let (gm, gp) = scaled_arc_base_images(t);
    let lhs = 1.5 * 2f64.sqrt() / (1.0 - t).sqrt();
    let rhs = 3.0 / (gm - lambda) + 3.0 / (gp - lambda);
    (lhs - rhs).abs() / lhs.abs()
}

/// Downward SLE₀(−3,−3) with force points at the arc's base images, started
/// at `t₀` from the closed-form state, against the closed-form driver.
pub fn verify_arc_sle33(n: usize) -> Result<ArcSleReport> {
    let t0 = 0.01;
    let (gm, gp) = scaled_arc_base_images(t0);
    let cfg = SleZeroConfig::new(
        Direction::Down,
        vec![-3.0, -3.0],
        scaled_arc_lambda(t0),
        vec![Complex64::new(gm, 0.0), Complex64::new(gp, 0.0)],
    )?;
    let span = 0.9 - t0;
    let traj = integrate(&cfg, span, n)?;
    let m = driver_match(&traj, |t| scaled_arc_lambda(t0 + t), span);
    let identity_times = vec![1e-3, 0.1, 0.25, 0.5, 0.75, 0.9];
    let identity_residuals = identity_times
        .iter()
        .map(|&t| arc_identity_residual(t))
        .collect();
    Ok(ArcSleReport {
        start_time: t0,
        driver_sup_error: m.sup_error,
        identity_times,
        identity_residuals,
    })
}

/// Fit of the upward SLE₀(−2,−2) driver to `c(√(τ − t) − √τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitFit {
    /// Observed collision time.
    pub collision_time: f64,
    /// Least-squares coefficient `c`.
    pub c: f64,
    /// `sup|ξ − √2(√(τ−t) − √τ)| / sup|ξ|` with the observed collision time `τ`
    /// (the driver has infinite slope at `τ`, so the exact `τ = 1` would turn a
    /// tiny collision-time error into a visible √-sized offset).
    pub relative_sup_error: f64,
}

/// Upward SLE₀(−2,−2) from `(0, −2√2, √2)`, whose driver is the reversal of
/// `√2·√t` (a straight slit at angle `π/3`).
pub fn verify_slit_sle22(n: usize) -> Result<SlitFit> {
    let r2 = 2f64.sqrt();
    let cfg = SleZeroConfig::new(
        Direction::Up,
        vec![-2.0, -2.0],
        0.0,
        vec![Complex64::new(-2.0 * r2, 0.0), Complex64::new(r2, 0.0)],
    )?;
    let traj = integrate(&cfg, 1.5, n)?;
    if traj.stop_reason != StopReason::Collision {
        return Err(LabError::Solver("slit run did not collide".into()));
    }
    let tau = traj.end_time();
    let basis: Vec<f64> = traj
        .times
        .iter()
        .map(|t| (tau - t).max(0.0).sqrt() - tau.sqrt())
        .collect();
    let num: f64 = basis.iter().zip(&traj.driver).map(|(b, x)| b * x).sum();
    let den: f64 = basis.iter().map(|b| b * b).sum();
    let exact = |t: f64| r2 * ((tau - t).max(0.0).sqrt() - tau.sqrt());
    let sup_ref = traj.driver.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let sup_err = traj
        .times
        .iter()
        .zip(&traj.driver)
        .fold(0.0f64, |a, (t, x)| a.max((x - exact(*t)).abs()));
    Ok(SlitFit {
        collision_time: tau,
        c: num / den,
        relative_sup_error: sup_err / sup_ref,
    })
}

/// Upward SLE₀(−4,−4) from `(0, x0, y0)` on `[0, horizon]`.
pub fn emw_sle44(x0: f64, y0: f64, horizon: f64, n: usize) -> Result<SleZeroTrajectory> {
    let cfg = SleZeroConfig::new(
        Direction::Up,
        vec![-4.0, -4.0],
        0.0,
        vec![Complex64::new(x0, 0.0), Complex64::new(y0, 0.0)],
    )?;
    integrate(&cfg, horizon, n)
}

/// Finite-difference rates of `Q = (y − x)² − 2xy` (centered) along a
/// two-point trajectory; the exact rate for SLE₀(−4,−4) is `−24`.
pub fn conserved_rate_samples(traj: &SleZeroTrajectory) -> Vec<f64> {
    let q = |i: usize| {
        let x = traj.centered(i, 0).re;
        let y = traj.centered(i, 1).re;
        (y - x).powi(2) - 2.0 * x * y
    };
    (1..traj.times.len().saturating_sub(1))
        .map(|i| (q(i + 1) - q(i - 1)) / (traj.times[i + 1] - traj.times[i - 1]))
        .collect()
}

/// Driver of a trajectory as a [`Driver`] by linear interpolation of samples.
pub fn trajectory_driver(traj: &SleZeroTrajectory) -> Driver {
    let times = traj.times.clone();
    let values = traj.driver.clone();
    Driver::new("sle0", traj.end_time(), move |t: f64| {
        let k = times.partition_point(|s| *s <= t);
        if k == 0 {
            return values[0];
        }
        if k >= times.len() {
            return *values.last().unwrap();
        }
        let (t0, t1) = (times[k - 1], times[k]);
        let w = (t - t0) / (t1 - t0);
        values[k - 1] * (1.0 - w) + values[k] * w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drivers::{emw_xi, EmwParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn no_forcing_keeps_driver_constant() {
        let cfg = SleZeroConfig::new(
            Direction::Down,
            vec![0.0],
            0.3,
            vec![Complex64::new(0.0, 1.0)],
        )
        .unwrap();
        let traj = integrate(&cfg, 0.2, 100).unwrap();
        assert!(traj.driver.iter().all(|l| *l == 0.3));
        assert_eq!(traj.stop_reason, StopReason::Horizon);
        assert_relative_eq!(traj.end_time(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn rejects_immediate_collision() {
        assert!(SleZeroConfig::new(
            Direction::Up,
            vec![-4.0],
            0.0,
            vec![Complex64::new(0.0, 0.0)]
        )
        .is_err());
        assert!(SleZeroConfig::new(
            Direction::Up,
            vec![-4.0, 1.0],
            0.0,
            vec![Complex64::new(1.0, 0.0)]
        )
        .is_err());
        assert!(SleZeroConfig::new(
            Direction::Up,
            vec![-4.0],
            0.0,
            vec![Complex64::new(1.0, -1.0)]
        )
        .is_err());
    }

    #[test]
    fn slit_identification() {
        let fit = verify_slit_sle22(4000).unwrap();
        assert!((fit.collision_time - 1.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.c - 2f64.sqrt()).abs() / 2f64.sqrt() < 1e-5, "{fit:?}");
        assert!(fit.relative_sup_error < 1e-5, "{fit:?}");
    }

    #[test]
    fn emw_identification_and_conserved_rate() {
        let p = EmwParams::new(-1.0, 2.0).unwrap();
        let traj = emw_sle44(-1.0, 2.0, 1.0, 4000).unwrap();
        assert_eq!(traj.stop_reason, StopReason::Collision);
        assert!(
            (traj.end_time() - 13.0 / 24.0).abs() < 1e-6,
            "{}",
            traj.end_time()
        );
        assert!((p.tau - 13.0 / 24.0).abs() < 1e-15);
        let xi = emw_xi(-1.0, 2.0).unwrap();
        let m = driver_match(&traj, |t| xi.eval(t), 0.9 * p.tau);
        assert!(m.sup_error < 1e-6, "{m:?}");
        let early = emw_sle44(-1.0, 2.0, 0.9 * p.tau, 2000).unwrap();
        for r in conserved_rate_samples(&early) {
            assert!((r + 24.0).abs() < 1e-6, "{r}");
        }
    }

    #[test]
    fn wang_identification() {
        let m = verify_wang_sle8(FRAC_PI_3, 4000).unwrap();
        assert!(m.sup_error < 1e-6, "{m:?}");
        let flat = verify_wang_sle8(FRAC_PI_2, 100).unwrap();
        assert!(flat.sup_error < 1e-15);
        let cfg = |th: f64| {
            SleZeroConfig::new(
                Direction::Down,
                vec![-8.0],
                0.0,
                vec![Complex64::from_polar(1.0, th)],
            )
            .unwrap()
        };
        let a = integrate(&cfg(1.0), 0.05, 200).unwrap();
        let b = integrate(&cfg(std::f64::consts::PI - 1.0), 0.05, 200).unwrap();
        for (x, y) in a.driver.iter().zip(&b.driver) {
            assert!((x + y).abs() < 1e-12);
        }
        // λ̇ = 8x/|z|² along the trajectory (centered tip)
        for i in (1..a.times.len() - 1).step_by(20) {
            let z = a.centered(i, 0);
            let fd = (a.driver[i + 1] - a.driver[i - 1]) / (a.times[i + 1] - a.times[i - 1]);
            assert!((fd - 8.0 * z.re / z.norm_sqr()).abs() < 1e-4);
        }
    }

    #[test]
    fn arc_identification() {
        let rep = verify_arc_sle33(4000).unwrap();
        assert!(rep.max_identity_residual() < 1e-10, "{rep:?}");
        assert!(rep.driver_sup_error < 1e-6, "{rep:?}");
    }

    #[test]
    fn symmetric_start_gives_zero_driver() {
        let cfg = SleZeroConfig::new(
            Direction::Up,
            vec![-3.0, -3.0],
            0.0,
            vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .unwrap();
        let traj = integrate(&cfg, 0.1, 100).unwrap();
        assert!(traj.driver.iter().all(|l| l.abs() < 1e-14));
    }

    #[test]
    fn reversal_round_trip() {
        let up = emw_sle44(-1.0, 2.0, 0.3, 600).unwrap();
        let rev = reverse_trajectory(&up);
        assert_eq!(rev.direction, Direction::Down);
        let cfg = SleZeroConfig::new(
            Direction::Down,
            up.rho.clone(),
            rev.driver[0],
            rev.force_points[0].clone(),
        )
        .unwrap();
        let down = integrate(&cfg, rev.end_time(), 600).unwrap();
        assert_eq!(down.times.len(), rev.times.len());
        for i in 0..down.times.len() {
            assert!((down.driver[i] - rev.driver[i]).abs() < 1e-9);
        }
        let back = reverse_trajectory(&rev);
        assert_relative_eq!(back.driver[5], up.driver[5], epsilon = 1e-14);
        let one = emw_sle44(-1.0, 2.0, 1e-9, 1).unwrap();
        let r = reverse_trajectory(&one);
        assert!((r.force_points[1][0] - one.force_points[0][0]).norm() < 1e-8);
    }

    #[test]
    fn csv_layout() {
        let traj = emw_sle44(-1.0, 2.0, 0.1, 4).unwrap();
        let csv = traj.to_csv();
        assert!(csv.starts_with("t,xi,v1_re,v1_im,v2_re,v2_im\n"));
        assert_eq!(csv.lines().count(), 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn real_points_stay_real_and_interior_points_stay_interior(
            x in -3.0..-0.3f64, y in 0.3..3.0f64, zr in -1.0..1.0f64, zi in 0.3..2.0f64, rho in -4.0..2.0f64
        ) {
            let cfg = SleZeroConfig::new(
                Direction::Up,
                vec![rho, rho, 1.0],
                0.0,
                vec![Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(zr, zi)],
            ).unwrap();
            let traj = integrate(&cfg, 0.02, 50).unwrap();
            for pts in &traj.force_points {
                prop_assert_eq!(pts[0].im, 0.0);
                prop_assert_eq!(pts[1].im, 0.0);
                prop_assert!(pts[2].im > 0.0);
            }
        }

        #[test]
        fn emw_collision_time_law(x in -3.0..-0.3f64, y in 0.3..3.0f64) {
            let traj = emw_sle44(x, y, 10.0, 2000).unwrap();
            prop_assert_eq!(traj.stop_reason, StopReason::Collision);
            let tau = (x * x - 4.0 * x * y + y * y) / 24.0;
            prop_assert!((traj.end_time() - tau).abs() < 1e-6 * tau.max(1.0));
        }
    }
}
