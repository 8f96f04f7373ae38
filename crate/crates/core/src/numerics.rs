//! Small numerical kernels: classical Runge–Kutta steps, Gauss–Legendre rules,
//! bisection and discrete distances between point sets.

use num_complex::Complex64;
use std::sync::OnceLock;

/// One classical fourth-order Runge–Kutta step for a fixed-size state.
pub fn rk4_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    h: f64,
) -> [f64; N] {
    let add = |a: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *a;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// One classical fourth-order Runge–Kutta step for a heap-allocated state.
pub fn rk4_step_vec(f: &impl Fn(f64, &[f64]) -> Vec<f64>, t: f64, y: &[f64], h: f64) -> Vec<f64> {
    let add = |k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(&k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(&k2, 0.5 * h));
    let k4 = f(t + h, &add(&k3, h));
    (0..y.len())
        .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// One RK4 step for a complex scalar ODE `z' = f(t, z)`.
pub fn rk4_complex(
    f: &impl Fn(f64, Complex64) -> Complex64,
    t: f64,
    z: Complex64,
    h: f64,
) -> Complex64 {
    let k1 = f(t, z);
    let k2 = f(t + 0.5 * h, z + 0.5 * h * k1);
    let k3 = f(t + 0.5 * h, z + 0.5 * h * k2);
    let k4 = f(t + h, z + h * k3);
    z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// The cached 32-point Gauss–Legendre rule.
pub fn gauss_legendre_32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(32))
}

/// Composite Gauss–Legendre quadrature of `f` over `[a, b]` with `panels` panels.
pub fn composite_gl(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_32();
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            s += w * f(mid + 0.5 * width * x);
        }
        total += 0.5 * width * s;
    }
    total
}

/// Bisection for a sign change of `f` on `[lo, hi]`; returns the bracket midpoint.
///
/// Stops when the bracket is below `tol` or after 200 halvings.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let directed = |p: &[Complex64], q: &[Complex64]| {
        p.iter()
            .map(|x| {
                q.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Least-squares slope of `log|y|` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(32);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        let m62: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(62)).sum();
        assert_relative_eq!(m62, 2.0 / 63.0, max_relative = 1e-12);
        let (x5, w5) = gauss_legendre(5);
        let m8: f64 = x5.iter().zip(&w5).map(|(x, w)| w * x.powi(8)).sum();
        assert_relative_eq!(m8, 2.0 / 9.0, max_relative = 1e-13);
    }

    #[test]
    fn composite_rule_matches_closed_form() {
        let v = composite_gl(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 4);
        assert_relative_eq!(v, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn rk4_is_fourth_order_on_exponential() {
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let run = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = [1.0];
            for k in 0..n {
                y = rk4_step(&f, k as f64 * h, &y, h);
            }
            (y[0] - 1f64.exp()).abs()
        };
        let ratio = run(20) / run(40);
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }

    #[test]
    fn bisect_finds_root_and_rejects_bad_bracket() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert_relative_eq!(r, 2f64.sqrt(), epsilon = 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-15).is_none());
    }

    #[test]
    fn hausdorff_of_shifted_sets() {
        let a = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let b: Vec<_> = a.iter().map(|z| z + Complex64::new(0.0, 0.5)).collect();
        assert_relative_eq!(hausdorff(&a, &b), 0.5);
    }
}
