//! Benchmark workloads for `loewner-lab`; the criterion harness lives in
//! `benches/flow.rs`.

use loewner_lab::drivers::{emw_xi, wang_lambda_down, wang_xi};
use loewner_lab::Driver;
use std::f64::consts::FRAC_PI_3;

/// Downward driver of the minimizer through `e^{iπ/3}`.
pub fn wang_down() -> Driver {
    wang_lambda_down(FRAC_PI_3).expect("valid angle")
}

/// Upward driver of the minimizer through `e^{iπ/3}`.
pub fn wang_up() -> Driver {
    wang_xi(FRAC_PI_3).expect("valid angle")
}

/// Upward driver of the minimizer welding `−1` to `2`.
pub fn emw_up() -> Driver {
    emw_xi(-1.0, 2.0).expect("valid pair")
}
