//! Numerical Loewner evolution and the two families of Loewner-energy minimizers:
//! minimizers through a prescribed interior point and minimizers with a prescribed
//! conformal welding.
//!
//! Modules:
//! - [`loewner_flow`]: point flows, curve tracing, hitting times, driver transforms.
//! - [`drivers`]: closed-form drivers and parameter maps for every explicit family.
//! - [`energy`]: partition and quadrature energies plus closed-form energies.
//! - [`welding`]: numeric and closed-form conformal weldings.
//! - [`sle_zero`]: deterministic SLE₀(ρ) with force points.
//! - [`families`]: ODE systems, algebraic varieties, universality checks.
//! - [`compare`]: local and asymptotic energy ratios.
//! - [`suite`]: the executable acceptance checks.
//! - [`output`]: CSV, JSON and SVG emitters.

pub mod compare;
pub mod drivers;
pub mod energy;
pub mod error;
pub mod families;
pub mod loewner_flow;
pub mod numerics;
pub mod output;
pub mod sle_zero;
pub mod suite;
pub mod welding;

pub use error::{LabError, Result};
pub use loewner_flow::{CurveTrace, Driver, FlowPoint, Slope};
pub use num_complex::Complex64;
