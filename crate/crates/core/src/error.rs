//! Error type shared by every module of the library.

use thiserror::Error;

/// Errors reported by the library.
///
/// Numerical routines never return silent NaNs: a degenerate input is a
/// [`LabError::InvalidParameter`] or [`LabError::Precondition`], and a driver
/// that produces a non-finite value is reported together with the offending time.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    /// A family parameter lies outside its admissible range.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        /// Parameter name as used on the command line.
        name: &'static str,
        /// Rejected value.
        value: f64,
        /// Human-readable admissible range.
        reason: &'static str,
    },
    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A driver evaluated to a non-finite value.
    #[error("driver `{label}` is not finite at t = {t}")]
    NonFinite {
        /// Driver label.
        label: String,
        /// Offending time.
        t: f64,
    },
    /// An iterative solver failed to bracket or converge.
    #[error("solver failure: {0}")]
    Solver(String),
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    reason: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
