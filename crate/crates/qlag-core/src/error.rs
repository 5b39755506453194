//! Error types shared across the crate.

use alloc::string::String;
use core::fmt;

/// Errors produced by parameter validation, numerics, and table lookups.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Invalid model or run parameter.
    Param(String),
    /// Input outside the mathematical domain of an operation.
    Domain(String),
    /// Iterative solver failed to converge; carries the residual norms of the
    /// states that were still open when the iteration budget ran out.
    Convergence { residuals: alloc::vec::Vec<f64> },
    /// A phase-space point fell outside the stored table support. Monte Carlo
    /// callers treat this as a rejected trial move.
    OutOfSupport,
    /// Serialized table malformed or inconsistent with the run configuration.
    Format(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Param(msg) => write!(f, "parameter error: {msg}"),
            CoreError::Domain(msg) => write!(f, "domain error: {msg}"),
            CoreError::Convergence { residuals } => write!(
                f,
                "solver failed to converge ({} states open, worst residual {:.3e})",
                residuals.len(),
                residuals.iter().cloned().fold(0.0_f64, f64::max)
            ),
            CoreError::OutOfSupport => write!(f, "point outside table support"),
            CoreError::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
