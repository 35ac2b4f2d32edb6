//! Error type shared by all numerical routines in this crate.

use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature did not reach the requested tolerance within its
    /// node budget. Carries the best estimate and the achieved error bound.
    #[error("quadrature did not converge: estimate {estimate}, error bound {err_estimate} after {nodes_used} nodes")]
    NonConvergence {
        estimate: f64,
        err_estimate: f64,
        nodes_used: usize,
    },

    /// The requested tolerance is unattainable in double precision for
    /// these arguments (catastrophic cancellation or similar); the value
    /// is still returned, with the accuracy actually achieved.
    #[error("accuracy warning: achieved relative error ~{achieved:.2e}, requested {requested:.2e}")]
    Accuracy {
        value: f64,
        achieved: f64,
        requested: f64,
    },

    /// A representation (e.g. an elementary integral form) does not exist
    /// for the requested transform family.
    #[error("unsupported representation: {0}")]
    Unsupported(String),

    /// A boundary classification could not be decided numerically.
    #[error("boundary classification undecided: {0}")]
    Undecided(String),

    /// Malformed input data (CSV grids, expression strings, ...).
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
