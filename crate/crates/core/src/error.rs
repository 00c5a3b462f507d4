use thiserror::Error;

/// Errors raised by the numerical routines and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested evaluation falls outside the region where the routine
    /// is validated, or the result overflowed.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// Adaptive quadrature (or an oracle) failed to reach its target.
    #[error("no convergence in {what}: last change {change:.3e} at order {order}")]
    NonConvergence {
        what: String,
        change: f64,
        order: usize,
    },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn accuracy(msg: impl Into<String>) -> Self {
        Error::Accuracy(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Accuracy(_) | Error::NonConvergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
