use thiserror::Error;

/// Errors raised by the analytic and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method exhausted its budget before meeting its tolerance.
    #[error("no convergence in {what}: estimate {estimate:e}, error {error:e}")]
    NonConvergence { what: &'static str, estimate: f64, error: f64 },

    /// The value exists but cannot be represented in double precision.
    #[error("not computable in floating point: {0}")]
    NotComputable(String),

    /// A simulation request exceeds the configured resource cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Rejection sampling could not collect the requested realizations.
    #[error("rejection budget exceeded: {0}")]
    RejectionBudget(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
