use metric_core::MetricError;
use thiserror::Error;

/// Errors from telescope construction, parameter recovery, and the
/// simplex-indexed family.
#[derive(Debug, Error)]
pub enum TelescopeError {
    /// A constructor argument is outside its stated domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Parameter recovery could not certify the input as a scaled telescope.
    #[error("not telescope-shaped: {0}")]
    NotTelescopeShaped(String),

    /// A structural precondition of the simplex family is violated.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Metric(#[from] MetricError),

    #[error(transparent)]
    Distance(#[from] gromov::GhError),
}

pub type Result<T> = std::result::Result<T, TelescopeError>;
