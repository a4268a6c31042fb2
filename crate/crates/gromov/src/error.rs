use metric_core::MetricError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GhError {
    #[error("map does not cover its domain: {0}")]
    NotTotal(String),

    #[error("map is not surjective: {0}")]
    NotSurjective(String),

    #[error("relation is not a correspondence: {0}")]
    NotCorrespondence(String),

    #[error("input is not ultrametric: {0}")]
    NotUltrametric(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two independent computations of the same quantity disagreed.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error(transparent)]
    Metric(#[from] MetricError),
}

pub type Result<T> = std::result::Result<T, GhError>;
