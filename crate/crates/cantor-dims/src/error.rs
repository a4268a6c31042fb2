use thiserror::Error;

#[derive(Debug, Error)]
pub enum CantorError {
    #[error("size budget exceeded: {0}")]
    SizeBudget(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("sequence not available: {0}")]
    Unavailable(String),
    #[error(transparent)]
    Metric(#[from] metric_core::MetricError),
}

pub type Result<T> = std::result::Result<T, CantorError>;
