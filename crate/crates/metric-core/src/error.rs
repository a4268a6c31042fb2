use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("declared kind {declared} not satisfied: {reason}")]
    KindMismatch { declared: String, reason: String },

    #[error("size budget exceeded: {0}")]
    SizeBudget(String),

    #[error("label sets do not match: {0}")]
    LabelMismatch(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quotient representatives disagree on class pair ({0}, {1})")]
    QuotientDisagreement(usize, usize),
}

pub type Result<T> = std::result::Result<T, MetricError>;
