use thiserror::Error;

/// Errors for the feature-space data model.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("empty sample")]
    EmptySample,

    #[error("value `{value}` outside the domain of feature `{feature}`")]
    DomainMismatch { feature: String, value: String },

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("histogram not normalized: mass sum {sum}")]
    NotNormalized { sum: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
