use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} out of range 0..={max}")]
    DegreeRange { degree: usize, max: usize },

    #[error("invalid multiplier: {0}")]
    InvalidMultiplier(String),

    #[error("operator not invertible: {0}")]
    NotInvertible(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("unsupported configuration: {0}")]
    Capability(String),

    #[error("invalid weight: {0}")]
    Weight(String),

    #[error("identity solve failed: residual {residual:e} exceeds {tolerance:e}")]
    IdentityFailure { residual: f64, tolerance: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("hard failure in check {check}: {reason}")]
    HardFailure { check: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than by a computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Range(_) | Error::Capability(_) | Error::Weight(_)
        )
    }
}
