use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("-1 is not a square in F{0}; request the quadratic extension")]
    NoSqrtMinusOne(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not parity-homogeneous")]
    NotHomogeneous,
    #[error("algebra has no Z2^2 labels")]
    MissingFineLabels,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("malformed structure constants: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
