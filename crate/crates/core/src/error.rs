use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConvError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scalar domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("singular matrix")]
    Singular,

    #[error("polynomials are not coprime: {0}")]
    NotCoprime(String),

    #[error("duplicate interpolation node: {0}")]
    DuplicateNode(String),

    #[error("the infinity node must appear at most once and last")]
    InfinityNotLast,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("validation failed: residual {residual:e} exceeds tolerance {tol:e}")]
    ValidationFailed { residual: f64, tol: f64 },

    #[error("calibration failed: {0}")]
    CalibrationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ConvError>;
