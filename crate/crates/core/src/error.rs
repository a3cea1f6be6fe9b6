use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} exceeds the supported limit of {limit}")]
    LimitExceeded { what: String, limit: usize },
    #[error("edge-weight matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("negative weight: {0}")]
    NegativeWeight(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("model has {0} colors; a 2-spin model is required")]
    NotTwoSpin(usize),
    #[error("comparison undecided at precision cap of {0} bits")]
    UndecidedAtPrecisionCap(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal self-test failed: {0}")]
    SelfTest(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
