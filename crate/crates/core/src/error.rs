use thiserror::Error;

/// Errors raised by state construction, measurement and protocol execution.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("label mismatch: {0:?} vs {1:?}")]
    LabelMismatch(Vec<String>, Vec<String>),
    #[error("non-finite amplitude or matrix entry")]
    NonFinite,
    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("bad channel spec: {0}")]
    BadSpec(String),
    #[error("bad input qubit: {0}")]
    BadInput(String),
    #[error("unknown protocol `{0}`")]
    UnknownProtocol(String),
    #[error("success probability depends on the input (deviation {0:e})")]
    InputDependent(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
