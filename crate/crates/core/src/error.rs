use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("fixed-point iteration did not stabilize within {rounds} rounds")]
    NonConvergence { rounds: usize },
    #[error("form degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree schedule exhausted at form degree {0}")]
    ScheduleExhausted(usize),
    #[error("guardrail exceeded: {0}")]
    Guardrail(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("normalized-complex flag is not set")]
    NotNormalized,
    #[error("product-table fault: {0}")]
    ProbeFault(String),
}

pub type Result<T> = std::result::Result<T, Error>;
