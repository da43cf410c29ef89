//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra descriptor: {0}")]
    BadAlgebra(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("evaluation at a pole of the rational function")]
    Pole,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("grading mismatch between operands")]
    SpecMismatch,
    #[error("family {family} is not admissible for {algebra}: {reason}")]
    Inadmissible {
        family: String,
        algebra: String,
        reason: String,
    },
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("matrix is not in the required normalization: {0}")]
    Normalization(String),
    #[error("memory budget exceeded: need ~{need_mb} MB, budget {budget_mb} MB")]
    Budget { need_mb: usize, budget_mb: usize },
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
