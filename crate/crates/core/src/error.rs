//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph contains a directed cycle")]
    CycleDetected,
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("genome length {actual} does not match n(n-1) = {expected}")]
    GenomeLength { expected: usize, actual: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("population is empty")]
    EmptyPopulation,
    #[error("rank not assigned; run non-dominated sorting first")]
    RankNotAssigned,
    #[error("Pareto front is empty")]
    EmptyFront,
    #[error("variable {0} is not binary")]
    NonBinaryVariable(usize),
    #[error("scenario {id}: {message}")]
    Scenario { id: String, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
