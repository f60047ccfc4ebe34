use thiserror::Error;

use crate::metric::Verdict;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for universe of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("point has dimension {found}, space expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element kind does not match the metric space: {0}")]
    ElementKind(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("candidate list is empty")]
    EmptyCandidates,

    #[error("metric axioms violated: {0}")]
    NotAMetric(Verdict),

    #[error("enumeration of {required} assignments exceeds budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("invalid generator spec: {0}")]
    Generator(String),

    #[error("invalid benchmark grid: {0}")]
    BenchGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
