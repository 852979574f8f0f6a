use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range (available: {len})")]
    Index { index: i64, len: usize },

    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("degenerate recurrence: b_{index} = {value:e} is not positive")]
    Degenerate { index: usize, value: f64 },

    #[error("eigenvalue iteration did not converge for index {index}")]
    NoConvergence { index: usize },

    #[error("non-finite value {value} at node {node}")]
    Evaluation { node: f64, value: f64 },

    #[error("tolerance {tol:e} unreachable; best estimate {achieved:e}")]
    Accuracy { tol: f64, achieved: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }
}
