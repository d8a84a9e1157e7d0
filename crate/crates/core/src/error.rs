use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// One or more instance invariants are violated.
    #[error("invalid instance: {}", .0.join("; "))]
    InvalidInstance(Vec<String>),

    #[error("candidate index {index} out of range (m = {m})")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("instance too large for oracle: m = {m} exceeds cap {cap}")]
    OracleCapExceeded { m: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("family is not laminar: sets {first} and {second} cross")]
    NotLaminar { first: usize, second: usize },

    #[error("demand {k} exceeds the {available} selectable candidates")]
    DemandTooLarge { k: usize, available: usize },

    #[error("fractional sum {sum} does not match demand {k}")]
    DemandMismatch { sum: f64, k: usize },

    #[error("LP solver failure: {message} (max residual {residual:e})")]
    Lp { message: String, residual: f64 },

    #[error("independent rounding needs n >= 16 agents (got {n}); use pipage rounding instead")]
    TooFewAgents { n: usize },

    #[error(
        "resample budget of {budget} exhausted with {} events still occurring (first: {:?})",
        occurring.len(),
        occurring.first()
    )]
    ResampleBudgetExhausted { budget: usize, occurring: Vec<usize> },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for bad input, 2 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInstance(_)
            | Error::IndexOutOfRange { .. }
            | Error::InvalidParameters(_)
            | Error::NotLaminar { .. }
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 1,
            _ => 2,
        }
    }
}
