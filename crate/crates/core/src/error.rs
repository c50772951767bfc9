use thiserror::Error;

/// Errors raised by the library. The CLI maps `Parse` to exit code 2,
/// `Inconsistent` to 4 and everything else to 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field: {0}")]
    Field(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid algebra: {0}")]
    Algebra(String),
    #[error("invalid ideal: {0}")]
    Ideal(String),
    #[error("invalid module: {0}")]
    Module(String),
    #[error("invalid tower: {0}")]
    Tower(String),
    #[error("not semisimple: {0}")]
    NotSemisimple(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for unparsable input, 4 for a contradiction
    /// between verdicts that must agree, 3 for every other failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Inconsistent(_) => 4,
            _ => 3,
        }
    }
}
