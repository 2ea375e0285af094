use thiserror::Error;

/// Failures while reading numbers, polynomials, or antiderivatives from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational number {0:?}")]
    Rational(String),
    #[error("invalid multi-index {0:?}")]
    MultiIndex(String),
    #[error("line {line}: {message}")]
    Polynomial { line: usize, message: String },
    #[error("invalid box {0:?}: expected intervals \"a,b:c,d[:e,f]\" with a <= b")]
    Box(String),
    #[error("{0}")]
    Other(String),
}

/// Errors raised by evaluation and the higher-level computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("transcendental term {term} is singular at the evaluation point while its weight is nonzero")]
    SingularTerm { term: &'static str },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Invalid(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
