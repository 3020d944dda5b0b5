use thiserror::Error;

/// Errors raised by the library.
///
/// `Anomaly` is reserved for outcomes that contradict a proven guarantee
/// (a bug alarm), as opposed to an ordinary negative verdict.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("zero relation requires a `zero` declaration")]
    ZeroWithoutDeclaration,

    #[error("relation {0} is not length preserving")]
    Heterogeneous(String),

    #[error("presentation violates its declared class: {0}")]
    DeclaredClass(String),

    #[error("presentation is not homogeneous; enumeration requires a length grading")]
    NotHomogeneous,

    #[error("stratum of {words} words exceeds budget {budget}")]
    BudgetExceeded { words: u128, budget: u64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("left-cancellativity check failed: {0}")]
    NotLeftCancellative(String),

    #[error("routing error: {0}")]
    Routing(String),

    #[error("anomaly: {0}")]
    Anomaly(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
