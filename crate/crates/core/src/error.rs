use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),

    #[error("qubit count {0} exceeds supported maximum {1}")]
    TooManyQubits(usize, usize),

    #[error("paulis {0} and {1} anticommute")]
    Anticommuting(String, String),

    #[error("pauli {0} is not hermitian")]
    NotHermitian(String),

    #[error("invalid isotropic subspace: {0}")]
    InvalidSubspace(String),

    #[error("inconsistent sign assignment: {0}")]
    InconsistentSigns(String),

    #[error("invalid clifford tableau: {0}")]
    InvalidTableau(String),

    #[error("{what} cap exceeded: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("operator is not in the Lambda polytope (minimum overlap {0})")]
    NotInLambda(String),

    #[error("search budget exhausted after {0} attempts")]
    BudgetExhausted(usize),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("points are not collinear")]
    NotCollinear,

    #[error("outcome {outcome} has probability zero for measurement {pauli}")]
    ZeroProbability { pauli: String, outcome: u8 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
