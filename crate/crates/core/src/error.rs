use thiserror::Error;

/// Crate result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by model construction, the solvers and the analyses.
///
/// State indices carried by the variants are 0-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transition matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("transition matrix has no states")]
    Empty,
    #[error("row {row} sums to {sum}, not 1")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("negative transition probability at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain is not unichain: {} recurrent classes {:?}", classes.len(), classes)]
    NotUnichain { classes: Vec<Vec<usize>> },
    #[error("singular linear system in {context}")]
    SingularSystem { context: &'static str },
    #[error("infeasible request: {0}")]
    InfeasibleRequest(String),
    #[error("Kemeny values not constant: spread {deviation}")]
    ConstancyViolation { deviation: f64 },
    #[error("reward {value} at state {index} lies outside [0, 1]")]
    RewardOutOfRange { index: usize, value: f64 },
    #[error("state {state} is transient")]
    TransientTarget { state: usize },
    #[error("{states} recurrent states exceed the exact-enumeration limit {limit}")]
    TooLarge { states: usize, limit: usize },
    #[error("state {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
