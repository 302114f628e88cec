use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}: expected {expected}")]
    InvalidRank {
        family: String,
        rank: usize,
        expected: String,
    },

    #[error("second highest root is not unique: {count} roots of height {height}")]
    AmbiguousSecondHighest { height: i64, count: usize },

    #[error("Weyl orbit search exhausted after {visited} elements without satisfying the predicate")]
    SearchExhausted { visited: u64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("root subset is not closed under root addition")]
    NotClosed,

    #[error("base orientation: {0}")]
    Orientation(String),

    #[error("no root string from {from} to {to} using the remaining simple roots")]
    NoRootString { from: String, to: String },

    #[error("infeasible selection: {0}")]
    InfeasibleSelection(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension hypothesis fails: {0}")]
    Hypothesis(String),

    #[error("side condition failed at step {step} [{citation}]: {reason}")]
    SideCondition {
        step: usize,
        citation: String,
        reason: String,
    },

    #[error("falsified: {0}")]
    Falsification(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("outside the known table: {0}")]
    OutOfTable(String),

    #[error("parse error: {0}")]
    Parse(String),
}
