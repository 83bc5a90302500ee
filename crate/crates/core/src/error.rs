use thiserror::Error;

/// Errors produced by the synthesis library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("instant {instant} is out of range for a trace of length {len}")]
    InstantOutOfRange { instant: usize, len: usize },

    #[error("empty trace: formulas and automata are only defined on nonempty traces")]
    EmptyTrace,

    #[error("automata are over different partitions")]
    PartitionMismatch,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("timed out")]
    Timeout,

    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),

    #[error("validation skipped, arena exceeds bounds: {0}")]
    BoundsExceeded(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
