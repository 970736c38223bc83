use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: expected {expected} values, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: non-finite or unparsable value {value:?}")]
    NonFiniteValue { line: usize, value: String },

    #[error("input contains no embedding rows")]
    EmptyInput,

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("empty partition: {0}")]
    EmptyPartition(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("all paired differences are identical; t statistic undefined")]
    ZeroVariance,

    #[error("no in-vocabulary token in sentence")]
    EmptySentence,

    #[error("too few usable pairs: {used} (need at least {needed})")]
    TooFewPairs { used: usize, needed: usize },

    #[error("too few examples: {0}")]
    TooFewExamples(String),

    #[error("labels must include both classes")]
    SingleClass,

    #[error("{path}:{line}: {msg}")]
    Dataset {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("task sets differ: {0}")]
    TaskMismatch(String),

    #[error("malformed report: {0}")]
    Report(String),
}
