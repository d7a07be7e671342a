//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges after normalization")]
    EmptyGraph,

    #[error("invalid alpha {0:?}: expected a decimal >= 1 with at most 3 fractional digits")]
    InvalidAlpha(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("partition file error: {0}")]
    PartitionFile(String),

    #[error("partition is not balanced: part {part} has {size} edges, capacity is {cap}")]
    Unbalanced { part: usize, size: usize, cap: usize },

    #[error("block is stale: {0}")]
    StaleBlock(String),
}
