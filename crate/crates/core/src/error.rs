//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A caller-supplied value violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A file does not conform to its format (Y4M/PGM/CSV/weight file).
    #[error("parse error: {0}")]
    Parse(String),

    /// A coded payload is malformed or truncated.
    #[error("bitstream error: {0}")]
    Bitstream(String),

    /// Tensor or frame dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Weights, header or configuration disagree with each other.
    #[error("config mismatch: {0}")]
    ConfigMismatch(String),

    /// Training produced a non-finite loss.
    #[error("training diverged: {0}")]
    Diverged(String),
}

pub type Result<T> = std::result::Result<T, Error>;
