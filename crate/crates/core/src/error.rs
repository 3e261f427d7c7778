use thiserror::Error;

/// Errors raised by the algebra kernel.
///
/// `InvalidInput` marks caller mistakes (mismatched rings, bad ranks, bad
/// syntax in a structured value). `Internal` marks violated invariants such
/// as a torsion chain that fails to stabilize within its iteration cap; it
/// is never a silent answer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
