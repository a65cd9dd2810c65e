use thiserror::Error;

/// Errors raised by the library. Search exhaustion and "structure does not
/// exist" are never errors; those are reported through outcome enums.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A randomized generator ran out of retries.
    #[error("generation failed after {attempts} attempts: {reason}")]
    Generation { attempts: usize, reason: String },

    /// Malformed graph text.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A chord in a rotation sequence could not be applied.
    #[error("chord {index} of the sequence is invalid: {reason}")]
    Sequence { index: usize, reason: String },

    /// The chord sequence is not spread out, so the combination guarantee is unavailable.
    #[error("chord sequence is not spread out at distance {0}")]
    NotSpreadOut(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
