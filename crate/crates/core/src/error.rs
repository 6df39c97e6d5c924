//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An exact division left a nonzero remainder.
    #[error("inexact division: {0}")]
    InexactDivision(String),
    /// A value was expected in Z[q^{±1}] but carries fractional q-exponents.
    #[error("not an integral q-polynomial: {0}")]
    NotQIntegral(String),
    /// The sampled evaluation point is degenerate (e.g. no eighth root, or a
    /// vanishing denominator); resample and retry.
    #[error("degenerate evaluation point: {0}")]
    Degenerate(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A verification step (held-out equations, identities) failed.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Rational reconstruction or interpolation could not determine the answer.
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    /// Linear-algebra structure inconsistent across evaluation points.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    /// A numerical computation could not be stabilised.
    #[error("numeric degeneracy: {0}")]
    Numeric(String),
    /// Input/output failure (files, cache).
    #[error("i/o error: {0}")]
    Io(String),
    /// Required data is not available for this knot.
    #[error("data unavailable: {0}")]
    Unavailable(String),
}

impl From<std::io::Error> for QError {
    fn from(e: std::io::Error) -> Self {
        QError::Io(e.to_string())
    }
}

/// Convenience alias.
pub type QResult<T> = Result<T, QError>;
