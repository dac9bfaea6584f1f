//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or index mismatch between operands.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A combinatorial size cap was exceeded; the message names the offending binomial.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed textual input, with 1-based line/column diagnostics.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    /// A non-finite entry (NaN or infinity) where a finite value is required.
    #[error("invalid value: {0}")]
    InvalidValue(String),

    /// A documented operation precondition does not hold for the given input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The eigenvalue moduli around the split index are too close to order reliably.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// An iterative method ran out of iterations.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// A search (rejection sampling, hitting time) exhausted its budget.
    #[error("not found: {0}")]
    NotFound(String),

    /// An internal consistency check failed; carries the evidence.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code under the CLI contract:
    /// 0 = property holds, 1 = property refuted / degenerate input, 2 = usage or parse error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Dimension(_)
            | Error::Capacity(_)
            | Error::Parse { .. }
            | Error::InvalidValue(_)
            | Error::Io(_) => 2,
            Error::Precondition(_)
            | Error::DegenerateSpectrum(_)
            | Error::Convergence(_)
            | Error::NotFound(_)
            | Error::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
