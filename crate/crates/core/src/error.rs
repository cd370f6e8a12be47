use std::io;

use thiserror::Error;

/// Errors produced by the torque library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed {format} data: {reason}")]
    Malformed { format: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("non-finite sample at ({x}, {y})")]
    NonFinite { x: usize, y: usize },

    #[error("patch does not intersect the image")]
    EmptyPatch,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn malformed(format: &'static str, reason: impl Into<String>) -> Self {
        Error::Malformed {
            format,
            reason: reason.into(),
        }
    }

    /// True for errors caused by reading or decoding files rather than by
    /// invalid numeric input.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::UnsupportedFormat(_) | Error::Malformed { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
