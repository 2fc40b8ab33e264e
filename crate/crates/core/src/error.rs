//! Error type shared across the crate, with a coarse classification that the
//! CLI maps onto exit codes.

use std::fmt;

/// How an error should be classified at a process boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: parse failures, bad JSON, inconsistent headers.
    Parse,
    /// Structurally valid input that violates a documented precondition.
    Precondition,
    /// An internal consistency assertion backed by a theorem failed.
    Internal,
}

#[derive(Debug, Clone)]
pub struct Error {
    pub kind: ErrorKind,
    pub message: String,
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error {
            kind: ErrorKind::Parse,
            message: msg.into(),
        }
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error {
            kind: ErrorKind::Precondition,
            message: msg.into(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error {
            kind: ErrorKind::Internal,
            message: msg.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            ErrorKind::Parse => "parse error",
            ErrorKind::Precondition => "precondition violated",
            ErrorKind::Internal => "internal consistency error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
