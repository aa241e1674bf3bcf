// SPDX-License-Identifier: Apache-2.0

use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An input violates the declared precondition of an operation, e.g. a
    /// weighted graph handed to an unweighted-only routine.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bad binary format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
