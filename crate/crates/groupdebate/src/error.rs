//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Result`]. Configuration
//! problems carry the offending values so a CLI user can see exactly which
//! field to fix; a run that dies mid-debate carries the partial token ledger
//! so the tokens already spent are never silently dropped.

use crate::orchestrator::TokenLedger;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration value (or combination of values) is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A prompt template referenced a slot that was not supplied.
    #[error("prompt template has no value for slot {{{slot}}}")]
    MissingSlot { slot: String },

    /// A dataset file could not be parsed; `line` is 1-based.
    #[error("dataset {path}:{line}: {message}")]
    Dataset {
        path: String,
        line: usize,
        message: String,
    },

    /// Majority voting over an empty answer set.
    #[error("cannot vote over an empty answer set")]
    EmptyVote,

    /// A backend call failed (after exhausting any retry budget).
    #[error("backend: {0}")]
    Backend(String),

    /// A debate run aborted part-way. The ledger holds every call that
    /// completed before the failure so the spend is still accounted for.
    #[error("run aborted at round {round} ({principal}): {message}")]
    Aborted {
        round: u32,
        principal: String,
        message: String,
        partial: Box<TokenLedger>,
    },

    /// Results could not be scored against the problem set.
    #[error("scoring: {0}")]
    Score(String),

    /// A file could not be read or written.
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A config / spec / params file failed to parse.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    /// Shorthand for a formatted [`Error::Config`].
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Shorthand for an [`Error::File`] carrying the path it concerns.
    pub fn file(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::File {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
