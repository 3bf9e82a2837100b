//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A song whose artist and title are both empty after canonicalization.
    #[error("song rejected: artist {artist:?}, title {title:?} empty after canonicalization")]
    RejectedSong { artist: String, title: String },

    /// Malformed ingest input, reported with its 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Filtering converged to an empty corpus.
    #[error("filtering removed every playlist")]
    EmptyFilterResult,

    /// A train/test or train/validation split left one side empty.
    #[error("split error: {0}")]
    Split(String),

    /// Synthetic corpus parameters that cannot be satisfied.
    #[error("generation error: {0}")]
    Generation(String),

    /// Out-of-vocabulary ids, mismatched corpora and similar contract violations.
    #[error("domain error: {0}")]
    Domain(String),

    /// Non-finite values encountered during numeric work.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A persisted artifact that cannot be decoded or fails validation.
    #[error("artifact error: {0}")]
    Artifact(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for data/domain problems, 3 for numeric ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 3,
            _ => 2,
        }
    }

    /// An I/O error annotated with the path it concerns; bare `io::Error`
    /// messages don't say which file was involved.
    pub fn io_at(path: &std::path::Path, e: std::io::Error) -> Error {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    }
}
