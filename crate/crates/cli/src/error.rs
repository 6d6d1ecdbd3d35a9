use std::path::PathBuf;

use conedist::ConeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: malformed document: {message}")]
    Parse { path: String, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Cone(#[from] ConeError),
}

pub type Result<T> = std::result::Result<T, CliError>;
