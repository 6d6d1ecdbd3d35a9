//! Command implementations behind the `conedist` binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod json;

pub use error::{CliError, Result};
