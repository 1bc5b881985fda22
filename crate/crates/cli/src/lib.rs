//! Command-line front end for `cgq-core`: assignments, effective evolution,
//! discrimination runs and channel verification, driven by flags or JSON
//! configuration files and writing JSON/CSV artifacts.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use commands::{execute, Artifact, Outcome, Target};
pub use config::RunConfig;
pub use error::{CliError, Result};
