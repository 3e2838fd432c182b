//! File formats, run configuration and command implementations for the
//! `apsk-shaper` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod table;

pub use config::{Method, RunConfig};
pub use error::{CliError, ExitCode};
pub use table::SweepRow;
