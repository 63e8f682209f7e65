//! File formats, chart rendering and command dispatch for the `ratioplan` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod svg;

pub use commands::{run, Cli};
pub use error::CliError;
