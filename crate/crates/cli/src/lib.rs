//! Command-line front end for `gaborlet`: file codecs, subcommands and the
//! verification harness.

pub mod codec;
pub mod commands;
pub mod config;
pub mod error;
pub mod verify;

pub use commands::{run, Outcome};
pub use config::{Cli, RunConfig};
pub use error::{CliError, CliResult};
