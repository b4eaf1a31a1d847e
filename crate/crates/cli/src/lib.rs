//! Command-line front end: argument parsing, subcommands and output formats.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

pub use commands::{execute, run, Report};
pub use config::{parse_args, Format, RunConfig, Subcommand};
pub use error::CliError;
