//! Library half of the `skwv` command-line tool: configuration, snapshot
//! files and the subcommands.

use std::io;

pub mod commands;
pub mod config;
pub mod snapshot;

pub use commands::{run, Cli, Command};
pub use config::{DataKind, RunConfig};
pub use snapshot::SnapshotFile;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SINGULARITY: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("bad snapshot: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] skwv::Error),
}
