//! Command-line driver for `spinbath`: parameter sweeps, figure presets and
//! oracle verification, all written as CSV.

pub mod app;
pub mod commands;
pub mod config;

pub use commands::{run, RunOutput, Table, VerifyOptions};
pub use config::{Command, Overrides, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] spinbath::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
