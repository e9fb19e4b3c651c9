//! Front end of the `dce` binary: argument handling, grid sweeps and
//! machine-readable output over `dce-core`.
//!
//! Exit codes: 0 success, 1 invalid configuration or I/O, 2 numerical
//! non-convergence, 3 verification failure.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("output: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let merged = match args::merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "dce: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Beta(a) => commands::beta(a, stdout, stderr),
        Command::Spectrum(a) => commands::spectrum(a, stdout, stderr),
        Command::Energy(a) => commands::energy(a, stdout, stderr),
        Command::Classify(a) => commands::classify(a, stdout, stderr),
        Command::Verify(a) => commands::verify(a, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "dce {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
