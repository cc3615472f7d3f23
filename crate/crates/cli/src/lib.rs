//! Command-line front end for `qrma-core`: parameter sweeps written as CSV or
//! JSON tables.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;

use qrma_core::QrmaError;
use thiserror::Error;

pub use config::{Cli, Command, FileConfig, RunConfig};
pub use output::{Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation did not converge: {0}")]
    Convergence(QrmaError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<QrmaError> for CliError {
    fn from(e: QrmaError) -> Self {
        match e {
            QrmaError::InvalidParameter(msg) => CliError::Config(msg),
            other => CliError::Convergence(other),
        }
    }
}

/// Render the table for a resolved config.
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(commands::build(cfg)?.render(cfg.format))
}

/// Resolve, compute and write the output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let text = render(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
