//! `hilbert-norms`: norms, bounds, verification suites and tables for the
//! Hilbert matrix operator.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid
//! configuration, 3 the requested operator is unbounded, 4 a numerical
//! method did not converge.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<hilbert_core::Error> for CliError {
    fn from(e: hilbert_core::Error) -> Self {
        match e {
            hilbert_core::Error::Domain(m) => CliError::Config(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn emit(cfg: &config::RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = config::Cli::parse();
    let result = config::resolve(cli).and_then(|cfg| {
        let outcome = commands::run(&cfg)?;
        emit(&cfg, &outcome.report.render(cfg.format))?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if let Some(m) = outcome.message {
                eprintln!("{m}");
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
