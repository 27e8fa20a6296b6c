//! Command-line driver for the `twocentre` library.
//!
//! Exit codes: 0 when every judged check passes, 1 when a check fails,
//! 2 for usage and configuration errors.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Format, Overrides, RunConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io(_) => 2,
            Self::Runtime(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "twocentre", version, about = "Two-centre problems with a Dirac monopole: checks, flows and spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration; flags below take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: twocentre-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Run sweep grid points concurrently.
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Bracket identities, commutation of H and F, Casimirs and the Killing baseline.
    Verify,
    /// Integrate one trajectory and record the first integrals.
    Simulate,
    /// Elliptic coordinates, gauge potential and separation constants.
    EllipticCheck,
    /// Truncated spectrum, structure residuals and the commutator table.
    Quantum,
    /// Bracket checks over a parameter grid.
    Sweep,
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            seed: self.seed,
            format: self.format,
            out: self.out.clone(),
            parallel: self.parallel,
        });
        Ok(cfg)
    }
}

/// Runs one subcommand and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = cli.run_config().and_then(|cfg| match cli.command {
        Command::Verify => commands::verify(&cfg),
        Command::Simulate => commands::simulate(&cfg),
        Command::EllipticCheck => commands::elliptic_check(&cfg),
        Command::Quantum => commands::quantum(&cfg),
        Command::Sweep => commands::sweep(&cfg),
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
