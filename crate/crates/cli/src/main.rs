//! `qknot`: command-line front end for colored Jones polynomials of 2-fusion
//! knots, recurrence guessing and checking, and Kashaev invariants.

mod cache;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qknot::QError;

/// Exit status of a failed run.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input (exit 2).
    Usage(String),
    /// A verification or consistency check failed (exit 1).
    Failure(String),
    /// A numeric degeneracy could not be resolved (exit 3).
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<QError> for CliError {
    fn from(e: QError) -> Self {
        match e {
            QError::InvalidArgument(_) | QError::Parse { .. } | QError::Unavailable(_) => {
                CliError::Usage(e.to_string())
            }
            QError::Numeric(_) | QError::Degenerate(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "qknot", version, about = "Colored Jones polynomials, q-holonomic recurrences and Kashaev invariants of 2-fusion knots")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalOpts {
    /// Worker threads of the task queue.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Disk cache directory for exact colored Jones polynomials.
    #[arg(long, global = true, env = "QKNOT_CACHE")]
    pub cache: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for prime and evaluation-point sampling and cache spot checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Colored Jones polynomial J_{K,n} (exact, modular, or its statistics).
    Jones(commands::JonesArgs),
    /// Guess an inhomogeneous recurrence for a pretzel knot.
    Guess(commands::GuessArgs),
    /// Check that an operator annihilates the colored Jones sequence.
    Verify(commands::VerifyArgs),
    /// Classical consistency checks of an operator (palindromy, loop, AJ, ε).
    Consistency(commands::ConsistencyArgs),
    /// Kashaev invariants and growth rates a_N from a recurrence.
    Kashaev(commands::KashaevArgs),
    /// Fit c0 + c1 log(N)/N + c2/N to a series of a_N.
    Volfit(commands::VolfitArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qknot: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
