//! Front end for `matmoment`: JSON in, JSON out, stable exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | infeasible moments, invalid certificate, refuted polynomial |
//! | 3 | invalid input |
//! | 4 | numerical failure or failed certificate search |

pub mod commands;
pub mod io;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<matmoment::Error> for CliError {
    fn from(e: matmoment::Error) -> Self {
        let code = match e {
            matmoment::Error::InvalidInput(_) | matmoment::Error::Precondition(_) => EXIT_INVALID,
            matmoment::Error::NumericalFailure { .. } | matmoment::Error::SearchFailure { .. } => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "matmoment", version, about = "Matrix moment problems and SOS certificates on {a} ∪ [b, c]")]
pub struct Cli {
    /// Write the main artifact here instead of stdout ("-" is stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the diagnostic report here instead of stderr.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct TolArgs {
    /// Relative singular-value cutoff for ranks and pseudoinverses.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_rank: f64,
    /// Relative eigenvalue slack for PSD tests.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_psd: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Measure,
    CertificateInstance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    ToUnbounded,
    FromUnbounded,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments Γ₀..Γ_n of an atomic measure.
    Moments {
        measure: String,
        #[arg(long)]
        n: usize,
    },
    /// Solve the moment problem; writes a representing measure.
    Solve {
        moments: String,
        set: String,
        #[command(flatten)]
        tol: TolArgs,
        /// Snapping radius for atoms near K, relative to c − a.
        #[arg(long, default_value_t = 1e-6)]
        snap_tol: f64,
    },
    /// Check that a measure lives on K and reproduces the moments.
    VerifyMeasure {
        measure: String,
        moments: String,
        set: String,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, default_value_t = 1e-6)]
        snap_tol: f64,
    },
    /// Search for a degree-bounded SOS certificate of a polynomial on K.
    Certify {
        poly: String,
        set: String,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Check a certificate against a polynomial.
    VerifyCert {
        poly: String,
        cert: String,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Move a certificate or polynomial between {−1} ∪ [b', 0] and {a} ∪ [b, ∞).
    Transform {
        input: String,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[arg(long)]
        a: f64,
    },
    /// Seeded random instances.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        set: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
