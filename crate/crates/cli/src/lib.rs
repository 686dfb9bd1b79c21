//! Command-line front end for `thermowork`: parameter sweeps, single-point
//! reports and randomized audits of the work bound.

pub mod commands;
pub mod format;
pub mod model;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use model::ModelKind;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const NUMERICAL: u8 = 2;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => exit::USAGE,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "thermowork",
    version,
    about = "Work extraction by thermalization of coupled quantum systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a model over a range of couplings g/omega.
    Sweep(SweepArgs),
    /// Evaluate a single model configuration and print one JSON report.
    Point(PointArgs),
    /// Check work <= bound on seeded random bipartite Hamiltonians.
    Audit(AuditArgs),
}

#[derive(Debug, Args, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "rabi")]
    pub model: ModelKind,
    /// Bath temperature k_B T / (hbar omega); 0 selects the exact ground-state branch.
    /// For custom models the file's value is used when omitted.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Initial Fock cutoff for the Rabi model (doubled until converged).
    #[arg(long, default_value_t = thermowork::rabi::DEFAULT_CUTOFF)]
    pub cutoff: usize,
    /// Convergence tolerance on work and efficiency (units of hbar omega).
    #[arg(long, default_value_t = thermowork::rabi::DEFAULT_CONVERGENCE_TOL)]
    pub tol: f64,
    /// Custom model file (JSON); the interaction is scaled by g.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    pub g_start: f64,
    #[arg(long, default_value_t = 2.0)]
    pub g_stop: f64,
    #[arg(long, default_value_t = 0.01)]
    pub g_step: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct PointArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Coupling g/omega (scale factor on H_I for custom models).
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
}

#[derive(Debug, Args, Clone)]
pub struct AuditArgs {
    /// Number of random instances.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    /// Subsystem dimensions as `d_a x d_b`, each in 2..=6.
    #[arg(long, default_value = "2x2", value_parser = parse_dims)]
    pub dims: (usize, usize),
    #[arg(long, default_value_t = 1.0)]
    pub temperature: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X', ','])
        .ok_or_else(|| format!("expected `d_a x d_b`, got `{s}`"))?;
    let parse = |t: &str| -> Result<usize, String> {
        let d: usize = t
            .trim()
            .parse()
            .map_err(|_| format!("bad dimension `{t}`"))?;
        if (2..=6).contains(&d) {
            Ok(d)
        } else {
            Err(format!("dimension {d} outside 2..=6"))
        }
    };
    Ok((parse(a)?, parse(b)?))
}
