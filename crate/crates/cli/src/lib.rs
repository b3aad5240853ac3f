//! Batch runner for the `cqsum` analyses and simulations.
//!
//! Each subcommand reads an optional JSON configuration, runs one analysis
//! and writes `report.json` (plus `sweep.csv` and `code.json` where they
//! apply) into the output directory. Runs are deterministic given the
//! configuration and seed; `--no-timestamp` removes the only
//! nondeterministic fields.

pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use cqsum::{Limits, Tolerances};
use thiserror::Error;

use crate::commands::Context;
use crate::config::ExperimentConfig;
use crate::output::{write_artifacts, Artifacts};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed configuration: {0}")]
    Json(#[source] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] cqsum::Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// Process exit status: 2 for malformed JSON, 3 for failed
    /// preconditions, 4 for exceeded budgets and 1 for output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Json(_) => 2,
            CliError::Config(_) => 3,
            CliError::Core(cqsum::Error::Resource(_)) => 4,
            CliError::Core(_) => 3,
            CliError::Output(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cqsum", version, about = "Message-sum coding over classical-quantum multiple access channels")]
pub struct Cli {
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory that receives report.json and the other artifacts.
    #[arg(long, global = true, default_value = "cqsum-out")]
    pub out: PathBuf,
    /// Master seed; overrides the configuration's "seed".
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest Hilbert-space dimension of any tensor power.
    #[arg(long, global = true)]
    pub budget_dim: Option<usize>,
    /// Largest exhaustive enumeration.
    #[arg(long, global = true)]
    pub budget_enum: Option<usize>,
    /// Numerical tolerance applied to every validity check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Omit timestamps and wall-clock times so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Message-sum rate of given embeddings and the structured/unstructured verdicts.
    Rates,
    /// Maximize the message-sum rate over embeddings.
    Optimize,
    /// Worked binary example: one parameter point, or a witness search.
    Example1 {
        /// Search the parameter grid for a witness instead.
        #[arg(long)]
        search: bool,
    },
    /// Exact error of random point-to-point nested coset codes.
    SimulatePtp,
    /// Exact error of random message-sum codes.
    SimulateMacSum,
    /// Error of the syndrome-then-message-sum function computation scheme.
    SimulateEndToEnd,
    /// Minimum pinched trace over jointly typical pairs.
    VerifyPinching,
    /// Monte Carlo probability that a coset has no typical member.
    VerifyCoverage,
    /// Monte Carlo block error of syndrome source coding.
    Km,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rates => "rates",
            Command::Optimize => "optimize",
            Command::Example1 { .. } => "example1",
            Command::SimulatePtp => "simulate-ptp",
            Command::SimulateMacSum => "simulate-mac-sum",
            Command::SimulateEndToEnd => "simulate-end-to-end",
            Command::VerifyPinching => "verify-pinching",
            Command::VerifyCoverage => "verify-coverage",
            Command::Km => "km",
        }
    }
}

impl Cli {
    fn limits(&self) -> Result<Limits, CliError> {
        let mut limits = Limits::default();
        if let Some(d) = self.budget_dim {
            limits.max_dim = d;
        }
        if let Some(e) = self.budget_enum {
            limits.max_enum = e;
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Config(format!("tolerance {t} must lie in (0, 1)")));
            }
            limits.tol = Tolerances::uniform(t);
        }
        Ok(limits)
    }
}

/// Runs the command and returns its artifacts without writing them.
pub fn execute(cli: &Cli) -> Result<Artifacts, CliError> {
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::empty(),
    };
    let name = cli.command.name();
    if let Some(declared) = &config.command {
        if declared != name {
            return Err(CliError::Config(format!("configuration is for {declared:?}, not {name:?}")));
        }
    }
    let ctx = Context {
        limits: cli.limits()?,
        seed: cli.seed.or(config.seed).unwrap_or(0),
        timestamps: !cli.no_timestamp,
    };
    match cli.command {
        Command::Rates => commands::rates(&config, &ctx),
        Command::Optimize => commands::optimize(&config, &ctx),
        Command::Example1 { search } => commands::example1(&config, &ctx, search),
        Command::SimulatePtp => commands::simulate_ptp(&config, &ctx),
        Command::SimulateMacSum => commands::simulate_mac_sum(&config, &ctx),
        Command::SimulateEndToEnd => commands::simulate_end_to_end(&config, &ctx),
        Command::VerifyPinching => commands::verify_pinching(&config, &ctx),
        Command::VerifyCoverage => commands::verify_coverage(&config, &ctx),
        Command::Km => commands::km(&config, &ctx),
    }
}

/// Runs the command and writes its artifacts into `cli.out`.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let artifacts = execute(cli)?;
    write_artifacts(Path::new(&cli.out), &artifacts)
}
