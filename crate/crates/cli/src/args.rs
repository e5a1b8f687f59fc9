//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraccob_core::cobweb::ModelKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "fraccob",
    version,
    about = "Fractional cobweb price dynamics with the Hilfer derivative"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prices at fixed times, one row per (μ, ν).
    Table(RunArgs),
    /// Sampled price paths in long format.
    Traj(RunArgs),
    /// Residual of the governing equation from the numerical oracle, at h and h/2.
    Verify(VerifyArgs),
    /// Evaluate E_{μ,γ}(z).
    Mlf(MlfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Demand,
    Supply,
}

impl From<Kind> for ModelKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Demand => ModelKind::Demand,
            Kind::Supply => ModelKind::Supply,
        }
    }
}

/// Mittag-Leffler evaluation policy overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct MlArgs {
    #[arg(long)]
    pub series_tol: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long)]
    pub asym_switch: Option<f64>,
    #[arg(long)]
    pub asym_terms: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON file with any of the options below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<Kind>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta1: Option<f64>,
    /// Supply model only.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Comma-separated fractional orders μ in (0, 1].
    #[arg(long, value_delimiter = ',')]
    pub mu: Option<Vec<f64>>,
    /// Comma-separated type parameters ν in [0, 1].
    #[arg(long, value_delimiter = ',')]
    pub nu: Option<Vec<f64>>,
    /// Initial constant C = (I^{1-γ} p)(0⁺).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Comma-separated sampling times.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["t_start", "t_end", "points", "log"])]
    pub times: Option<Vec<f64>>,
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Log-spaced instead of evenly spaced times.
    #[arg(long)]
    pub log: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in CSV output.
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Coarse grid step; the report also runs h/2.
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MlfArgs {
    #[arg(long)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub precision: Option<usize>,
    #[command(flatten)]
    pub ml: MlArgs,
}
