//! Command-line grammar. Defaults: α = 1/2, Γ = 0, ω = 1, β = 1/2 (r = 1/2,
//! θ = 0), Δτ = 0.025, CSV to stdout.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lgi_core::StateKind;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "lgi", version, about = "Leggett-Garg K3 for a damped cavity mode under displaced parity measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate C21, C32, C31 and K3 at one τ.
    K3(K3Args),
    /// K3(τ) on a τ grid at fixed β.
    Sweep(SweepArgs),
    /// Maximize K3 over β at every grid τ.
    Optimize(OptimizeArgs),
    /// Regenerate the dataset behind figure N (1 to 14).
    Figure(FigureArgs),
    /// Compare the closed forms with the Fock-space solver on random draws.
    OracleAudit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Coherent,
    Cat,
}

impl From<StateArg> for StateKind {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Coherent => StateKind::Coherent,
            StateArg::Cat => StateKind::Cat,
        }
    }
}

/// α either as a real number or in polar form.
#[derive(Debug, Clone, Args)]
pub struct AlphaArgs {
    /// Real initial amplitude.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha_mod", "alpha_arg"])]
    pub alpha: Option<f64>,
    /// |α|; combine with --alpha-arg for complex amplitudes.
    #[arg(long)]
    pub alpha_mod: Option<f64>,
    /// arg α in radians (default 0).
    #[arg(long, allow_hyphen_values = true, requires = "alpha_mod")]
    pub alpha_arg: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ModeArgs {
    /// Spontaneous emission rate Γ, in units of ω.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BetaArgs {
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub beta_r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta_theta: f64,
}

/// τ = nΔτ for every n with τ in [tau-min, tau-max].
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub tau_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d_tau: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct K3Args {
    #[arg(long, value_enum, default_value_t = StateArg::Coherent)]
    pub state: StateArg,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub beta: BetaArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = StateArg::Coherent)]
    pub state: StateArg,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub beta: BetaArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value_t = StateArg::Coherent)]
    pub state: StateArg,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub mode: ModeArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Coarse-grid resolution in θ.
    #[arg(long)]
    pub theta_points: Option<usize>,
    /// Coarse-grid resolution in r.
    #[arg(long)]
    pub r_points: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=14))]
    pub n: u8,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Comma-separated damping rates replacing the figure's own.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gammas: Option<Vec<f64>>,
    /// Fixed τ for figure 6.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    /// Restrict to one initial state; both by default.
    #[arg(long, value_enum)]
    pub state: Option<StateArg>,
    #[arg(long, default_value_t = 200)]
    pub draws: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Largest accepted |closed form − oracle|.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}
