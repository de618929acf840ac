//! Command-line laboratory for self-similar solutions of
//! u_t = u_xx + u|u|^{p-1} with 0 < p < 1.
//!
//! Every subcommand resolves its settings from built-in defaults, then the
//! `[command]` section of an optional config file, then explicit flags;
//! writes CSV/JSON/SVG artifacts into the output directory; and finishes
//! with a manifest entry per file. Runs are byte-deterministic: the same
//! configuration always produces identical artifacts.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use selfsim::SimError;

mod commands;
mod config;
mod emit;

/// Flags every subcommand accepts; each maps onto the same keys in the
/// config file's `[command]` section, with the flag winning.
#[derive(Args, Debug)]
pub struct CommonFlags {
    /// Reaction exponent in (0, 1)
    #[arg(long)]
    pub p: Option<f64>,

    /// Directory for artifacts (created if missing)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Config file with one [command] section per subcommand
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Bracket width at which the shooting bisection stops
    #[arg(long)]
    pub tol_beta: Option<f64>,

    /// Integration horizon in |eta|
    #[arg(long)]
    pub eta_max: Option<f64>,

    /// RNG seed for sampled sweeps
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Parser, Debug)]
#[command(name = "selfsim", version, about = "Self-similar solution laboratory for u_t = u_xx + u|u|^{p-1}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample level curves of the phase-plane invariant V
    Levelset(CommonFlags),
    /// Integrate a seed two-sidedly and audit decay and containment
    Homoclinic(CommonFlags),
    /// Shoot for the front connecting the origin to the saddle
    Heteroclinic(CommonFlags),
    /// Tabulate oscillator periods and draw the nested orbit family
    Periodic(CommonFlags),
    /// Check reconstructed fields against the reaction-diffusion equation
    PdeVerify(CommonFlags),
    /// Fit the envelope decay law of a decaying trajectory
    DecayFit(CommonFlags),
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration: exit code 2.
    Validation(String),
    /// The computation itself failed: exit code 3.
    Numerical(SimError),
    /// Filesystem trouble: exit code 4.
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "invalid request: {msg}"),
            CliError::Numerical(e) => write!(f, "computation failed: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            // Rejected inputs keep validation semantics end to end.
            SimError::InvalidParameter(_) | SimError::SeedInvariant { .. } => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Levelset(flags) => commands::levelset::run(flags),
        Command::Homoclinic(flags) => commands::homoclinic::run(flags),
        Command::Heteroclinic(flags) => commands::heteroclinic::run(flags),
        Command::Periodic(flags) => commands::periodic::run(flags),
        Command::PdeVerify(flags) => commands::pde::run(flags),
        Command::DecayFit(flags) => commands::decay::run(flags),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("selfsim: {e}");
            ExitCode::from(match e {
                CliError::Validation(_) => 2,
                CliError::Numerical(_) => 3,
                CliError::Io(_) => 4,
            })
        }
    }
}
