use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "dnls",
    version,
    about = "Numerical laboratory for the derivative nonlinear Schrödinger equation"
)]
pub struct Cli {
    /// Directory that receives the config echo, report, manifest and CSV output.
    #[arg(long, global = true, default_value = "dnls-out")]
    pub out: PathBuf,

    /// Seed for random-field suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON simulation config.
    #[arg(long)]
    pub config: PathBuf,

    /// Override a config key, e.g. `--set initial.a=0.9` or `--set grid.n_points=512`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long = "n")]
    pub n_points: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    #[value(name = "Q", alias = "q")]
    Q,
    Psi,
    Gaussian,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one equation and record diagnostics.
    Simulate(ConfigArgs),
    /// Check energy and momentum correspondence under the gauge map on random fields.
    GaugeCheck {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Conserved quantities and bound diagnostics of the initial datum of a config.
    Invariants(ConfigArgs),
    /// Certify the ground state Q on a grid.
    GroundState {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Evaluate both Gagliardo-Nirenberg ratios on a test field.
    GnVerify {
        #[arg(long, value_enum)]
        field: FieldKind,
        /// Also estimate both sharp constants by numerical search.
        #[arg(long)]
        estimate: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Analyze the threshold cubic for a mass and energy slack.
    Cubic {
        #[arg(long, allow_hyphen_values = true)]
        m0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        epsilon: f64,
    },
    /// Run the gauged equation from scaled ground states of several masses.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        amplitudes: Vec<f64>,
        /// Base config; defaults to the gauged equation on the standard grid.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Temporal convergence study over successively halved steps.
    Convergence {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        dts: Vec<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::GaugeCheck { .. } => "gauge-check",
            Command::Invariants(_) => "invariants",
            Command::GroundState { .. } => "ground-state",
            Command::GnVerify { .. } => "gn-verify",
            Command::Cubic { .. } => "cubic",
            Command::Sweep { .. } => "sweep",
            Command::Convergence { .. } => "convergence",
        }
    }
}
