//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "wiretap-bench",
    version,
    about = "Bounds, capacities and simulations for the Gaussian wiretap channel",
    after_help = "Exit codes: 0 success, 1 I/O error, 2 usage, 3 infeasible request, 4 numeric failure.\n\
                  WIRETAP_BENCH_THREADS caps the number of worker threads."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Main, eavesdropper and secrecy capacities.
    Capacity(CapacityArgs),
    /// Classify a rate and pick the transmit power.
    Regime(RegimeArgs),
    /// Error-probability bounds for Bob and Eve over a power sweep.
    Fig2(Fig2Args),
    /// Smallest blocklength meeting both error targets.
    Blocklength(BlocklengthArgs),
    /// Bounds on Eve's equivocation.
    Equivocation(EquivocationArgs),
    /// Random-codebook Monte Carlo with ML decoding.
    Simulate(SimulateArgs),
    /// Fading-channel power allocation and capacities.
    Fading(FadingArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Capacity(_) => "capacity",
            Command::Regime(_) => "regime",
            Command::Fig2(_) => "fig2",
            Command::Blocklength(_) => "blocklength",
            Command::Equivocation(_) => "equivocation",
            Command::Simulate(_) => "simulate",
            Command::Fading(_) => "fading",
        }
    }
}

/// Subcommand names, for config handling ahead of parsing.
pub const COMMANDS: [&str; 7] = [
    "capacity",
    "regime",
    "fig2",
    "blocklength",
    "equivocation",
    "simulate",
    "fading",
];

/// Flags that exclude each other; a config value is dropped when its
/// partner was given on the command line.
pub const EXCLUSIVE: [(&str, &str); 1] = [("power", "power-db")];

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here and its manifest next to it as FILE.manifest.toml.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// TOML file with a [<command>] table of flag values; flags win.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
#[serde(rename_all = "kebab-case")]
pub struct Power {
    /// Transmit power in dB (20 dB = 100).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_db: Option<f64>,
    /// Transmit power, linear.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
}

impl Power {
    pub fn linear(&self) -> Option<f64> {
        match (self.power, self.power_db) {
            (Some(p), _) => Some(p),
            (None, Some(db)) => Some(wiretap_core::channel::db_to_linear(db)),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ChannelArgs {
    /// Bob's noise variance.
    #[arg(long)]
    pub sigma1_sq: f64,
    /// Eve's noise variance.
    #[arg(long)]
    pub sigma2_sq: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub power: Power,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CapacityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RegimeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Rate in bits per channel use.
    #[arg(long, allow_hyphen_values = true)]
    pub rate: f64,
    /// Reduced power to use instead of the geometric midpoint.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjusted_power: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Fig2Args {
    /// Bob's noise variance.
    #[arg(long)]
    pub sigma1_sq: f64,
    /// Eve's noise variance.
    #[arg(long)]
    pub sigma2_sq: f64,
    /// Rate in bits per channel use (no default).
    #[arg(long)]
    pub rate: f64,
    /// Blocklengths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    pub n_list: Vec<u64>,
    /// Power sweep in dB: START:STOP:STEP (inclusive) or a comma list.
    #[arg(long, allow_hyphen_values = true, default_value = "0:30:1")]
    pub snr_db_range: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dispersion {
    Paper,
    SquaredLog,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BlocklengthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Rate in bits per channel use.
    #[arg(long)]
    pub rate: f64,
    /// Ceiling on Bob's block error probability.
    #[arg(long)]
    pub beta1: f64,
    /// Floor on Eve's block error probability.
    #[arg(long)]
    pub beta2: f64,
    #[arg(long, value_enum, default_value_t = Dispersion::Paper)]
    pub dispersion: Dispersion,
    /// Check this blocklength instead of searching for the smallest.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EquivocationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Blocklength.
    #[arg(long)]
    pub n: u64,
    /// Rate in bits per channel use.
    #[arg(long)]
    pub rate: f64,
    /// Eve's error probability for the Fano and envelope bounds
    /// [default: the Arimoto lower bound].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pe_eve: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Blocklength.
    #[arg(long)]
    pub n: usize,
    /// Rate in bits per channel use.
    #[arg(long)]
    pub rate: f64,
    /// Number of independent trials.
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    /// Master seed; trial i draws from stream i.
    #[arg(long)]
    pub seed: u64,
    /// Slack on the squared confusion radius.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Draw one codebook for all trials instead of one per trial.
    #[arg(long)]
    pub shared_codebook: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    Both,
    Secrecy,
    Main,
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(multiple = false)]
#[serde(rename_all = "kebab-case")]
pub struct FadingPower {
    /// Average power budget in dB.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_db: Option<f64>,
    /// Average power budget, linear [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct FadingArgs {
    /// Mean of Bob's exponential power gain.
    #[arg(long, default_value_t = 1.0)]
    pub mean_q: f64,
    /// Mean of Eve's exponential power gain.
    #[arg(long, default_value_t = 1.0)]
    pub mean_r: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub power: FadingPower,
    #[arg(long, value_enum, default_value_t = PolicyArg::Both)]
    pub policy: PolicyArg,
    /// Gauss–Legendre nodes per axis.
    #[arg(long, default_value_t = 128)]
    pub nodes: usize,
    /// Upper-tail mass cut from each gain distribution.
    #[arg(long, default_value_t = 1e-8)]
    pub tail_mass: f64,
    /// Monte Carlo samples for the cross-check (0 skips it).
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_samples: u64,
    /// Seed for the Monte Carlo cross-check.
    #[arg(long)]
    pub seed: u64,
    /// Relative tolerance on the average-power constraint.
    #[arg(long, default_value_t = 1e-6)]
    pub tol_lambda: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}
