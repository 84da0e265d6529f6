//! `naq`: command-line front end for the neutral-atom simulator.
//!
//! Exit codes: 0 on success, 1 when the request is well formed but fails
//! (unreadable file, invalid profile, circuit that does not fit), 2 on
//! usage errors.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use output::write_atomic;

/// Profile used when neither `--profile` nor `NAQ_PROFILE` is given.
pub const DEFAULT_PROFILE: &str = naq_core::profile::DEFAULT_PROFILE;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Profile {
        path: PathBuf,
        source: naq_core::profile::ProfileError,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: naq_core::circuit::ParseError,
    },
    #[error("{}: {source}", path.display())]
    Document {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Transpile(#[from] naq_core::transpile::TranspileError),
    #[error(transparent)]
    Sim(#[from] naq_core::sim::SimError),
    #[error(transparent)]
    Prep(#[from] naq_core::prep::PrepError),
    #[error(transparent)]
    Analog(#[from] naq_core::analog::AnalogError),
    #[error(transparent)]
    Bench(#[from] naq_core::bench::BenchError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "naq",
    version,
    about = "Neutral-atom quantum computer simulator",
    arg_required_else_help = true
)]
pub struct Cli {
    /// Print machine-readable JSON on stdout instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ProfileArg {
    /// Built-in profile name or path to a profile document.
    #[arg(long, env = "NAQ_PROFILE", default_value = DEFAULT_PROFILE)]
    pub profile: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect hardware profiles.
    #[command(subcommand)]
    Profile(ProfileCommand),
    /// Parse a circuit and report diagnostics against a profile.
    Parse(ParseArgs),
    /// Simulate register preparation.
    Prepare(PrepareArgs),
    /// Place, route and schedule a circuit.
    Transpile(TranspileArgs),
    /// Run a circuit on the noisy simulator.
    Run(RunArgs),
    /// Solve maximum independent set with an analog sweep.
    Mis(MisArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
}

#[derive(Debug, Subcommand)]
pub enum ProfileCommand {
    /// Check a profile and print its fingerprint.
    Validate {
        /// Built-in profile name or path; defaults to `NAQ_PROFILE` or the
        /// built-in default.
        profile: Option<String>,
    },
    /// Print the full profile document.
    Show { profile: Option<String> },
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub profile: ProfileArg,
    /// Also print the circuit lowered to native gates.
    #[arg(long)]
    pub lower: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    #[arg(long)]
    pub qubits: usize,
    #[command(flatten)]
    pub profile: ProfileArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub max_retries: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranspileArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub profile: ProfileArg,
    #[arg(long, default_value = "swap")]
    pub mode: naq_core::transpile::RoutingMode,
    /// Charge SWAPs as three CZ durations instead of one native pulse.
    #[arg(long)]
    pub swap_as_three_cz: bool,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub emit_schedule: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub profile: ProfileArg,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Noise preset: off, gates, readout or full.
    #[arg(long, default_value = "full")]
    pub noise: naq_core::sim::NoiseFlags,
    #[arg(long, default_value = "swap")]
    pub mode: naq_core::transpile::RoutingMode,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value_t = 10)]
    pub max_retries: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MisArgs {
    /// JSON list of `[x, y]` positions in micrometres.
    #[arg(long)]
    pub positions: PathBuf,
    /// Blockade radius in micrometres.
    #[arg(long, default_value_t = 8.7)]
    pub rb: f64,
    /// Peak Rabi frequency in rad/µs.
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Sweep duration in µs.
    #[arg(long, default_value_t = 20.0)]
    pub sweep_time: f64,
    #[arg(long, default_value_t = 100)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Integration step in µs; defaults to the largest stable step.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, default_value_t = naq_core::analog::DEFAULT_EXPONENT)]
    pub exponent: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Ghz,
    Qv,
    Clops,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Widths as `a..b` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "2..6", value_parser = parse_widths)]
    pub widths: Widths,
    #[command(flatten)]
    pub profile: ProfileArg,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "full")]
    pub noise: naq_core::sim::NoiseFlags,
    /// Random circuits per width (qv).
    #[arg(long, default_value_t = 20)]
    pub circuits: usize,
    /// Template layers (clops).
    #[arg(long, default_value_t = 100)]
    pub layers: usize,
    /// Line-delimited JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV plot data: width, depth, metric.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Widths(pub Vec<usize>);

/// Parses `2..6`, `2..=6` or `2,3,5`.
pub fn parse_widths(s: &str) -> Result<Widths, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid width `{t}`"))
    };
    let widths = if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty width range `{s}`"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if widths.is_empty() {
        return Err("no widths given".into());
    }
    Ok(Widths(widths))
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{}", e.render());
                    2
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
