//! Command-line front end for the leader-selection engine.
//!
//! Four subcommands: `classify` prints the (rho, nu) dichotomy data,
//! `exact` tabulates round-count moments and CDF slices, `simulate` runs
//! seeded trials, and `compare` lines exact tables up against the
//! leading-order growth laws. Games come from `builtin:NAME` (optionally
//! parametrized, `builtin:ctls?p=1/3`) or from a JSON spec file.
//!
//! Exit codes: 0 success, 2 invalid game description (the stable error name
//! leads the message), 3 numeric failure (float overflow or a blown table
//! budget), 4 a simulation that cannot finish, 1 anything else. The env var
//! JANKEN_BUDGET caps the table cost horizon^2 * (moments + levels + 2).

mod artifacts;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use janken_core::exact::CdfLevels;
use janken_core::scalar::NumericMode;
use janken_core::sim::SimMode;
use janken_core::{NumericError, SimError, SpecError};

#[derive(Parser)]
#[command(
    name = "janken",
    version,
    about = "Exact analysis and simulation of generalized Janken leader selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print rho, nu, kind, the winner masses, and the slope h_nu.
    Classify(ClassifyArgs),
    /// Tabulate exact moments and CDF slices up to a player horizon.
    Exact(ExactArgs),
    /// Run seeded trials; write samples, a summary, and a manifest.
    Simulate(SimulateArgs),
    /// Compare exact tables with the leading-order growth laws.
    Compare(CompareArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Game description: a spec-file path, or builtin:NAME[?key=value].
    #[arg(long)]
    spec: String,
}

#[derive(Args)]
struct ExactArgs {
    /// Game description: a spec-file path, or builtin:NAME[?key=value].
    #[arg(long)]
    spec: String,
    /// Largest player count to tabulate.
    #[arg(long = "N", default_value_t = 32)]
    horizon: usize,
    /// Highest raw moment of the round count; variances need 2.
    #[arg(long = "K", default_value_t = 2)]
    moments: usize,
    /// CDF slice depth: none, auto, or an explicit level count.
    #[arg(long = "L", value_parser = parse_cdf_levels, default_value = "none")]
    levels: CdfLevels,
    /// Table arithmetic.
    #[arg(long, value_enum, default_value_t = ModeArg::Rational)]
    mode: ModeArg,
    /// Table file format; the manifest is always JSON.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Game description: a spec-file path, or builtin:NAME[?key=value].
    #[arg(long)]
    spec: String,
    /// Number of players.
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Independent trials to run.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Stream seed; identical seeds reproduce runs bit for bit.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Round generation: per-round plays ties out, fast-forward jumps them.
    #[arg(long = "sim-mode", value_enum, default_value_t = SimModeArg::PerRound)]
    sim_mode: SimModeArg,
    /// Abort a trial after this many effective rounds.
    #[arg(long = "round-cap", default_value_t = 1_000_000_000)]
    round_cap: u64,
    /// Exact-table horizon for the summary cross-check; defaults to n, and
    /// a value below n skips the check.
    #[arg(long = "N")]
    horizon: Option<usize>,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Game description: a spec-file path, or builtin:NAME[?key=value].
    #[arg(long)]
    spec: String,
    /// Player range: a single n, "lo..hi", or powers like "2^10..2^12".
    #[arg(long)]
    n: String,
    /// Table arithmetic; float reaches the large horizons.
    #[arg(long, value_enum, default_value_t = ModeArg::Float)]
    mode: ModeArg,
    /// Highest raw moment to tabulate (at least 2).
    #[arg(long = "K", default_value_t = 2)]
    moments: usize,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rational,
    Float,
}

impl From<ModeArg> for NumericMode {
    fn from(m: ModeArg) -> NumericMode {
        match m {
            ModeArg::Rational => NumericMode::Rational,
            ModeArg::Float => NumericMode::Float,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SimModeArg {
    PerRound,
    FastForward,
}

impl From<SimModeArg> for SimMode {
    fn from(m: SimModeArg) -> SimMode {
        match m {
            SimModeArg::PerRound => SimMode::PerRound,
            SimModeArg::FastForward => SimMode::FastForward,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn parse_cdf_levels(s: &str) -> Result<CdfLevels, String> {
    match s {
        "none" => Ok(CdfLevels::None),
        "auto" => Ok(CdfLevels::Auto),
        other => other
            .parse::<usize>()
            .map(CdfLevels::Fixed)
            .map_err(|_| "expected none, auto, or a level count".to_string()),
    }
}

/// Anything a command can fail with, mapped onto the exit-code contract.
#[derive(Debug)]
enum CliError {
    Spec(SpecError),
    Numeric(NumericError),
    Sim(SimError),
    Io(String),
    Usage(String),
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> CliError {
        CliError::Spec(e)
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> CliError {
        CliError::Numeric(e)
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> CliError {
        CliError::Sim(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Sim(_) => 4,
            CliError::Io(_) | CliError::Usage(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Spec(e) => format!("{}: {}", e.name(), e),
            CliError::Numeric(e) => format!("numeric error: {e}"),
            CliError::Sim(e) => format!("simulation error: {e}"),
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
        }
    }
}

/// Default table-cost cap when JANKEN_BUDGET is unset.
const DEFAULT_BUDGET: u128 = 10_000_000_000;

fn budget_from_env() -> Result<u128, CliError> {
    match std::env::var("JANKEN_BUDGET") {
        Ok(v) => v.trim().parse::<u128>().map_err(|_| {
            CliError::Usage(format!("JANKEN_BUDGET='{v}' is not an unsigned integer"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BUDGET),
        Err(e) => Err(CliError::Usage(format!("JANKEN_BUDGET: {e}"))),
    }
}

/// One endpoint of a player range: a plain count or a power like 2^12.
fn parse_players(s: &str) -> Result<usize, CliError> {
    let t = s.trim();
    let bad = || CliError::Usage(format!("'{t}' is not a player count (try 729 or 2^10)"));
    match t.split_once('^') {
        Some((base, exp)) => {
            let b: usize = base.trim().parse().map_err(|_| bad())?;
            let e: u32 = exp.trim().parse().map_err(|_| bad())?;
            b.checked_pow(e)
                .ok_or_else(|| CliError::Usage(format!("'{t}' overflows the player count")))
        }
        None => t.parse().map_err(|_| bad()),
    }
}

/// "n", "lo..hi", with either endpoint in power syntax.
fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse_players(a)?, parse_players(b)?),
        None => {
            let n = parse_players(s)?;
            (n, n)
        }
    };
    if lo < 2 || hi < lo {
        return Err(CliError::Usage(format!(
            "player range {lo}..{hi} needs 2 <= lo <= hi"
        )));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    // Die quietly when the reader closes the pipe (`janken ... | head`)
    // instead of panicking mid-report.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Classify(args) => commands::classify(&args),
        Cmd::Exact(args) => commands::exact(&args),
        Cmd::Simulate(args) => commands::simulate(&args),
        Cmd::Compare(args) => commands::compare(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
