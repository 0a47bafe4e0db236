//! `gmhd`: batch front end for checking parameter regimes, running the mild
//! solver and probing the operator estimates.

mod check;
mod config;
mod error;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gmhd", version, about = "gMHD-alpha pseudo-spectral laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the hypothesis system for one parameter instance.
    Check(Common),
    /// Run the Picard solver and write diagnostics and snapshots.
    Simulate(Common),
    /// Run one estimate verifier.
    Verify(Common),
    /// Check a one-parameter family of instances.
    Sweep(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Directory for reports and artifacts.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Overrides the seed in the configuration.
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Print the machine-readable report instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

/// Successful runs that still carry a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GMHD_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("GMHD_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::config(e.to_string()))
}

fn run(cli: Cli) -> Result<Verdict, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Check(c) => check::run_check(&c),
        Command::Sweep(c) => check::run_sweep(&c),
        Command::Simulate(c) => simulate::run_simulate(&c),
        Command::Verify(c) => verify::run_verify(&c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
