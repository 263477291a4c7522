//! `coslab`: evaluate multipliers, run identity suites, apply operators to
//! files and classify star bodies.

mod apply;
mod body;
mod config;
mod error;
mod io;
mod multiplier;
mod run_report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Settings;
use crate::error::{exit, CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "coslab",
    version,
    about = "Spherical cosine, sine, Funk and Radon transforms and star-body classes"
)]
struct Cli {
    /// Flat `key = value` file overriding the built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the multipliers of an operator family for degrees 0..=jmax.
    Multiplier(multiplier::MultiplierArgs),
    /// Run identity suites and write a JSON run report.
    Verify(verify::VerifyArgs),
    /// Apply an operator to a function file.
    Apply(apply::ApplyArgs),
    /// Build, transform and classify star bodies.
    #[command(subcommand)]
    Body(body::BodyCmd),
}

fn init_threads(settings: &Settings) -> CliResult<()> {
    let from_env = match std::env::var("COSLAB_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            CliError::usage(format!(
                "COSLAB_THREADS must be a positive integer, got {v:?}"
            ))
        })?),
        Err(_) => None,
    };
    if let Some(k) = from_env.or(settings.threads).filter(|&k| k > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<i32> {
    let settings = Settings::load(cli.config.as_deref())?;
    init_threads(&settings)?;
    match &cli.command {
        Command::Multiplier(a) => multiplier::run(a).map(|_| 0),
        Command::Verify(a) => verify::run(a, &settings),
        Command::Apply(a) => apply::run(a).map(|_| 0),
        Command::Body(cmd) => body::run(cmd, &settings),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("coslab: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
