//! `diffusim`: command-line front end for the simulation toolkit.
//!
//! Exit codes: 0 on success, 1 on domain or validation errors, 2 on I/O
//! failures, malformed input files, and unknown flags.

mod args;
mod cmd_calib;
mod cmd_price;
mod cmd_rng;
mod cmd_sde;
mod cmd_sim;
mod errors;
mod io;

use clap::{Parser, Subcommand};
use errors::CliError;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "diffusim", version, about = "Stochastic process simulation toolkit")]
struct Cli {
    /// Cap the worker threads used for trajectory generation
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate, transform, and test uniform sources
    #[command(subcommand)]
    Rng(cmd_rng::RngCmd),
    /// Simulate trajectories and measure scheme convergence
    #[command(subcommand)]
    Sde(cmd_sde::SdeCmd),
    /// Price options by Monte Carlo against the closed form
    #[command(subcommand)]
    Price(cmd_price::PriceCmd),
    /// Fit short-rate models to curves and series
    #[command(subcommand)]
    Calib(cmd_calib::CalibCmd),
    /// Rerun a published figure or table with its stated parameters
    #[command(subcommand)]
    Sim(cmd_sim::SimCmd),
}

fn dispatch(cli: Cli) -> errors::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Invalid("threads must be at least 1".into()));
        }
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Rng(cmd) => cmd_rng::run(cmd),
        Command::Sde(cmd) => cmd_sde::run(cmd),
        Command::Price(cmd) => cmd_price::run(cmd),
        Command::Calib(cmd) => cmd_calib::run(cmd),
        Command::Sim(cmd) => cmd_sim::run(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
