//! Command-line front end for 2.5D thermometry: synthesize heating runs,
//! rebuild temperature volumes from sparse rotating slices, score them against
//! ground truth, and benchmark the hot paths.

mod bench;
mod config;
mod evaluate;
mod manifest;
mod reconstruct;
mod simulate;

use clap::{Parser, Subcommand};

/// Failure classified by phase: bad inputs versus broken data mid-run.
pub enum CliError {
    /// Invalid flags, config file, or phantom description (exit 2).
    Config(anyhow::Error),
    /// Missing, corrupt, or inconsistent data while executing (exit 3).
    Data(anyhow::Error),
}

#[derive(Parser)]
#[command(
    name = "thermo25d",
    version,
    about = "2.5D temperature mapping toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic heating dataset from a phantom description.
    Simulate(simulate::SimulateArgs),
    /// Rebuild the temperature volume from a simulated dataset.
    Reconstruct(reconstruct::ReconstructArgs),
    /// Score reconstructions against their ground truth.
    Evaluate(evaluate::EvaluateArgs),
    /// Time map construction and per-slice reconstruction.
    Bench(bench::BenchArgs),
}

fn main() {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate::run(args),
        Command::Reconstruct(args) => reconstruct::run(args),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(()) => {}
        Err(CliError::Config(e)) => {
            eprintln!("configuration error: {e:#}");
            std::process::exit(2);
        }
        Err(CliError::Data(e)) => {
            eprintln!("data error: {e:#}");
            std::process::exit(3);
        }
    }
}
