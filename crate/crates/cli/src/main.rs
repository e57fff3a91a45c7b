//! `kinorder`: rates, gas simulation, hierarchic oscillators and causal sites.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 invalid input,
//! 3 runtime failure.

mod causal;
mod hierosc;
mod output;
mod rates;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "kinorder",
    version,
    about = "One-way kinetic gas, hierarchic oscillators and causal sites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boltzmann ratio, Einstein rates and the level generator.
    Rates(rates::RatesArgs),
    /// Run the particle gas and write observables as CSV.
    Simulate(simulate::SimulateArgs),
    /// Evolve the four-particle quantum chain and write occupations as CSV.
    HierOsc(hierosc::HierOscArgs),
    /// Causal-site checking and generation.
    #[command(subcommand)]
    Causal(causal::CausalCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<kinorder_core::Error>() {
        Some(kinorder_core::Error::Runtime(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rates(args) => rates::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::HierOsc(args) => hierosc::run(args),
        Command::Causal(cmd) => causal::run(cmd),
    };
    match result {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
