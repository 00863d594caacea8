//! `dispatch`: run the proactive dispatch simulator on synthetic worlds,
//! scenario files or NYC taxi trips.

mod config;
mod output;
mod run;
mod sweep;
mod taxi;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use dispatch_core::scenario::generate;

use config::{ConfigFile, SyntheticFlags};

#[derive(Debug, Parser)]
#[command(
    name = "dispatch",
    version,
    about = "Online multi-task assignment with availability anticipation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation.
    Run(run::RunArgs),
    /// Average simulations over an alpha x horizon x seed grid.
    Sweep(sweep::SweepArgs),
    /// Simulate one night of taxi trips.
    Taxi(taxi::TaxiArgs),
    /// Write a synthetic scenario file.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    windows: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    synthetic: SyntheticFlags,
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let mut spec = ConfigFile::load(args.config.as_deref())?.synthetic;
    args.synthetic.apply(&mut spec);
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    if let Some(v) = args.windows {
        spec.total_windows = v;
    }
    if let Some(v) = args.delta {
        spec.delta = v;
    }
    let scenario = generate(&spec)?;
    scenario.save(&args.out)?;
    println!(
        "{} agents, {} requests written to {}",
        scenario.agents.len(),
        scenario.requests.len(),
        args.out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Run(a) => run::cmd_run(a),
        Command::Sweep(a) => sweep::cmd_sweep(a),
        Command::Taxi(a) => taxi::cmd_taxi(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
