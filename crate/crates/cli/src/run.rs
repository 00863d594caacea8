use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use dispatch_core::model::{HorizonMode, SimConfig};
use dispatch_core::scenario::{generate, Scenario, SyntheticSpec};
use dispatch_core::sim::run_simulation;
use serde::Serialize;

use crate::config::{parse_horizon, ConfigFile, SimFlags, SyntheticFlags};
use crate::output::{
    print_summary, results_path, write_json, write_trace_csv, RunDocument, Summary,
};

#[derive(Debug, Args)]
pub struct RunArgs {
    /// "synthetic" for the generated grid world, or a scenario file.
    #[arg(long)]
    pub scenario: String,
    /// Receding horizon: a window count k, or "variable".
    #[arg(long)]
    pub horizon: Option<String>,
    /// Largest k tried by the variable horizon.
    #[arg(long)]
    pub max_k: Option<usize>,
    /// Seed for the synthetic world and the GA.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub sim: SimFlags,
    #[command(flatten)]
    pub synthetic: SyntheticFlags,
    /// Results file (default: run.json in the results directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a per-window CSV trace.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Save the scenario that was simulated.
    #[arg(long)]
    pub save_scenario: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ScenarioSource {
    Synthetic(SyntheticSpec),
    File {
        path: String,
        agents: usize,
        requests: usize,
    },
}

/// Resolves the configuration and scenario of a run.
pub fn resolve(args: &RunArgs) -> Result<(SimConfig, Scenario, ScenarioSource)> {
    let file = ConfigFile::load(args.sim.config.as_deref())?;
    let mut builder = file.sim;
    let mut spec = file.synthetic;
    args.sim.apply(&mut builder);
    args.synthetic.apply(&mut spec);
    if let Some(h) = &args.horizon {
        builder.horizon = parse_horizon(h, args.max_k)?;
    } else if let (Some(max_k), HorizonMode::Variable { .. }) = (args.max_k, builder.horizon) {
        builder.horizon = HorizonMode::Variable { max_k };
    }
    if let Some(seed) = args.seed {
        builder.seed = seed;
    }

    let (scenario, source) = if args.scenario == "synthetic" {
        spec.seed = builder.seed;
        spec.total_windows = builder.total_windows;
        spec.delta = builder.delta;
        (generate(&spec)?, ScenarioSource::Synthetic(spec))
    } else {
        let path = PathBuf::from(&args.scenario);
        let scenario = Scenario::load(&path)
            .with_context(|| format!("loading scenario {}", path.display()))?;
        // the file's window length wins over the config file, not over --delta
        if args.sim.delta.is_none() {
            builder.delta = scenario.delta;
        }
        builder.metric_space = scenario.space;
        let source = ScenarioSource::File {
            path: args.scenario.clone(),
            agents: scenario.agents.len(),
            requests: scenario.requests.len(),
        };
        (scenario, source)
    };
    let config = builder.build()?;
    Ok((config, scenario, source))
}

pub fn cmd_run(args: RunArgs) -> Result<()> {
    let (config, scenario, source) = resolve(&args)?;
    if let Some(path) = &args.save_scenario {
        scenario.save(path)?;
    }
    let metrics = run_simulation(&config, &scenario)?;
    let out = results_path(args.out.as_deref(), "run.json");
    write_json(
        &out,
        &RunDocument {
            command: "run",
            config: config.to_builder(),
            scenario: source,
            summary: Summary::from(&metrics),
            per_window: &metrics.windows,
        },
    )?;
    if let Some(path) = &args.trace {
        write_trace_csv(path, &metrics.windows)?;
    }
    print_summary(&format!("H({})", config.horizon()), &metrics);
    println!("results written to {}", out.display());
    Ok(())
}
