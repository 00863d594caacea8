use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use dispatch_core::model::{Budget, HorizonMode, SimConfigBuilder};
use dispatch_core::scenario::{generate, Scenario, SyntheticSpec};
use dispatch_core::sim::{run_simulation, SimMetrics};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{parse_horizon, parse_list, ConfigFile, SimFlags, SyntheticFlags};
use crate::output::{results_path, write_json};

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated alpha values.
    #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
    pub alphas: String,
    /// Comma-separated horizons; "v" is the variable horizon.
    #[arg(long, default_value = "0,1,2,3,4,5,v")]
    pub horizons: String,
    /// Largest k tried by the variable horizon.
    #[arg(long, default_value_t = 5)]
    pub max_k: usize,
    /// Seeds to average over, e.g. "0..10" or "1,2,3".
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    /// "synthetic" (one world per seed) or a scenario file shared by all seeds.
    #[arg(long, default_value = "synthetic")]
    pub scenario: String,
    #[command(flatten)]
    pub sim: SimFlags,
    #[command(flatten)]
    pub synthetic: SyntheticFlags,
    /// Results file (default: sweep.json in the results directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Cell {
    alpha: f64,
    horizon: HorizonMode,
    mean_total_distance_m: f64,
    mean_total_idle_s: f64,
    mean_tail_idle_s: f64,
    mean_percent_assigned: f64,
}

#[derive(Debug, Serialize)]
struct SweepDocument {
    command: &'static str,
    config: SimConfigBuilder,
    synthetic: Option<SyntheticSpec>,
    scenario_file: Option<String>,
    seeds: Vec<u64>,
    cells: Vec<Cell>,
}

fn mean(runs: &[SimMetrics], f: impl Fn(&SimMetrics) -> f64) -> f64 {
    runs.iter().map(f).sum::<f64>() / runs.len() as f64
}

pub fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let file = ConfigFile::load(args.sim.config.as_deref())?;
    let mut base = file.sim;
    let mut spec = file.synthetic;
    args.sim.apply(&mut base);
    args.synthetic.apply(&mut spec);
    if base.budget.is_none() {
        base.budget = Some(Budget::Generations(300));
    }
    let alphas: Vec<f64> = parse_list(&args.alphas)?;
    let horizons = args
        .horizons
        .split(',')
        .map(|h| parse_horizon(h.trim(), Some(args.max_k)))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<u64> = parse_list(&args.seeds)?;

    let shared = if args.scenario == "synthetic" {
        spec.total_windows = base.total_windows;
        spec.delta = base.delta;
        None
    } else {
        let path = PathBuf::from(&args.scenario);
        let s = Scenario::load(&path)
            .with_context(|| format!("loading scenario {}", path.display()))?;
        if args.sim.delta.is_none() {
            base.delta = s.delta;
        }
        base.metric_space = s.space;
        Some(s)
    };
    base.build()?;

    let worlds: Vec<Scenario> = match &shared {
        Some(s) => vec![s.clone()],
        None => seeds
            .iter()
            .map(|&seed| {
                generate(&SyntheticSpec {
                    seed,
                    ..spec.clone()
                })
            })
            .collect::<dispatch_core::Result<_>>()?,
    };
    let (n_h, n_s) = (horizons.len(), seeds.len());
    let jobs: Vec<(usize, usize, usize)> = (0..alphas.len())
        .flat_map(|a| (0..n_h).flat_map(move |h| (0..n_s).map(move |s| (a, h, s))))
        .collect();
    let runs: Vec<SimMetrics> = jobs
        .par_iter()
        .map(|&(a, h, s)| {
            let config = SimConfigBuilder {
                alpha: alphas[a],
                horizon: horizons[h],
                seed: seeds[s],
                ..base.clone()
            }
            .build()?;
            let world = if shared.is_some() {
                &worlds[0]
            } else {
                &worlds[s]
            };
            run_simulation(&config, world)
        })
        .collect::<dispatch_core::Result<_>>()?;

    let mut cells = Vec::new();
    for (a, &alpha) in alphas.iter().enumerate() {
        for (h, &horizon) in horizons.iter().enumerate() {
            let start = (a * horizons.len() + h) * seeds.len();
            let group = &runs[start..start + seeds.len()];
            cells.push(Cell {
                alpha,
                horizon,
                mean_total_distance_m: mean(group, |m| m.total_distance),
                mean_total_idle_s: mean(group, |m| m.total_idle),
                mean_tail_idle_s: mean(group, |m| m.tail_idle),
                mean_percent_assigned: mean(group, |m| m.percent_assigned),
            });
        }
    }
    print_table(&alphas, &horizons, &cells, seeds.len());
    let out = results_path(args.out.as_deref(), "sweep.json");
    write_json(
        &out,
        &SweepDocument {
            command: "sweep",
            config: base,
            synthetic: shared.is_none().then_some(spec),
            scenario_file: shared.is_some().then(|| args.scenario.clone()),
            seeds,
            cells,
        },
    )?;
    println!("results written to {}", out.display());
    Ok(())
}

/// Metric blocks of one row per alpha, one column per horizon.
fn print_table(alphas: &[f64], horizons: &[HorizonMode], cells: &[Cell], n_seeds: usize) {
    let label = |h: &HorizonMode| match h {
        HorizonMode::Fixed(k) => format!("H({k})"),
        HorizonMode::Variable { .. } => "H(v)".to_string(),
    };
    type Metric = (&'static str, fn(&Cell) -> f64);
    let metrics: [Metric; 3] = [
        ("distance (m)", |c| c.mean_total_distance_m),
        ("idle (s)", |c| c.mean_total_idle_s),
        ("assigned (%)", |c| c.mean_percent_assigned),
    ];
    println!("means over {n_seeds} seed(s)");
    print!("{:<14}{:>7}", "metric", "alpha");
    for h in horizons {
        print!("{:>11}", label(h));
    }
    println!();
    for (name, value) in metrics {
        for (a, alpha) in alphas.iter().enumerate() {
            let first = if a == 0 { name } else { "" };
            print!("{first:<14}{alpha:>7.2}");
            for h in 0..horizons.len() {
                print!("{:>11.2}", value(&cells[a * horizons.len() + h]));
            }
            println!();
        }
    }
}
