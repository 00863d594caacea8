use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::Args;
use dispatch_core::model::{HorizonMode, MetricSpace, SimConfigBuilder};
use dispatch_core::sim::{run_simulation, WindowMetrics};
use dispatch_core::taxi::{self, BoundingBox, DropStats, TripFilter};
use serde::Serialize;

use crate::config::{parse_horizon, ConfigFile, SimFlags};
use crate::output::{print_summary, results_path, write_json, Summary};

#[derive(Debug, Args)]
pub struct TaxiArgs {
    /// Trip records in the 2013 trip_data CSV layout.
    #[arg(long)]
    pub csv: PathBuf,
    /// Night to simulate (YYYY-MM-DD); defaults to the first night in the data.
    #[arg(long)]
    pub night: Option<NaiveDate>,
    /// Fleet size.
    #[arg(long, default_value_t = 1000)]
    pub taxis: usize,
    /// Comma-separated horizons; "v" is the variable horizon.
    #[arg(long, default_value = "0,1,2,3,4,5,v")]
    pub horizons: String,
    /// Largest k tried by the variable horizon.
    #[arg(long, default_value_t = 5)]
    pub max_k: usize,
    /// First pickup date kept.
    #[arg(long, default_value = "2013-01-07")]
    pub first_date: NaiveDate,
    /// Last pickup date kept.
    #[arg(long, default_value = "2013-01-09")]
    pub last_date: NaiveDate,
    /// Seed for the fleet placement and the GA.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub sim: SimFlags,
    /// Results file (default: taxi.json in the results directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct HorizonResult {
    horizon: HorizonMode,
    #[serde(flatten)]
    summary: Summary,
    per_window: Vec<WindowMetrics>,
}

#[derive(Debug, Serialize)]
struct TaxiDocument {
    command: &'static str,
    config: SimConfigBuilder,
    csv: String,
    night: NaiveDate,
    taxis: usize,
    drops: DropStats,
    night_requests: usize,
    /// Present when both H(0) and H(5) ran.
    idle_h0_at_least_h5: Option<bool>,
    results: Vec<HorizonResult>,
}

pub fn cmd_taxi(args: TaxiArgs) -> Result<()> {
    let file = ConfigFile::load(args.sim.config.as_deref())?;
    let mut base = file.sim;
    base.delta = taxi::TAXI_DELTA;
    base.total_windows = taxi::TAXI_WINDOWS;
    args.sim.apply(&mut base);
    base.metric_space = MetricSpace::Geographic;
    if let Some(seed) = args.seed {
        base.seed = seed;
    }
    let horizons = args
        .horizons
        .split(',')
        .map(|h| parse_horizon(h.trim(), Some(args.max_k)))
        .collect::<Result<Vec<_>>>()?;

    let filter = TripFilter {
        first_date: args.first_date,
        last_date: args.last_date,
        ..TripFilter::default()
    };
    let ingested = taxi::ingest(&args.csv, &filter, &file.columns)
        .with_context(|| format!("ingesting {}", args.csv.display()))?;
    let d = ingested.drops;
    println!(
        "{} rows: {} retained, dropped {} malformed, {} date, {} hour, {} bbox",
        d.total, d.retained, d.malformed, d.date, d.hour, d.bbox
    );
    let night = match args.night {
        Some(n) => n,
        None => match ingested.nights.keys().next() {
            Some(n) => *n,
            None => bail!("no trips left after filtering"),
        },
    };
    let Some(requests) = ingested.nights.get(&night) else {
        bail!("no trips on the night of {night}");
    };
    let fleet = taxi::make_taxi_fleet(
        args.taxis,
        &BoundingBox::NEW_YORK,
        taxi::TAXI_VELOCITY,
        base.seed,
    )?;
    let scenario = taxi::night_scenario(requests.clone(), fleet)?;
    println!(
        "night {night}: {} requests, {} taxis",
        requests.len(),
        args.taxis
    );

    let mut results = Vec::new();
    for horizon in horizons {
        let config = SimConfigBuilder {
            horizon,
            ..base.clone()
        }
        .build()?;
        let m = run_simulation(&config, &scenario)?;
        print_summary(&format!("H({horizon})"), &m);
        results.push(HorizonResult {
            horizon,
            summary: Summary::from(&m),
            per_window: m.windows,
        });
    }
    let idle_of = |k| {
        results
            .iter()
            .find(|r| r.horizon == HorizonMode::Fixed(k))
            .map(|r| r.summary.total_idle_s)
    };
    let trend = idle_of(0).zip(idle_of(5)).map(|(h0, h5)| h0 >= h5);
    if let Some(ok) = trend {
        println!("idle(H0) >= idle(H5): {}", if ok { "yes" } else { "no" });
    }
    let out = results_path(args.out.as_deref(), "taxi.json");
    write_json(
        &out,
        &TaxiDocument {
            command: "taxi",
            config: base,
            csv: args.csv.display().to_string(),
            night,
            taxis: args.taxis,
            drops: d,
            night_requests: requests.len(),
            idle_h0_at_least_h5: trend,
            results,
        },
    )?;
    println!("results written to {}", out.display());
    Ok(())
}
