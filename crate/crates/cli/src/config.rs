//! Configuration file loading and command-line overrides.
//!
//! A configuration file is TOML with two optional tables:
//!
//! ```toml
//! [sim]
//! alpha = 0.75
//! horizon = "variable:5"
//! budget = "generations:300"
//!
//! [synthetic]
//! n_agents = 20
//! tasks_per_window = 10
//!
//! [columns]
//! pickup_datetime = "tpep_pickup_datetime"
//! ```

use std::path::Path;

use anyhow::{Context, Result};
use clap::Args;
use dispatch_core::model::{Budget, CapacityRule, HorizonMode, SimConfigBuilder};
use dispatch_core::scenario::SyntheticSpec;
use dispatch_core::taxi::ColumnMap;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub sim: SimConfigBuilder,
    pub synthetic: SyntheticSpec,
    /// Header names of taxi trip files.
    pub columns: ColumnMap,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flags shared by every command that runs simulations.
#[derive(Debug, Clone, Default, Args)]
pub struct SimFlags {
    /// TOML configuration file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Weight of travel distance against unassigned requests, in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Window length in seconds.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Number of windows to simulate.
    #[arg(long)]
    pub windows: Option<usize>,
    /// Per-agent capacity: a fraction of the window's tasks ("1/3"), or "unbounded".
    #[arg(long)]
    pub capacity: Option<CapacityRule>,
    /// GA budget: "generations:N" or "wallclock:SECONDS".
    #[arg(long)]
    pub budget: Option<Budget>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub p_muta: Option<f64>,
    #[arg(long)]
    pub p_swap: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

impl SimFlags {
    pub fn apply(&self, b: &mut SimConfigBuilder) {
        if let Some(v) = self.alpha {
            b.alpha = v;
        }
        if let Some(v) = self.delta {
            b.delta = v;
        }
        if let Some(v) = self.windows {
            b.total_windows = v;
        }
        if let Some(v) = self.capacity {
            b.capacity = v;
        }
        if let Some(v) = self.budget {
            b.budget = Some(v);
        }
        if let Some(v) = self.population {
            b.population_size = v;
        }
        if let Some(v) = self.p_muta {
            b.p_muta = v;
        }
        if let Some(v) = self.p_swap {
            b.p_swap = v;
        }
        if let Some(v) = self.epsilon {
            b.epsilon = v;
        }
    }
}

/// Flags describing the synthetic grid world.
#[derive(Debug, Clone, Default, Args)]
pub struct SyntheticFlags {
    /// Fleet size of the synthetic world.
    #[arg(long)]
    pub agents: Option<usize>,
    /// New requests per window in the synthetic world.
    #[arg(long)]
    pub tasks_per_window: Option<usize>,
    /// Side of the square world in meters.
    #[arg(long)]
    pub world_size: Option<f64>,
    /// Agent speed in m/s.
    #[arg(long)]
    pub velocity: Option<f64>,
    /// Per-agent travel cap in meters, or "inf".
    #[arg(long, value_parser = parse_travel_budget)]
    pub travel_budget: Option<Option<f64>>,
}

impl SyntheticFlags {
    pub fn apply(&self, spec: &mut SyntheticSpec) {
        if let Some(v) = self.agents {
            spec.n_agents = v;
        }
        if let Some(v) = self.tasks_per_window {
            spec.tasks_per_window = v;
        }
        if let Some(v) = self.world_size {
            spec.world_width = v;
            spec.world_height = v;
        }
        if let Some(v) = self.velocity {
            spec.velocity = v;
        }
        if let Some(v) = self.travel_budget {
            spec.travel_budget = v;
        }
    }
}

fn parse_travel_budget(s: &str) -> Result<Option<f64>, String> {
    match s {
        "inf" | "unbounded" | "none" => Ok(None),
        _ => s
            .parse::<f64>()
            .map(Some)
            .map_err(|e| format!("expected meters or \"inf\": {e}")),
    }
}

/// Parses one horizon, accepting `v` / `variable` with the given `max_k`.
pub fn parse_horizon(s: &str, max_k: Option<usize>) -> Result<HorizonMode> {
    let mode: HorizonMode = s
        .parse()
        .map_err(|e| anyhow::anyhow!("bad horizon {s:?}: {e}"))?;
    Ok(match (mode, max_k) {
        (HorizonMode::Variable { .. }, Some(max_k)) if !s.contains(':') => {
            HorizonMode::Variable { max_k }
        }
        _ => mode,
    })
}

/// Comma-separated list, with `a..b` ranges allowed for integers.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo
                    .trim()
                    .parse()
                    .with_context(|| format!("bad range {part:?}"))?;
                let hi: i64 = hi
                    .trim()
                    .parse()
                    .with_context(|| format!("bad range {part:?}"))?;
                for v in lo..hi {
                    out.push(
                        v.to_string()
                            .parse()
                            .map_err(|e| anyhow::anyhow!("bad value {v}: {e}"))?,
                    );
                }
            }
            None => out.push(
                part.parse()
                    .map_err(|e| anyhow::anyhow!("bad value {part:?}: {e}"))?,
            ),
        }
    }
    anyhow::ensure!(!out.is_empty(), "empty list {s:?}");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list::<u64>("0..3,7").unwrap(), vec![0, 1, 2, 7]);
        assert_eq!(parse_list::<f64>("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_list::<u64>("").is_err());
        assert!(parse_list::<u64>("a").is_err());
    }

    #[test]
    fn horizons() {
        assert_eq!(parse_horizon("3", None).unwrap(), HorizonMode::Fixed(3));
        assert_eq!(
            parse_horizon("v", Some(2)).unwrap(),
            HorizonMode::Variable { max_k: 2 }
        );
        assert_eq!(
            parse_horizon("variable:4", Some(2)).unwrap(),
            HorizonMode::Variable { max_k: 4 }
        );
        assert!(parse_horizon("soon", None).is_err());
    }

    #[test]
    fn config_file_tables() {
        let f: ConfigFile = toml::from_str(
            "[sim]\nalpha = 0.5\nhorizon = \"variable:3\"\nbudget = \"generations:20\"\n[synthetic]\nn_agents = 4\n",
        )
        .unwrap();
        assert_eq!(f.sim.alpha, 0.5);
        assert_eq!(f.sim.horizon, HorizonMode::Variable { max_k: 3 });
        assert_eq!(f.sim.budget, Some(Budget::Generations(20)));
        assert_eq!(f.synthetic.n_agents, 4);
        assert!(toml::from_str::<ConfigFile>("[sim]\nalpah = 1\n").is_err());
    }
}
