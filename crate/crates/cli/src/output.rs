use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dispatch_core::model::SimConfigBuilder;
use dispatch_core::sim::{SimMetrics, WindowMetrics};
use serde::Serialize;

pub const RESULTS_DIR_VAR: &str = "DISPATCH_RESULTS_DIR";

/// Where a results file goes: the explicit path, or `name` inside the
/// results directory (`$DISPATCH_RESULTS_DIR`, default `results`).
pub fn results_path(explicit: Option<&Path>, name: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(RESULTS_DIR_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("results"))
            .join(name),
    }
}

/// Serializes `doc` and replaces the file at `path`.
pub fn write_json(path: &Path, doc: &impl Serialize) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Headline numbers of one simulation.
#[derive(Debug, Serialize)]
pub struct Summary {
    pub total_distance_m: f64,
    pub total_idle_s: f64,
    pub tail_idle_s: f64,
    pub percent_assigned: f64,
    pub vacuous: bool,
    pub requests: usize,
    pub assigned: usize,
    pub carried_at_end: usize,
    pub stranded: usize,
    pub completed: usize,
    pub beyond_horizon: usize,
    pub mean_fitness: f64,
}

impl From<&SimMetrics> for Summary {
    fn from(m: &SimMetrics) -> Self {
        Summary {
            total_distance_m: m.total_distance,
            total_idle_s: m.total_idle,
            tail_idle_s: m.tail_idle,
            percent_assigned: m.percent_assigned,
            vacuous: m.vacuous,
            requests: m.requests,
            assigned: m.assigned,
            carried_at_end: m.carried_at_end,
            stranded: m.stranded,
            completed: m.completed,
            beyond_horizon: m.beyond_horizon,
            mean_fitness: m.mean_fitness(),
        }
    }
}

/// Results document of a single simulation.
#[derive(Debug, Serialize)]
pub struct RunDocument<'a, S: Serialize> {
    pub command: &'static str,
    pub config: SimConfigBuilder,
    pub scenario: S,
    #[serde(flatten)]
    pub summary: Summary,
    pub per_window: &'a [WindowMetrics],
}

#[derive(Serialize)]
struct TraceRow {
    window: usize,
    time: f64,
    new_requests: usize,
    carried_in: usize,
    tasks: usize,
    available_agents: usize,
    assigned: usize,
    horizon_k: usize,
    fitness: f64,
    generations: usize,
    distance: f64,
    idle: f64,
    stranded: usize,
    completed: usize,
}

/// One CSV row per window.
pub fn write_trace_csv(path: &Path, windows: &[WindowMetrics]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for m in windows {
        w.serialize(TraceRow {
            window: m.window,
            time: m.time,
            new_requests: m.new_requests,
            carried_in: m.carried_in,
            tasks: m.tasks,
            available_agents: m.available_agents,
            assigned: m.assigned,
            horizon_k: m.horizon_k,
            fitness: m.fitness,
            generations: m.generations,
            distance: m.distance,
            idle: m.idle,
            stranded: m.stranded,
            completed: m.completed,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn print_summary(label: &str, m: &SimMetrics) {
    println!(
        "{label}: distance {:.2} m, idle {:.2} s (tail {:.2} s), assigned {:.2}% ({}/{}{})",
        m.total_distance,
        m.total_idle,
        m.tail_idle,
        m.percent_assigned,
        m.assigned,
        m.requests,
        if m.vacuous { ", no requests" } else { "" }
    );
}
