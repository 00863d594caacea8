//! Receding-horizon solving of one window: a single fixed horizon H(k), or
//! the variable horizon H(v) that tries H(0)..H(max_k) and keeps the best.
//!
//! Each H(k) run computes its own `L_max`, so scores of different
//! horizons are normalized differently. They are compared as they are.

use rayon::prelude::*;
use serde::Serialize;

use crate::anticipation::availability_anticipation;
use crate::error::Result;
use crate::ga::{run_ga, GaProblem, WindowSolution};
use crate::geometry::CostVariant;
use crate::model::{Agent, Budget, GaParams, HorizonMode, Request, SimConfig};
use crate::rng;

/// Everything a window solve reads.
#[derive(Debug, Clone, Copy)]
pub struct WindowState<'a> {
    pub window_index: usize,
    /// Decision time in seconds.
    pub now: f64,
    /// Window start in seconds, used for age weighting.
    pub tau_time: f64,
    pub tasks: &'a [Request],
    pub agents: &'a [Agent],
    pub variant: CostVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub k: usize,
    pub fitness: f64,
    pub available_agents: usize,
    pub assigned: usize,
}

#[derive(Debug, Clone)]
pub struct WindowOutcome {
    /// Horizon index that produced `solution`.
    pub k: usize,
    pub fitness: f64,
    pub solution: WindowSolution,
    pub available_agents: usize,
    pub generations: usize,
    /// One entry per horizon tried, in increasing `k`.
    pub candidates: Vec<Candidate>,
}

impl WindowOutcome {
    fn empty(k: usize, state: &WindowState<'_>, alpha: f64, available_agents: usize) -> Self {
        let fitness = if state.tasks.is_empty() {
            0.0
        } else {
            1.0 - alpha
        };
        WindowOutcome {
            k,
            fitness,
            solution: WindowSolution::unassigned(state.tasks.iter().map(|t| t.id)),
            available_agents,
            generations: 0,
            candidates: vec![Candidate {
                k,
                fitness,
                available_agents,
                assigned: 0,
            }],
        }
    }
}

fn solve_fixed_with_budget(
    k: usize,
    state: &WindowState<'_>,
    config: &SimConfig,
    budget: Budget,
    seed: u64,
) -> Result<WindowOutcome> {
    let horizon = k as f64 * config.delta();
    let available = availability_anticipation(horizon, state.agents, state.now);
    if state.tasks.is_empty() || available.is_empty() {
        return Ok(WindowOutcome::empty(
            k,
            state,
            config.alpha(),
            available.len(),
        ));
    }
    let n_available = available.len();
    let problem = GaProblem::new(
        state.window_index,
        state.tau_time,
        state.tasks.to_vec(),
        available,
        config.capacity().capacity(state.tasks.len()),
        config.alpha(),
        state.variant,
        config.metric_space(),
    )?;
    let params = GaParams {
        budget,
        ..*config.ga()
    };
    let mut rng = rng::rng_for(seed, k as u64);
    let result = run_ga(&problem, &params, &mut rng);
    let assigned = result.solution.assigned_count();
    Ok(WindowOutcome {
        k,
        fitness: result.fitness,
        solution: result.solution,
        available_agents: n_available,
        generations: result.generations,
        candidates: vec![Candidate {
            k,
            fitness: result.fitness,
            available_agents: n_available,
            assigned,
        }],
    })
}

/// Solves the window with horizon `H(k) = k·δ`.
pub fn solve_window_fixed(
    k: usize,
    state: &WindowState<'_>,
    config: &SimConfig,
    seed: u64,
) -> Result<WindowOutcome> {
    solve_fixed_with_budget(k, state, config, config.ga().budget, seed)
}

/// Solves the window for every `k` in `0..=max_k` and keeps the lowest
/// fitness, the smallest `k` on ties. A wall-clock budget is shared evenly.
pub fn solve_window_variable(
    max_k: usize,
    state: &WindowState<'_>,
    config: &SimConfig,
    seed: u64,
) -> Result<WindowOutcome> {
    let budget = match config.ga().budget {
        Budget::WallClock(secs) => Budget::WallClock(secs / (max_k + 1) as f64),
        b => b,
    };
    let runs: Vec<WindowOutcome> = (0..=max_k)
        .into_par_iter()
        .map(|k| solve_fixed_with_budget(k, state, config, budget, seed))
        .collect::<Result<_>>()?;
    let candidates: Vec<Candidate> = runs.iter().flat_map(|r| r.candidates.clone()).collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.fitness < runs[best].fitness {
            best = i;
        }
    }
    let mut outcome = runs.into_iter().nth(best).expect("max_k + 1 runs");
    outcome.candidates = candidates;
    Ok(outcome)
}

pub fn solve_window(
    mode: HorizonMode,
    state: &WindowState<'_>,
    config: &SimConfig,
    seed: u64,
) -> Result<WindowOutcome> {
    match mode {
        HorizonMode::Fixed(k) => solve_window_fixed(k, state, config, seed),
        HorizonMode::Variable { max_k } => solve_window_variable(max_k, state, config, seed),
    }
}
