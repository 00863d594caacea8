//! Genetic algorithm for one window's assignment problem.
//!
//! A chromosome is a fixed-length slot array split into one segment per
//! available agent. The initial population places tasks with age-weighted
//! probabilities; each generation keeps the best 30% and refills with
//! one-point crossover children, some of which receive a swap or an
//! inversion mutation. Fitness trades normalized travel against the share
//! of tasks left unassigned.

mod chromosome;
mod operators;
mod problem;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

pub use chromosome::{AgentAssignment, Chromosome, WindowSolution};
pub use operators::{
    crossover, crossover_at, evolve_generation, init_population, invert_range, mutate_inversion,
    mutate_swap,
};
pub use problem::{boltzmann_weights, compute_l_max, fitness, GaProblem};

use crate::model::{Budget, GaParams};

/// Outcome of one GA run.
#[derive(Debug, Clone)]
pub struct GaResult {
    pub best: Chromosome,
    pub fitness: f64,
    pub solution: WindowSolution,
    /// Evaluated generations, the initial population included.
    pub generations: usize,
    pub l_max: f64,
}

// below this many slots per population, thread dispatch costs more than it saves
const PARALLEL_EVAL_THRESHOLD: usize = 64 * 1024;

/// Scores a whole population. Parallel evaluation does not touch the RNG,
/// so results do not depend on the thread count.
pub fn evaluate(population: &[Chromosome], problem: &GaProblem, l_max: f64) -> Vec<f64> {
    let work = population.len() * problem.chromosome_len();
    if work >= PARALLEL_EVAL_THRESHOLD {
        population
            .par_iter()
            .map(|c| fitness(c, problem, l_max))
            .collect()
    } else {
        population
            .iter()
            .map(|c| fitness(c, problem, l_max))
            .collect()
    }
}

fn argmin(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s < scores[best] {
            best = i;
        }
    }
    best
}

/// Runs the GA until the best score stops moving by more than `epsilon`
/// between consecutive generations, or the budget runs out.
pub fn run_ga<R: Rng + ?Sized>(problem: &GaProblem, params: &GaParams, rng: &mut R) -> GaResult {
    debug_assert!(params.validate().is_ok(), "invalid GA parameters");
    let started = Instant::now();
    let out_of_budget = |generations: usize| match params.budget {
        Budget::Generations(n) => generations >= n,
        Budget::WallClock(secs) => started.elapsed().as_secs_f64() >= secs,
    };

    let mut population = init_population(problem, params, rng);
    let l_max = compute_l_max(&population, problem);
    let mut scores = evaluate(&population, problem, l_max);
    let mut generations = 1;

    let i = argmin(&scores);
    let mut best = population[i].clone();
    let mut best_score = scores[i];
    let mut min_now = best_score;

    while !out_of_budget(generations) {
        population = evolve_generation(&population, &scores, params, rng);
        scores = evaluate(&population, problem, l_max);
        generations += 1;

        let min_prec = min_now;
        let i = argmin(&scores);
        min_now = scores[i];
        if min_now < best_score {
            best_score = min_now;
            best = population[i].clone();
        }
        if (min_now - min_prec).abs() <= params.epsilon {
            break;
        }
    }

    let solution = best.decode(problem);
    GaResult {
        best,
        fitness: best_score,
        solution,
        generations,
        l_max,
    }
}

#[cfg(test)]
mod tests;
