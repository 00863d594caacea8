//! Population initialization, crossover and the two mutations.

use rand::Rng;

use super::{boltzmann_weights, Chromosome, GaProblem};
use crate::model::GaParams;

/// Builds one chromosome: tasks are drawn without replacement with
/// age-weighted probabilities and dropped into random empty slots until
/// either runs out.
fn random_chromosome<R: Rng + ?Sized>(
    problem: &GaProblem,
    weights: &[f64],
    rng: &mut R,
) -> Chromosome {
    let mut chromosome = Chromosome::empty(problem.chromosome_len());
    let mut remaining: Vec<usize> = (0..problem.n_tasks()).collect();
    let mut remaining_w: Vec<f64> = weights.to_vec();
    let mut empty: Vec<usize> = (0..chromosome.len()).collect();
    while !remaining.is_empty() && !empty.is_empty() {
        let total: f64 = remaining_w.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut pick = remaining.len() - 1;
        for (i, w) in remaining_w.iter().enumerate() {
            if u < *w {
                pick = i;
                break;
            }
            u -= w;
        }
        let task = remaining.swap_remove(pick);
        remaining_w.swap_remove(pick);
        let slot = empty.swap_remove(rng.gen_range(0..empty.len()));
        chromosome.slots_mut()[slot] = Some(task as u32);
    }
    chromosome
}

pub fn init_population<R: Rng + ?Sized>(
    problem: &GaProblem,
    params: &GaParams,
    rng: &mut R,
) -> Vec<Chromosome> {
    let weights = boltzmann_weights(&problem.tasks, problem.tau_time);
    (0..params.population_size)
        .map(|_| random_chromosome(problem, &weights, rng))
        .collect()
}

/// One-point crossover at `cut`: slots before the cut come from `parent1`,
/// the rest are filled left to right with `parent2`'s genes in order,
/// skipping genes the child already has.
pub fn crossover_at(parent1: &Chromosome, parent2: &Chromosome, cut: usize) -> Chromosome {
    assert_eq!(
        parent1.len(),
        parent2.len(),
        "parents must have equal length"
    );
    let len = parent1.len();
    let cut = cut.min(len);
    let bound = parent1
        .genes()
        .chain(parent2.genes())
        .max()
        .map_or(0, |g| g as usize + 1);
    let mut present = vec![false; bound];
    let mut slots = vec![None; len];
    for (i, g) in parent1.slots()[..cut].iter().enumerate() {
        slots[i] = *g;
        if let Some(g) = *g {
            present[g as usize] = true;
        }
    }
    let mut pos = cut;
    for g in parent2.genes() {
        if pos == len {
            break;
        }
        if !present[g as usize] {
            present[g as usize] = true;
            slots[pos] = Some(g);
            pos += 1;
        }
    }
    Chromosome::from_slots(slots)
}

pub fn crossover<R: Rng + ?Sized>(
    parent1: &Chromosome,
    parent2: &Chromosome,
    rng: &mut R,
) -> Chromosome {
    let cut = rng.gen_range(0..=parent1.len());
    crossover_at(parent1, parent2, cut)
}

/// Exchanges two distinct random slots.
pub fn mutate_swap<R: Rng + ?Sized>(chromosome: &mut Chromosome, rng: &mut R) {
    let n = chromosome.len();
    if n < 2 {
        return;
    }
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    chromosome.slots_mut().swap(i, j);
}

/// Reverses the slots between two random indices, inclusive.
pub fn mutate_inversion<R: Rng + ?Sized>(chromosome: &mut Chromosome, rng: &mut R) {
    let n = chromosome.len();
    if n < 2 {
        return;
    }
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    invert_range(chromosome, i.min(j), i.max(j));
}

pub fn invert_range(chromosome: &mut Chromosome, lo: usize, hi: usize) {
    chromosome.slots_mut()[lo..=hi].reverse();
}

/// Keeps the best 30% (ties to the lower index) and refills the
/// population with mutated children of random elite pairs.
///
/// A single uniform draw `v` gates both mutations: swap when
/// `v < p_muta && v < p_swap`, inversion when `v < p_muta && v >= p_swap`.
pub fn evolve_generation<R: Rng + ?Sized>(
    population: &[Chromosome],
    scores: &[f64],
    params: &GaParams,
    rng: &mut R,
) -> Vec<Chromosome> {
    assert_eq!(population.len(), scores.len());
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let n_elite = params.elite_count().min(population.len()).max(1);
    let elite: Vec<&Chromosome> = order[..n_elite].iter().map(|&i| &population[i]).collect();

    let mut next: Vec<Chromosome> = elite.iter().map(|c| (*c).clone()).collect();
    while next.len() < params.population_size {
        let p1 = elite[rng.gen_range(0..n_elite)];
        let p2 = elite[rng.gen_range(0..n_elite)];
        let mut child = crossover(p1, p2, rng);
        let v: f64 = rng.gen();
        if v < params.p_muta && v < params.p_swap {
            mutate_swap(&mut child, rng);
        }
        if v < params.p_muta && v >= params.p_swap {
            mutate_inversion(&mut child, rng);
        }
        next.push(child);
    }
    next
}
