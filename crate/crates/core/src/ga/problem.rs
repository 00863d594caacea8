use crate::anticipation::AvailableAgent;
use crate::error::{Error, Result};
use crate::geometry::{self, CostVariant};
use crate::model::{MetricSpace, Request};

use super::Chromosome;

/// One window's assignment problem: the tasks of `R_τ` and the agents
/// anticipated to be available.
///
/// Leg lengths are tabulated once at construction, so fitness evaluation
/// is pure table lookup.
#[derive(Debug, Clone)]
pub struct GaProblem {
    pub window_index: usize,
    /// Start of the window in seconds; drives the age weighting.
    pub tau_time: f64,
    pub tasks: Vec<Request>,
    pub agents: Vec<AvailableAgent>,
    pub capacity: usize,
    pub alpha: f64,
    pub variant: CostVariant,
    pub space: MetricSpace,
    /// `agents x tasks`: agent start to task pickup.
    start_leg: Vec<f64>,
    /// Per task: pickup to dropoff (zero for reach-only).
    service_leg: Vec<f64>,
    /// `tasks x tasks`: end of task i to pickup of task j.
    link_leg: Vec<f64>,
}

impl GaProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        window_index: usize,
        tau_time: f64,
        tasks: Vec<Request>,
        agents: Vec<AvailableAgent>,
        capacity: usize,
        alpha: f64,
        variant: CostVariant,
        space: MetricSpace,
    ) -> Result<Self> {
        if tasks.is_empty() || agents.is_empty() {
            return Err(Error::InvalidConfig(
                "a window problem needs at least one task and one agent".into(),
            ));
        }
        if capacity == 0 {
            return Err(Error::InvalidConfig("capacity must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidConfig(format!(
                "alpha {alpha} outside [0, 1]"
            )));
        }
        for a in &agents {
            space.validate(&a.start)?;
        }
        for t in &tasks {
            space.validate(&t.pickup)?;
            match (variant, t.dropoff) {
                (CostVariant::PickupDropoff, None) => return Err(Error::MissingDropoff(t.id)),
                (_, Some(d)) => space.validate(&d)?,
                _ => {}
            }
        }
        let end = |t: &Request| match variant {
            CostVariant::ReachOnly => t.pickup,
            CostVariant::PickupDropoff => t.end_location(),
        };
        let start_leg = agents
            .iter()
            .flat_map(|a| {
                tasks
                    .iter()
                    .map(move |t| geometry::leg(&a.start, &t.pickup))
            })
            .collect();
        let service_leg = tasks
            .iter()
            .map(|t| geometry::leg(&t.pickup, &end(t)))
            .collect();
        let link_leg = tasks
            .iter()
            .flat_map(|from| {
                let e = end(from);
                tasks.iter().map(move |to| geometry::leg(&e, &to.pickup))
            })
            .collect();
        Ok(GaProblem {
            window_index,
            tau_time,
            tasks,
            agents,
            capacity,
            alpha,
            variant,
            space,
            start_leg,
            service_leg,
            link_leg,
        })
    }

    pub fn n_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    /// Slots per chromosome.
    pub fn chromosome_len(&self) -> usize {
        self.agents.len() * self.capacity
    }

    /// Travel of agent `agent` serving task indices `order`, in order.
    pub fn route_length(&self, agent: usize, order: impl IntoIterator<Item = usize>) -> f64 {
        let n = self.tasks.len();
        let mut prev: Option<usize> = None;
        let mut total = 0.0;
        for t in order {
            total += match prev {
                None => self.start_leg[agent * n + t],
                Some(p) => self.link_leg[p * n + t],
            };
            total += self.service_leg[t];
            prev = Some(t);
        }
        total
    }

    /// Sum of the per-agent route lengths encoded by `chromosome`.
    pub fn total_distance(&self, chromosome: &Chromosome) -> f64 {
        chromosome
            .slots()
            .chunks(self.capacity)
            .enumerate()
            .map(|(a, seg)| self.route_length(a, seg.iter().flatten().map(|&g| g as usize)))
            .sum()
    }
}

/// Selection probability of each task, favouring older requests.
///
/// `p_i ∝ exp(-t_i / tau_time)`, uniform when `tau_time` is zero.
pub fn boltzmann_weights(tasks: &[Request], tau_time: f64) -> Vec<f64> {
    let n = tasks.len();
    if n == 0 {
        return Vec::new();
    }
    if tau_time <= 0.0 {
        return vec![1.0 / n as f64; n];
    }
    // shifting by the earliest time cancels in the normalization and keeps
    // the exponentials away from underflow
    let t0 = tasks
        .iter()
        .map(|t| t.registered_at)
        .fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = tasks
        .iter()
        .map(|t| (-(t.registered_at - t0) / tau_time).exp())
        .collect();
    let q: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / q).collect()
}

/// Weighted score to minimize: normalized travel plus the unassigned share.
pub fn fitness(chromosome: &Chromosome, problem: &GaProblem, l_max: f64) -> f64 {
    let distance = problem.total_distance(chromosome);
    let assigned = chromosome.assigned_count() as f64;
    let n = problem.n_tasks() as f64;
    problem.alpha * distance / l_max + (1.0 - problem.alpha) * (1.0 - assigned / n)
}

/// Worst total distance in the first generation; 1 when every chromosome
/// travels nowhere.
pub fn compute_l_max(population: &[Chromosome], problem: &GaProblem) -> f64 {
    let worst = population
        .iter()
        .map(|c| problem.total_distance(c))
        .fold(0.0, f64::max);
    if worst > 0.0 {
        worst
    } else {
        1.0
    }
}
