use serde::Serialize;

use crate::horizon::Candidate;
use crate::model::{AgentId, RequestId};

/// Requests handed to one agent at a window boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssignmentRecord {
    pub agent_id: AgentId,
    pub requests: Vec<RequestId>,
    /// Requests still in the agent's plan when these were appended.
    pub plan_len_before: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowMetrics {
    pub window: usize,
    /// Decision time in seconds.
    pub time: f64,
    pub new_requests: usize,
    pub carried_in: usize,
    pub tasks: usize,
    pub available_agents: usize,
    pub assigned: usize,
    pub horizon_k: usize,
    pub fitness: f64,
    pub generations: usize,
    pub distance: f64,
    pub idle: f64,
    pub stranded: usize,
    pub completed: usize,
    pub agent_distance: Vec<f64>,
    pub agent_idle: Vec<f64>,
    pub candidates: Vec<Candidate>,
    pub assignments: Vec<AssignmentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimMetrics {
    pub total_distance: f64,
    pub total_idle: f64,
    /// Idle time accrued after each agent's final assignment.
    pub tail_idle: f64,
    pub percent_assigned: f64,
    /// No request was presented, so `percent_assigned` is 100 by convention.
    pub vacuous: bool,
    /// Requests registered within the simulated windows.
    pub requests: usize,
    pub assigned: usize,
    pub carried_at_end: usize,
    /// Assigned requests abandoned when an agent ran out of travel budget.
    pub stranded: usize,
    pub completed: usize,
    /// Requests registered after the last window, never presented.
    pub beyond_horizon: usize,
    pub agent_distance: Vec<f64>,
    pub windows: Vec<WindowMetrics>,
}

impl SimMetrics {
    /// Mean over windows that had tasks of the chosen fitness.
    pub fn mean_fitness(&self) -> f64 {
        let scored: Vec<f64> = self
            .windows
            .iter()
            .filter(|w| w.tasks > 0)
            .map(|w| w.fitness)
            .collect();
        if scored.is_empty() {
            0.0
        } else {
            scored.iter().sum::<f64>() / scored.len() as f64
        }
    }
}
