//! The online loop: at the end of every window, batch the window's
//! requests with those carried over, solve the assignment, extend the
//! plans of the chosen agents, then let the fleet move until the next
//! boundary.
//!
//! Window `τ` covers `[τδ, (τ+1)δ)` and is solved at `(τ+1)δ`. Agents then
//! move for one window length, so a run of `T` windows simulates the
//! interval `[δ, (T+1)δ]`. GA compute takes no simulated time.

mod buffer;
mod metrics;

use std::collections::{HashMap, HashSet};

pub use buffer::RequestBuffer;
pub use metrics::{AssignmentRecord, SimMetrics, WindowMetrics};

use crate::anticipation::walk;
use crate::error::{Error, Result};
use crate::ga::WindowSolution;
use crate::geometry::CostVariant;
use crate::horizon::{solve_window, WindowState};
use crate::model::{Agent, Request, RequestId, SimConfig};
use crate::rng;
use crate::scenario::Scenario;

/// Appends each assignment to its agent's plan and carries every window
/// task that was not assigned.
pub fn commit_solution(
    solution: &WindowSolution,
    tasks: &[Request],
    agents: &mut [Agent],
    capacity: usize,
    variant: CostVariant,
    now: f64,
    buffer: &mut RequestBuffer,
) -> Result<Vec<AssignmentRecord>> {
    let by_id: HashMap<RequestId, &Request> = tasks.iter().map(|t| (t.id, t)).collect();
    let mut taken = HashSet::new();
    let mut batches = Vec::with_capacity(solution.assignments.len());
    for a in &solution.assignments {
        if a.requests.len() > capacity {
            return Err(Error::CapacityExceeded {
                agent: a.agent_id,
                got: a.requests.len(),
                capacity,
            });
        }
        if a.agent_id.0 >= agents.len() {
            return Err(Error::UnknownAgent(a.agent_id));
        }
        let mut batch = Vec::with_capacity(a.requests.len());
        for id in &a.requests {
            let r = by_id.get(id).ok_or(Error::UnknownRequest(*id))?;
            if !taken.insert(*id) {
                return Err(Error::DuplicateRequest {
                    agent: a.agent_id,
                    request: *id,
                });
            }
            batch.push(**r);
        }
        batches.push((a.agent_id, batch));
    }

    let mut records = Vec::with_capacity(batches.len());
    for (agent_id, batch) in batches {
        if batch.is_empty() {
            continue;
        }
        let agent = &mut agents[agent_id.0];
        let plan_len_before = agent.plan().len();
        agent.append_requests(&batch, variant, now)?;
        records.push(AssignmentRecord {
            agent_id,
            requests: batch.iter().map(|r| r.id).collect(),
            plan_len_before,
        });
    }
    buffer.carry(tasks.iter().filter(|t| !taken.contains(&t.id)).copied());
    Ok(records)
}

/// What happened to the fleet during one step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepReport {
    pub distance: Vec<f64>,
    pub idle: Vec<f64>,
    pub stranded: Vec<RequestId>,
    pub completed: usize,
}

/// Moves every agent along its plan from `from` to `to`.
///
/// Idle time is the part of the step an agent spends with nothing left to
/// do. An agent that runs out of travel budget stops where it is, drops
/// the rest of its plan and is out of service (not idle) from then on.
pub fn advance_time(agents: &mut [Agent], from: f64, to: f64) -> StepReport {
    let span = (to - from).max(0.0);
    let mut report = StepReport {
        distance: vec![0.0; agents.len()],
        idle: vec![0.0; agents.len()],
        ..Default::default()
    };
    for (i, agent) in agents.iter_mut().enumerate() {
        if agent.budget_exhausted() {
            continue;
        }
        if !agent.has_plan() {
            report.idle[i] = span;
            continue;
        }
        let v = agent.velocity();
        // plans of idle agents are issued at `from`; busy ones were re-anchored there
        let start = agent.plan_issued_at().max(from);
        let reach = v * (to - start);
        let allowed = reach.min(agent.remaining_budget());
        let w = walk(agent, allowed);
        let n_waypoints = agent.waypoints().len();
        report.completed += agent
            .waypoints()
            .take(w.reached)
            .filter(|p| p.completes)
            .count();
        agent.rebase(to, w.position, w.reached, w.covered);
        report.distance[i] = w.covered;
        if w.reached == n_waypoints {
            if !agent.budget_exhausted() {
                report.idle[i] = (to - (start + w.covered / v)).max(0.0) + (start - from);
            }
        } else if allowed < reach || agent.budget_exhausted() {
            report.stranded.extend(agent.halt());
        }
    }
    report
}

pub fn run_simulation(config: &SimConfig, scenario: &Scenario) -> Result<SimMetrics> {
    if scenario.space != config.metric_space() {
        return Err(Error::MixedMetricSpace {
            expected: config.metric_space(),
        });
    }
    let delta = config.delta();
    let n_agents = scenario.agents.len();
    let mut agents = scenario.agents.clone();
    let mut buffer = RequestBuffer::new(scenario.requests.clone(), delta);
    let mut since_assignment = vec![0.0; n_agents];
    let mut windows = Vec::with_capacity(config.total_windows());
    let mut presented = 0;
    let mut assigned = 0;
    let mut stranded = 0;
    let mut completed = 0;

    for tau in 0..config.total_windows() {
        let now = (tau + 1) as f64 * delta;
        let (tasks, new) = buffer.get_tasks(tau);
        presented += new;
        let state = WindowState {
            window_index: tau,
            now,
            tau_time: tau as f64 * delta,
            tasks: &tasks,
            agents: &agents,
            variant: scenario.variant,
        };
        let outcome = solve_window(
            config.horizon(),
            &state,
            config,
            rng::derive(config.seed(), tau as u64),
        )?;
        let capacity = config.capacity().capacity(tasks.len());
        let records = commit_solution(
            &outcome.solution,
            &tasks,
            &mut agents,
            capacity,
            scenario.variant,
            now,
            &mut buffer,
        )?;
        for r in &records {
            since_assignment[r.agent_id.0] = 0.0;
        }
        let window_assigned: usize = records.iter().map(|r| r.requests.len()).sum();
        assigned += window_assigned;

        let step = advance_time(&mut agents, now, now + delta);
        for (acc, idle) in since_assignment.iter_mut().zip(&step.idle) {
            *acc += idle;
        }
        stranded += step.stranded.len();
        completed += step.completed;
        windows.push(WindowMetrics {
            window: tau,
            time: now,
            new_requests: new,
            carried_in: tasks.len() - new,
            tasks: tasks.len(),
            available_agents: outcome.available_agents,
            assigned: window_assigned,
            horizon_k: outcome.k,
            fitness: outcome.fitness,
            generations: outcome.generations,
            distance: step.distance.iter().sum(),
            idle: step.idle.iter().sum(),
            stranded: step.stranded.len(),
            completed: step.completed,
            agent_distance: step.distance,
            agent_idle: step.idle,
            candidates: outcome.candidates,
            assignments: records,
        });
    }

    let vacuous = presented == 0;
    Ok(SimMetrics {
        total_distance: windows.iter().map(|w| w.distance).sum(),
        total_idle: windows.iter().map(|w| w.idle).sum(),
        tail_idle: since_assignment.iter().sum(),
        percent_assigned: if vacuous {
            100.0
        } else {
            100.0 * assigned as f64 / presented as f64
        },
        vacuous,
        requests: presented,
        assigned,
        carried_at_end: buffer.carried().len(),
        stranded,
        completed,
        beyond_horizon: buffer.pending(),
        agent_distance: agents.iter().map(|a| a.distance_traveled()).collect(),
        windows,
    })
}
