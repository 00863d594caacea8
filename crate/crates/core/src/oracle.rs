//! Exhaustive solver for tiny window problems, used as ground truth.
//!
//! Every way of giving each task to one agent or to nobody is enumerated,
//! subject to capacity, and each agent's tasks are tried in every order.
//! Costs are computed with [`geometry::path_length`] directly, independent
//! of the GA's tabulated legs.

use crate::anticipation::AvailableAgent;
use crate::error::{Error, Result};
use crate::ga::{AgentAssignment, GaProblem, WindowSolution};
use crate::geometry::{self, CostVariant};
use crate::model::{MetricSpace, Request};

pub const MAX_TASKS: usize = 8;
pub const MAX_AGENTS: usize = 3;

/// A window instance as the oracle sees it. Unlike [`GaProblem`], it may
/// hold no tasks.
#[derive(Debug, Clone)]
pub struct Instance {
    pub tasks: Vec<Request>,
    pub agents: Vec<AvailableAgent>,
    pub capacity: usize,
    pub alpha: f64,
    pub variant: CostVariant,
    pub space: MetricSpace,
}

impl From<&GaProblem> for Instance {
    fn from(p: &GaProblem) -> Self {
        Instance {
            tasks: p.tasks.clone(),
            agents: p.agents.clone(),
            capacity: p.capacity,
            alpha: p.alpha,
            variant: p.variant,
            space: p.space,
        }
    }
}

/// Scale applied to the distance term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Divide by the `L_max` of a GA run, making objectives comparable.
    LMax(f64),
    /// Raw meters.
    Raw,
}

impl Normalization {
    fn scale(&self) -> f64 {
        match *self {
            Normalization::LMax(l) => l,
            Normalization::Raw => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub objective: f64,
    pub total_distance: f64,
    pub assigned: usize,
    pub solution: WindowSolution,
}

/// Weighted objective for `assigned` of `n_tasks` tasks and `distance`
/// meters of travel.
pub fn objective(alpha: f64, distance: f64, scale: f64, assigned: usize, n_tasks: usize) -> f64 {
    if n_tasks == 0 {
        return alpha * distance / scale;
    }
    alpha * distance / scale + (1.0 - alpha) * (1.0 - assigned as f64 / n_tasks as f64)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Shortest visiting order of `subset` for one agent, by enumeration.
fn best_route(inst: &Instance, agent: usize, subset: &[usize]) -> Result<(f64, Vec<usize>)> {
    let mut best = (f64::INFINITY, Vec::new());
    let mut err = None;
    let mut items = subset.to_vec();
    permutations(&mut items, 0, &mut |order| {
        let reqs: Vec<Request> = order.iter().map(|&t| inst.tasks[t]).collect();
        match geometry::path_length(&inst.agents[agent].start, &reqs, inst.variant, inst.space) {
            Ok(len) if len < best.0 => best = (len, order.to_vec()),
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

pub fn brute_force(inst: &Instance, normalization: Normalization) -> Result<OracleSolution> {
    let n = inst.tasks.len();
    let m = inst.agents.len();
    if n > MAX_TASKS || m > MAX_AGENTS {
        return Err(Error::InstanceTooLarge {
            tasks: n,
            agents: m,
        });
    }
    let scale = normalization.scale();
    if n == 0 || m == 0 {
        return Ok(OracleSolution {
            objective: objective(inst.alpha, 0.0, scale, 0, n),
            total_distance: 0.0,
            assigned: 0,
            solution: WindowSolution::unassigned(inst.tasks.iter().map(|t| t.id)),
        });
    }

    // routes[a][mask]: best order of the tasks in `mask` for agent `a`
    let mut routes = Vec::with_capacity(m);
    for a in 0..m {
        let mut per_mask = Vec::with_capacity(1 << n);
        for mask in 0usize..(1 << n) {
            if mask.count_ones() as usize > inst.capacity {
                per_mask.push(None);
                continue;
            }
            let subset: Vec<usize> = (0..n).filter(|t| mask & (1 << t) != 0).collect();
            per_mask.push(Some(best_route(inst, a, &subset)?));
        }
        routes.push(per_mask);
    }

    // each task goes to agent 0..m or to nobody (m)
    let mut choice = vec![0usize; n];
    let mut best: Option<(f64, f64, usize, Vec<usize>)> = None;
    loop {
        let mut masks = vec![0usize; m];
        for (t, &c) in choice.iter().enumerate() {
            if c < m {
                masks[c] |= 1 << t;
            }
        }
        let mut feasible = true;
        let mut distance = 0.0;
        for (a, &mask) in masks.iter().enumerate() {
            match &routes[a][mask] {
                Some((len, _)) => distance += len,
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible {
            let assigned = choice.iter().filter(|&&c| c < m).count();
            let obj = objective(inst.alpha, distance, scale, assigned, n);
            if best.as_ref().is_none_or(|b| obj < b.0) {
                best = Some((obj, distance, assigned, masks));
            }
        }
        // odometer increment in base m + 1
        let mut i = 0;
        while i < n {
            choice[i] += 1;
            if choice[i] <= m {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }

    let (objective, total_distance, assigned, masks) =
        best.expect("leaving every task unassigned is always feasible");
    let mut used = vec![false; n];
    let mut assignments = Vec::new();
    for (a, &mask) in masks.iter().enumerate() {
        if mask == 0 {
            continue;
        }
        let (_, order) = routes[a][mask].as_ref().expect("feasible mask");
        for &t in order {
            used[t] = true;
        }
        assignments.push(AgentAssignment {
            agent_id: inst.agents[a].agent_id,
            requests: order.iter().map(|&t| inst.tasks[t].id).collect(),
        });
    }
    let unassigned = (0..n)
        .filter(|&t| !used[t])
        .map(|t| inst.tasks[t].id)
        .collect();
    Ok(OracleSolution {
        objective,
        total_distance,
        assigned,
        solution: WindowSolution {
            assignments,
            unassigned,
        },
    })
}
