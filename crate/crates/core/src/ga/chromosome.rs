use serde::Serialize;

use super::GaProblem;
use crate::model::{AgentId, RequestId};

/// Flat slot array: agent `a` owns slots `a*capacity .. (a+1)*capacity`
/// and visits its tasks left to right. Each slot holds the position of a
/// task in the window's task list, or `None` for an empty slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    slots: Vec<Option<u32>>,
}

impl Chromosome {
    pub fn empty(len: usize) -> Self {
        Chromosome {
            slots: vec![None; len],
        }
    }

    pub fn from_slots(slots: Vec<Option<u32>>) -> Self {
        Chromosome { slots }
    }

    pub fn slots(&self) -> &[Option<u32>] {
        &self.slots
    }

    pub fn slots_mut(&mut self) -> &mut [Option<u32>] {
        &mut self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Non-empty genes in slot order.
    pub fn genes(&self) -> impl Iterator<Item = u32> + '_ {
        self.slots.iter().flatten().copied()
    }

    pub fn assigned_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Checks uniqueness, membership in the task list and per-agent
    /// capacity. Returns a description of the first violation.
    pub fn check(&self, n_tasks: usize, capacity: usize) -> Result<(), String> {
        if capacity == 0 || !self.slots.len().is_multiple_of(capacity) {
            return Err(format!(
                "length {} is not a multiple of capacity {capacity}",
                self.slots.len()
            ));
        }
        let mut seen = vec![false; n_tasks];
        for (i, g) in self.slots.iter().enumerate() {
            if let Some(g) = *g {
                let g = g as usize;
                if g >= n_tasks {
                    return Err(format!("slot {i} holds unknown task {g}"));
                }
                if seen[g] {
                    return Err(format!("task {g} appears twice"));
                }
                seen[g] = true;
            }
        }
        Ok(())
    }

    /// Per-agent ordered request ids.
    pub fn decode(&self, problem: &GaProblem) -> WindowSolution {
        let mut assignments = Vec::new();
        let mut used = vec![false; problem.n_tasks()];
        for (a, seg) in self.slots.chunks(problem.capacity).enumerate() {
            let requests: Vec<RequestId> = seg
                .iter()
                .flatten()
                .map(|&g| {
                    used[g as usize] = true;
                    problem.tasks[g as usize].id
                })
                .collect();
            if !requests.is_empty() {
                assignments.push(AgentAssignment {
                    agent_id: problem.agents[a].agent_id,
                    requests,
                });
            }
        }
        let unassigned = problem
            .tasks
            .iter()
            .zip(&used)
            .filter(|(_, &u)| !u)
            .map(|(t, _)| t.id)
            .collect();
        WindowSolution {
            assignments,
            unassigned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgentAssignment {
    pub agent_id: AgentId,
    /// Visit order.
    pub requests: Vec<RequestId>,
}

/// Decoded assignment for one window.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct WindowSolution {
    pub assignments: Vec<AgentAssignment>,
    pub unassigned: Vec<RequestId>,
}

impl WindowSolution {
    /// Solution that assigns nothing.
    pub fn unassigned(tasks: impl IntoIterator<Item = RequestId>) -> Self {
        WindowSolution {
            assignments: Vec::new(),
            unassigned: tasks.into_iter().collect(),
        }
    }

    pub fn assigned_count(&self) -> usize {
        self.assignments.iter().map(|a| a.requests.len()).sum()
    }
}
