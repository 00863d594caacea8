//! Forecasting when and where agents finish their plans, and which agents
//! can take new work within a receding horizon.

use serde::Serialize;

use crate::geometry;
use crate::model::{Agent, AgentId, Location};

/// Predicted end of an agent's current plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgentForecast {
    pub agent_id: AgentId,
    /// Seconds since simulation start.
    pub completion_time: f64,
    pub completion_location: Location,
    pub available_within_horizon: bool,
}

/// An agent selected for the next assignment, with the point its new
/// tasks will start from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvailableAgent {
    pub agent_id: AgentId,
    pub start: Location,
    pub ready_at: f64,
}

/// Result of walking `distance` meters along an agent's plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Walk {
    pub position: Location,
    /// Waypoints fully reached.
    pub reached: usize,
    /// Meters actually covered (never more than the plan length).
    pub covered: f64,
}

pub(crate) fn walk(agent: &Agent, distance: f64) -> Walk {
    let mut here = agent.position();
    let mut left = distance.max(0.0);
    let mut covered = 0.0;
    let mut reached = 0;
    for w in agent.waypoints() {
        let d = geometry::leg(&here, &w.location);
        if d <= left {
            left -= d;
            covered += d;
            reached += 1;
            here = w.location;
        } else {
            covered += left;
            return Walk {
                position: here.lerp(&w.location, left / d),
                reached,
                covered,
            };
        }
    }
    Walk {
        position: here,
        reached,
        covered,
    }
}

/// Is the agent free for new work within `horizon` seconds of `now`?
///
/// Idle agents always are, busy agents only if they finish strictly before
/// `now + horizon`, and agents out of travel budget never are.
fn is_available(agent: &Agent, completion_time: f64, now: f64, horizon: f64) -> bool {
    if agent.budget_exhausted() {
        return false;
    }
    !agent.has_plan() || completion_time < now + horizon
}

/// Predicts plan completion assuming constant velocity along straight legs.
pub fn forecast(agent: &Agent, now: f64, horizon: f64) -> AgentForecast {
    let (completion_time, completion_location) = if agent.has_plan() {
        (
            agent.plan_issued_at() + agent.remaining_length() / agent.velocity(),
            agent.plan_end(),
        )
    } else {
        (now, agent.position())
    };
    AgentForecast {
        agent_id: agent.id(),
        completion_time,
        completion_location,
        available_within_horizon: is_available(agent, completion_time, now, horizon),
    }
}

/// Position of the agent at time `t` (not earlier than the plan issue time).
pub fn position_at(agent: &Agent, t: f64) -> Location {
    let elapsed = (t - agent.plan_issued_at()).max(0.0);
    walk(agent, elapsed * agent.velocity()).position
}

/// Agents available within `horizon` seconds of `now`, in input order,
/// each paired with where its next tasks start.
pub fn availability_anticipation(horizon: f64, agents: &[Agent], now: f64) -> Vec<AvailableAgent> {
    agents
        .iter()
        .map(|a| forecast(a, now, horizon))
        .filter(|f| f.available_within_horizon)
        .map(|f| AvailableAgent {
            agent_id: f.agent_id,
            start: f.completion_location,
            ready_at: f.completion_time,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CostVariant;
    use crate::model::{MetricSpace, Request, RequestFactory};

    fn tasks(points: &[(f64, f64)]) -> Vec<Request> {
        let mut f = RequestFactory::new(MetricSpace::Planar, CostVariant::ReachOnly, 1.0).unwrap();
        points
            .iter()
            .map(|&(x, y)| f.create(Location::planar(x, y), None, 0.0).unwrap())
            .collect()
    }

    fn agent_with(v: f64, points: &[(f64, f64)], issued: f64) -> Agent {
        let mut a = Agent::new(AgentId(0), Location::planar(0.0, 0.0), v).unwrap();
        a.append_requests(&tasks(points), CostVariant::ReachOnly, issued)
            .unwrap();
        a
    }

    #[test]
    fn single_task_completion() {
        let a = agent_with(1.0, &[(3.0, 4.0)], 10.0);
        let f = forecast(&a, 10.0, 0.0);
        assert_eq!(f.completion_time, 15.0);
        assert_eq!(f.completion_location, Location::planar(3.0, 4.0));
        assert!(f.completion_time >= a.plan_issued_at());
    }

    #[test]
    fn empty_plan_completes_now() {
        let a = Agent::new(AgentId(1), Location::planar(2.0, 2.0), 1.0).unwrap();
        let f = forecast(&a, 7.0, 0.0);
        assert_eq!(f.completion_time, 7.0);
        assert_eq!(f.completion_location, Location::planar(2.0, 2.0));
        assert!(f.available_within_horizon);
    }

    #[test]
    fn two_legs_at_double_speed() {
        // leg-sum oracle: (5 + 4) / 2
        let a = agent_with(2.0, &[(3.0, 4.0), (3.0, 0.0)], 0.0);
        let expected = (5.0 + 4.0) / 2.0;
        assert_eq!(forecast(&a, 0.0, 0.0).completion_time, expected);
    }

    #[test]
    fn linear_motion_and_clamp() {
        let a = agent_with(1.0, &[(10.0, 0.0)], 0.0);
        assert_eq!(position_at(&a, 4.0), Location::planar(4.0, 0.0));
        assert_eq!(position_at(&a, 10.0), Location::planar(10.0, 0.0));
        assert_eq!(position_at(&a, 99.0), Location::planar(10.0, 0.0));
    }

    /// Piecewise-linear oracle: move in 1 ms steps toward the next target.
    fn stepped_position(start: (f64, f64), v: f64, targets: &[(f64, f64)], t: f64) -> (f64, f64) {
        let dt = 0.001;
        let steps = (t / dt).round() as usize;
        let (mut x, mut y) = start;
        let mut idx = 0;
        for _ in 0..steps {
            let mut budget = v * dt;
            while budget > 0.0 && idx < targets.len() {
                let (tx, ty) = targets[idx];
                let d = ((tx - x).powi(2) + (ty - y).powi(2)).sqrt();
                if d <= budget {
                    x = tx;
                    y = ty;
                    budget -= d;
                    idx += 1;
                } else {
                    x += (tx - x) / d * budget;
                    y += (ty - y) / d * budget;
                    budget = 0.0;
                }
            }
        }
        (x, y)
    }

    #[test]
    fn position_on_second_leg() {
        let targets = [(3.0, 0.0), (3.0, 4.0)];
        let oracle = stepped_position((0.0, 0.0), 1.0, &targets, 5.0);
        assert!((oracle.0 - 3.0).abs() < 1e-6 && (oracle.1 - 2.0).abs() < 1e-6);
        let a = agent_with(1.0, &targets, 0.0);
        let (x, y) = position_at(&a, 5.0).coords();
        assert!((x - oracle.0).abs() < 1e-6 && (y - oracle.1).abs() < 1e-6);
    }

    #[test]
    fn idle_agents_available_at_zero_horizon() {
        let idle = Agent::new(AgentId(0), Location::planar(1.0, 1.0), 1.0).unwrap();
        let busy = agent_with(1.0, &[(3.0, 4.0)], 0.0);
        let avail = availability_anticipation(0.0, &[idle.clone(), busy], 0.0);
        assert_eq!(avail.len(), 1);
        assert_eq!(avail[0].agent_id, idle.id());
        assert_eq!(avail[0].start, Location::planar(1.0, 1.0));
    }

    #[test]
    fn busy_agent_within_horizon_is_included() {
        // finishes at now + 3, horizon 5 windows of 1 s
        let a = agent_with(1.0, &[(3.0, 0.0)], 0.0);
        let avail = availability_anticipation(5.0, &[a], 0.0);
        assert_eq!(avail.len(), 1);
        assert_eq!(avail[0].start, Location::planar(3.0, 0.0));
        assert_eq!(avail[0].ready_at, 3.0);
    }

    #[test]
    fn strict_comparison_for_busy_agents() {
        let a = agent_with(1.0, &[(3.0, 0.0)], 0.0);
        assert!(availability_anticipation(3.0, std::slice::from_ref(&a), 0.0).is_empty());
        assert_eq!(availability_anticipation(3.0 + 1e-9, &[a], 0.0).len(), 1);
    }

    #[test]
    fn exhausted_agents_are_excluded() {
        let mut a = Agent::new(AgentId(0), Location::planar(0.0, 0.0), 1.0)
            .unwrap()
            .with_travel_budget(Some(5.0));
        a.rebase(5.0, Location::planar(5.0, 0.0), 0, 5.0);
        assert!(a.budget_exhausted());
        assert!(availability_anticipation(100.0, &[a], 5.0).is_empty());
    }
}
