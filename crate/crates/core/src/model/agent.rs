use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Location, Request, RequestId};
use crate::error::{Error, Result};
use crate::geometry::{self, CostVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// One point an agent has to reach. A request contributes one waypoint
/// (reach-only) or two (pickup, then dropoff).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub location: Location,
    pub request: RequestId,
    /// Reaching this waypoint completes the request.
    pub completes: bool,
}

/// A mobile resource moving at constant speed along straight legs.
///
/// `position` is where the agent was at `plan_issued_at`; the remaining
/// waypoints are visited in order from there.
#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    id: AgentId,
    position: Location,
    velocity: f64,
    waypoints: VecDeque<Waypoint>,
    plan_issued_at: f64,
    distance_traveled: f64,
    travel_budget: Option<f64>,
}

impl Agent {
    pub fn new(id: AgentId, position: Location, velocity: f64) -> Result<Self> {
        if !(velocity.is_finite() && velocity > 0.0) {
            return Err(Error::InvalidVelocity {
                agent: id,
                velocity,
            });
        }
        Ok(Agent {
            id,
            position,
            velocity,
            waypoints: VecDeque::new(),
            plan_issued_at: 0.0,
            distance_traveled: 0.0,
            travel_budget: None,
        })
    }

    /// Caps the total distance this agent may travel, in meters.
    pub fn with_travel_budget(mut self, meters: Option<f64>) -> Self {
        self.travel_budget = meters;
        self
    }

    pub fn id(&self) -> AgentId {
        self.id
    }

    pub fn position(&self) -> Location {
        self.position
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    pub fn plan_issued_at(&self) -> f64 {
        self.plan_issued_at
    }

    pub fn distance_traveled(&self) -> f64 {
        self.distance_traveled
    }

    pub fn travel_budget(&self) -> Option<f64> {
        self.travel_budget
    }

    pub fn waypoints(&self) -> impl ExactSizeIterator<Item = &Waypoint> + '_ {
        self.waypoints.iter()
    }

    pub fn has_plan(&self) -> bool {
        !self.waypoints.is_empty()
    }

    /// Requests not yet completed, in visit order.
    pub fn plan(&self) -> Vec<RequestId> {
        let mut ids: Vec<RequestId> = Vec::new();
        for w in &self.waypoints {
            if ids.last() != Some(&w.request) {
                ids.push(w.request);
            }
        }
        ids
    }

    /// Meters left before the travel budget runs out.
    pub fn remaining_budget(&self) -> f64 {
        self.travel_budget
            .map_or(f64::INFINITY, |b| (b - self.distance_traveled).max(0.0))
    }

    pub fn budget_exhausted(&self) -> bool {
        self.remaining_budget() <= 0.0
    }

    /// Length of the remaining plan from the issue position.
    pub fn remaining_length(&self) -> f64 {
        let mut from = self.position;
        let mut total = 0.0;
        for w in &self.waypoints {
            total += geometry::leg(&from, &w.location);
            from = w.location;
        }
        total
    }

    /// Where the agent stands once the plan is done.
    pub fn plan_end(&self) -> Location {
        self.waypoints.back().map_or(self.position, |w| w.location)
    }

    /// Appends `requests` to the plan in order.
    ///
    /// An agent without a plan starts the new one at `now` from its current
    /// position; a busy agent continues after its last waypoint.
    pub fn append_requests(
        &mut self,
        requests: &[Request],
        variant: CostVariant,
        now: f64,
    ) -> Result<()> {
        let mut planned = self.plan();
        for r in requests {
            if planned.contains(&r.id) {
                return Err(Error::DuplicateRequest {
                    agent: self.id,
                    request: r.id,
                });
            }
            if variant == CostVariant::PickupDropoff && r.dropoff.is_none() {
                return Err(Error::MissingDropoff(r.id));
            }
            planned.push(r.id);
        }
        if requests.is_empty() {
            return Ok(());
        }
        if self.waypoints.is_empty() {
            self.plan_issued_at = now;
        }
        for r in requests {
            match (variant, r.dropoff) {
                (CostVariant::PickupDropoff, Some(drop)) => {
                    self.waypoints.push_back(Waypoint {
                        location: r.pickup,
                        request: r.id,
                        completes: false,
                    });
                    self.waypoints.push_back(Waypoint {
                        location: drop,
                        request: r.id,
                        completes: true,
                    });
                }
                _ => self.waypoints.push_back(Waypoint {
                    location: r.pickup,
                    request: r.id,
                    completes: true,
                }),
            }
        }
        Ok(())
    }

    /// Re-anchors the agent at time `t` after it moved `covered` meters,
    /// dropping the first `reached` waypoints.
    pub(crate) fn rebase(&mut self, t: f64, position: Location, reached: usize, covered: f64) {
        self.waypoints.drain(..reached);
        self.position = position;
        self.plan_issued_at = t;
        self.distance_traveled += covered;
    }

    /// Stops the agent for good once its budget is spent, returning the
    /// planned requests that will never be completed.
    pub(crate) fn halt(&mut self) -> Vec<RequestId> {
        let stranded = self.plan();
        self.waypoints.clear();
        if let Some(b) = self.travel_budget {
            self.distance_traveled = self.distance_traveled.max(b);
        }
        stranded
    }
}
