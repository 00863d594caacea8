//! Scenarios (a fleet plus a request stream), the synthetic grid-world
//! generator, and a line-oriented text format for saving and replaying
//! scenarios.
//!
//! The text format has one request per line, `id,t,x,y` or
//! `id,t,x,y,dropoff_x,dropoff_y`, where `x,y` are latitude and longitude
//! in geographic space. Lines starting with `#` are comments, except the
//! directives `# space: planar|geographic`, `# delta: <seconds>` and
//! `# agent: x,y,velocity,budget` (budget in meters or `inf`). Agents get
//! ids in the order they appear.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::CostVariant;
use crate::model::{
    window_of, Agent, AgentId, Location, MetricSpace, Request, RequestFactory, RequestId,
};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub space: MetricSpace,
    pub variant: CostVariant,
    /// Window length the requests were stamped for.
    pub delta: f64,
    pub agents: Vec<Agent>,
    /// Sorted by registration time, then id.
    pub requests: Vec<Request>,
}

impl Scenario {
    pub fn new(
        space: MetricSpace,
        variant: CostVariant,
        delta: f64,
        agents: Vec<Agent>,
        mut requests: Vec<Request>,
    ) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "window duration must be positive, got {delta}"
            )));
        }
        for (i, a) in agents.iter().enumerate() {
            if a.id() != AgentId(i) {
                return Err(Error::InvalidConfig(format!(
                    "agent ids must be 0..n in order, found {} at position {i}",
                    a.id()
                )));
            }
            space.validate(&a.position())?;
        }
        let mut seen = std::collections::HashSet::new();
        for r in &requests {
            if !seen.insert(r.id) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate request id {}",
                    r.id
                )));
            }
            if !(r.registered_at.is_finite() && r.registered_at >= 0.0) {
                return Err(Error::InvalidTime(r.registered_at));
            }
            space.validate(&r.pickup)?;
            match (variant, r.dropoff) {
                (CostVariant::PickupDropoff, None) => return Err(Error::MissingDropoff(r.id)),
                (CostVariant::ReachOnly, Some(_)) => {
                    return Err(Error::InconsistentDropoff { expected: false })
                }
                (_, Some(d)) => space.validate(&d)?,
                _ => {}
            }
        }
        requests.sort_by(|a, b| {
            a.registered_at
                .total_cmp(&b.registered_at)
                .then(a.id.cmp(&b.id))
        });
        Ok(Scenario {
            space,
            variant,
            delta,
            agents,
            requests,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let space = match self.space {
            MetricSpace::Planar => "planar",
            MetricSpace::Geographic => "geographic",
        };
        writeln!(out, "# space: {space}").unwrap();
        writeln!(out, "# delta: {}", self.delta).unwrap();
        for a in &self.agents {
            let (x, y) = a.position().coords();
            let budget = a
                .travel_budget()
                .map_or_else(|| "inf".to_string(), |b| b.to_string());
            writeln!(out, "# agent: {x},{y},{},{budget}", a.velocity()).unwrap();
        }
        for r in &self.requests {
            let (x, y) = r.pickup.coords();
            write!(out, "{},{},{x},{y}", r.id.0, r.registered_at).unwrap();
            if let Some(d) = r.dropoff {
                let (dx, dy) = d.coords();
                write!(out, ",{dx},{dy}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file =
            std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(file)
    }

    pub fn parse(reader: impl Read) -> Result<Self> {
        let mut space = MetricSpace::Planar;
        let mut delta = None;
        let mut agents = Vec::new();
        let mut rows: Vec<(usize, Vec<f64>, usize)> = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let line = line.trim();
            let bad = |message: String| Error::ScenarioParse {
                line: line_no,
                message,
            };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let Some((key, value)) = comment.split_once(':') else {
                    continue;
                };
                let value = value.trim();
                match key.trim() {
                    "space" => {
                        space = match value {
                            "planar" => MetricSpace::Planar,
                            "geographic" => MetricSpace::Geographic,
                            other => return Err(bad(format!("unknown space {other:?}"))),
                        }
                    }
                    "delta" => {
                        delta = Some(
                            value
                                .parse::<f64>()
                                .map_err(|e| bad(format!("bad delta: {e}")))?,
                        )
                    }
                    "agent" => {
                        let fields: Vec<&str> = value.split(',').map(str::trim).collect();
                        if fields.len() != 4 {
                            return Err(bad("agent needs x,y,velocity,budget".into()));
                        }
                        let num = |s: &str| {
                            s.parse::<f64>()
                                .map_err(|e| bad(format!("bad number {s:?}: {e}")))
                        };
                        let budget = match fields[3] {
                            "inf" => None,
                            s => Some(num(s)?),
                        };
                        let pos = Location::from_coords(space, num(fields[0])?, num(fields[1])?);
                        let agent = Agent::new(AgentId(agents.len()), pos, num(fields[2])?)
                            .map_err(|e| bad(e.to_string()))?
                            .with_travel_budget(budget);
                        agents.push(agent);
                    }
                    _ => {}
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 && fields.len() != 6 {
                return Err(bad(format!(
                    "expected 4 or 6 fields, found {}",
                    fields.len()
                )));
            }
            let id = fields[0]
                .parse::<usize>()
                .map_err(|e| bad(format!("bad id: {e}")))?;
            let nums = fields[1..]
                .iter()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| bad(format!("bad number: {e}")))?;
            rows.push((id, nums, line_no));
        }

        let delta = delta.unwrap_or(5.0);
        let variant = match rows.first() {
            Some((_, nums, _)) if nums.len() == 5 => CostVariant::PickupDropoff,
            _ => CostVariant::ReachOnly,
        };
        let mut requests = Vec::with_capacity(rows.len());
        for (id, nums, line) in rows {
            if (nums.len() == 5) != (variant == CostVariant::PickupDropoff) {
                return Err(Error::ScenarioParse {
                    line,
                    message: "all requests must agree on having a dropoff".into(),
                });
            }
            let t = nums[0];
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::ScenarioParse {
                    line,
                    message: format!("invalid time {t}"),
                });
            }
            requests.push(Request {
                id: RequestId(id),
                pickup: Location::from_coords(space, nums[1], nums[2]),
                dropoff: (nums.len() == 5).then(|| Location::from_coords(space, nums[3], nums[4])),
                registered_at: t,
                registered_window: window_of(t, delta),
            });
        }
        Scenario::new(space, variant, delta, agents, requests)
    }
}

/// Parameters of the synthetic grid-world benchmark.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub world_width: f64,
    pub world_height: f64,
    pub n_agents: usize,
    pub tasks_per_window: usize,
    pub total_windows: usize,
    pub delta: f64,
    pub velocity: f64,
    /// Meters, or unbounded when `None`.
    pub travel_budget: Option<f64>,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            world_width: 10.0,
            world_height: 10.0,
            n_agents: 20,
            tasks_per_window: 10,
            total_windows: 30,
            delta: 5.0,
            velocity: 1.0,
            travel_budget: Some(150.0),
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.world_width) && positive(self.world_height)) {
            return Err(Error::InvalidConfig(
                "world dimensions must be positive".into(),
            ));
        }
        if self.n_agents == 0 || self.total_windows == 0 {
            return Err(Error::InvalidConfig(
                "need at least one agent and one window".into(),
            ));
        }
        if !positive(self.delta) || !positive(self.velocity) {
            return Err(Error::InvalidConfig(
                "delta and velocity must be positive".into(),
            ));
        }
        if self.travel_budget.is_some_and(|b| !positive(b)) {
            return Err(Error::InvalidConfig(
                "travel budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Builds a synthetic scenario: agents uniform in the world, then
/// `tasks_per_window` uniform requests stamped at the start of each window.
pub fn generate(spec: &SyntheticSpec) -> Result<Scenario> {
    spec.validate()?;
    let mut rng = rng::rng_for(spec.seed, 0x5ce7_a210);
    let point = |rng: &mut rng::SimRng| {
        Location::planar(
            rng.gen_range(0.0..=spec.world_width),
            rng.gen_range(0.0..=spec.world_height),
        )
    };
    let agents = (0..spec.n_agents)
        .map(|i| {
            Agent::new(AgentId(i), point(&mut rng), spec.velocity)
                .map(|a| a.with_travel_budget(spec.travel_budget))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut factory = RequestFactory::new(MetricSpace::Planar, CostVariant::ReachOnly, spec.delta)?;
    let mut requests = Vec::with_capacity(spec.tasks_per_window * spec.total_windows);
    for tau in 0..spec.total_windows {
        for _ in 0..spec.tasks_per_window {
            requests.push(factory.create(point(&mut rng), None, tau as f64 * spec.delta)?);
        }
    }
    Scenario::new(
        MetricSpace::Planar,
        CostVariant::ReachOnly,
        spec.delta,
        agents,
        requests,
    )
}
