use thiserror::Error;

use crate::model::{AgentId, MetricSpace, RequestId};

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("invalid location {location} for {space:?} space")]
    InvalidLocation {
        location: String,
        space: MetricSpace,
    },

    #[error("location uses a different metric space than {expected:?}")]
    MixedMetricSpace { expected: MetricSpace },

    #[error("request {0} has no dropoff but the pickup/dropoff cost variant requires one")]
    MissingDropoff(RequestId),

    #[error("dropoff presence is inconsistent with the scenario (expected dropoffs: {expected})")]
    InconsistentDropoff { expected: bool },

    #[error("invalid registration time {0}")]
    InvalidTime(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("agent {agent} has non-positive or non-finite velocity {velocity}")]
    InvalidVelocity { agent: AgentId, velocity: f64 },

    #[error("request {request} is already planned for agent {agent}")]
    DuplicateRequest { agent: AgentId, request: RequestId },

    #[error("agent {agent} received {got} requests, capacity is {capacity}")]
    CapacityExceeded {
        agent: AgentId,
        got: usize,
        capacity: usize,
    },

    #[error("solution references unknown agent {0}")]
    UnknownAgent(AgentId),

    #[error("solution references request {0} which is not part of the window")]
    UnknownRequest(RequestId),

    #[error("instance too large for exhaustive search: {tasks} tasks, {agents} agents")]
    InstanceTooLarge { tasks: usize, agents: usize },

    #[error("scenario parse error at line {line}: {message}")]
    ScenarioParse { line: usize, message: String },

    #[error("taxi data error: {0}")]
    TaxiData(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
