//! Domain types shared by the whole crate.

mod agent;
mod config;
mod location;
mod request;

pub use agent::{Agent, AgentId, Waypoint};
pub use config::{
    Budget, CapacityRule, GaParams, HorizonMode, SimConfig, SimConfigBuilder, ELITE_PERCENT,
};
pub use location::{Location, MetricSpace};
pub use request::{window_of, Request, RequestFactory, RequestId};
