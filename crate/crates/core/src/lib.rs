//! Online proactive multi-task assignment with resource availability
//! anticipation.
//!
//! Requests arrive over fixed-length time windows. At each window boundary
//! the agents expected to finish their current plans within a receding
//! horizon are treated as available, and a genetic algorithm assigns the
//! batched requests to them, trading travelled distance against the number
//! of requests left unassigned.

pub mod anticipation;
pub mod error;
pub mod ga;
pub mod geometry;
pub mod horizon;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod scenario;
pub mod sim;
pub mod taxi;

pub use error::{Error, Result};
