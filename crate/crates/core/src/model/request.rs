use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Location, MetricSpace};
use crate::error::{Error, Result};
use crate::geometry::CostVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RequestId(pub usize);

impl fmt::Display for RequestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// A task to be reached (and, for rides, carried to a dropoff).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: RequestId,
    pub pickup: Location,
    pub dropoff: Option<Location>,
    /// Seconds since simulation start.
    pub registered_at: f64,
    /// `floor(registered_at / delta)`.
    pub registered_window: usize,
}

impl Request {
    /// Where an agent ends up after serving this request.
    pub fn end_location(&self) -> Location {
        self.dropoff.unwrap_or(self.pickup)
    }
}

/// Window index containing time `t` for windows of length `delta`.
pub fn window_of(t: f64, delta: f64) -> usize {
    (t / delta).floor() as usize
}

/// Hands out requests with dense, unique ids starting at 0.
#[derive(Debug, Clone)]
pub struct RequestFactory {
    space: MetricSpace,
    variant: CostVariant,
    delta: f64,
    next_id: usize,
}

impl RequestFactory {
    pub fn new(space: MetricSpace, variant: CostVariant, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "window duration must be positive, got {delta}"
            )));
        }
        Ok(RequestFactory {
            space,
            variant,
            delta,
            next_id: 0,
        })
    }

    pub fn create(
        &mut self,
        pickup: Location,
        dropoff: Option<Location>,
        registered_at: f64,
    ) -> Result<Request> {
        if !(registered_at.is_finite() && registered_at >= 0.0) {
            return Err(Error::InvalidTime(registered_at));
        }
        self.space.validate(&pickup)?;
        if let Some(d) = &dropoff {
            self.space.validate(d)?;
        }
        let expects_dropoff = self.variant == CostVariant::PickupDropoff;
        if dropoff.is_some() != expects_dropoff {
            return Err(Error::InconsistentDropoff {
                expected: expects_dropoff,
            });
        }
        let id = RequestId(self.next_id);
        self.next_id += 1;
        Ok(Request {
            id,
            pickup,
            dropoff,
            registered_at,
            registered_window: window_of(registered_at, self.delta),
        })
    }

    pub fn issued(&self) -> usize {
        self.next_id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factory() -> RequestFactory {
        RequestFactory::new(MetricSpace::Planar, CostVariant::ReachOnly, 5.0).unwrap()
    }

    #[test]
    fn first_request_gets_id_zero_window_zero() {
        let r = factory()
            .create(Location::planar(2.0, 3.0), None, 0.0)
            .unwrap();
        assert_eq!(r.id, RequestId(0));
        assert_eq!(r.registered_window, 0);
    }

    #[test]
    fn window_is_floor_of_time_over_delta() {
        let r = factory()
            .create(Location::planar(2.0, 3.0), None, 12.5)
            .unwrap();
        assert_eq!(r.registered_window, 2);
    }

    #[test]
    fn consecutive_ids_are_distinct() {
        let mut f = factory();
        let a = f.create(Location::planar(0.0, 0.0), None, 0.0).unwrap();
        let b = f.create(Location::planar(0.0, 0.0), None, 0.0).unwrap();
        assert_eq!((a.id, b.id), (RequestId(0), RequestId(1)));
    }

    #[test]
    fn construction_errors() {
        let mut f = factory();
        assert_eq!(
            f.create(Location::planar(0.0, 0.0), None, -1.0),
            Err(Error::InvalidTime(-1.0))
        );
        assert!(matches!(
            f.create(Location::planar(f64::NAN, 0.0), None, 0.0),
            Err(Error::InvalidLocation { .. })
        ));
        assert_eq!(
            f.create(
                Location::planar(0.0, 0.0),
                Some(Location::planar(1.0, 1.0)),
                0.0
            ),
            Err(Error::InconsistentDropoff { expected: false })
        );
        let mut taxi =
            RequestFactory::new(MetricSpace::Geographic, CostVariant::PickupDropoff, 300.0)
                .unwrap();
        assert_eq!(
            taxi.create(Location::geo(40.7, -74.0), None, 0.0),
            Err(Error::InconsistentDropoff { expected: true })
        );
        // failed constructions do not consume ids
        assert_eq!(f.issued(), 0);
    }

    #[test]
    fn zero_delta_rejected() {
        assert!(RequestFactory::new(MetricSpace::Planar, CostVariant::ReachOnly, 0.0).is_err());
    }
}
