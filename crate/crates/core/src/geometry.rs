//! Distances and open-path travel costs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Location, MetricSpace, Request};

/// Mean Earth radius used for great-circle distances, in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// How a request contributes to an agent's path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostVariant {
    /// Reaching the pickup completes the request.
    ReachOnly,
    /// The agent drives from pickup to dropoff.
    PickupDropoff,
}

fn haversine(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (lon2 - lon1).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Distance between two points already known to share a space.
///
/// # Panics
/// Panics if the points come from different metric spaces; scenarios are
/// validated up front so this only fires on a programming error.
pub fn leg(a: &Location, b: &Location) -> f64 {
    match (*a, *b) {
        (Location::Planar { x: x1, y: y1 }, Location::Planar { x: x2, y: y2 }) => {
            (x2 - x1).hypot(y2 - y1)
        }
        (Location::Geo { lat: la1, lon: lo1 }, Location::Geo { lat: la2, lon: lo2 }) => {
            haversine(la1, lo1, la2, lo2)
        }
        _ => panic!("distance between points of different metric spaces"),
    }
}

/// Distance in meters: Euclidean for planar points, great-circle for
/// geographic ones.
pub fn distance(a: &Location, b: &Location, space: MetricSpace) -> Result<f64> {
    space.validate(a)?;
    space.validate(b)?;
    Ok(leg(a, b))
}

/// Length of the open path starting at `start` and serving `requests` in
/// the given order.
pub fn path_length(
    start: &Location,
    requests: &[Request],
    variant: CostVariant,
    space: MetricSpace,
) -> Result<f64> {
    space.validate(start)?;
    let mut here = *start;
    let mut total = 0.0;
    for r in requests {
        space.validate(&r.pickup)?;
        total += leg(&here, &r.pickup);
        here = r.pickup;
        if variant == CostVariant::PickupDropoff {
            let drop = r.dropoff.ok_or(Error::MissingDropoff(r.id))?;
            space.validate(&drop)?;
            total += leg(&here, &drop);
            here = drop;
        }
    }
    Ok(total)
}

/// Where an agent stands after serving `requests` from `start`.
pub fn end_location(start: &Location, requests: &[Request], variant: CostVariant) -> Location {
    match (variant, requests.last()) {
        (_, None) => *start,
        (CostVariant::ReachOnly, Some(r)) => r.pickup,
        (CostVariant::PickupDropoff, Some(r)) => r.end_location(),
    }
}
