use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How coordinates are interpreted and distances measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricSpace {
    /// Cartesian coordinates in meters.
    Planar,
    /// Latitude/longitude in degrees on a spherical Earth.
    Geographic,
}

/// A point in one of the two supported metric spaces.
///
/// The variant carries the space, so points from different spaces can never
/// be silently combined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase")]
pub enum Location {
    Planar {
        x: f64,
        y: f64,
    },
    #[serde(rename = "geographic")]
    Geo {
        lat: f64,
        lon: f64,
    },
}

impl Location {
    pub fn planar(x: f64, y: f64) -> Self {
        Location::Planar { x, y }
    }

    pub fn geo(lat: f64, lon: f64) -> Self {
        Location::Geo { lat, lon }
    }

    pub fn space(&self) -> MetricSpace {
        match self {
            Location::Planar { .. } => MetricSpace::Planar,
            Location::Geo { .. } => MetricSpace::Geographic,
        }
    }

    /// Raw coordinate pair: `(x, y)` or `(lat, lon)`.
    pub fn coords(&self) -> (f64, f64) {
        match *self {
            Location::Planar { x, y } => (x, y),
            Location::Geo { lat, lon } => (lat, lon),
        }
    }

    /// Builds a location of the given space from a raw coordinate pair.
    pub fn from_coords(space: MetricSpace, a: f64, b: f64) -> Self {
        match space {
            MetricSpace::Planar => Location::planar(a, b),
            MetricSpace::Geographic => Location::geo(a, b),
        }
    }

    /// Point a fraction `t` of the way from `self` to `to`.
    ///
    /// Geographic points are interpolated linearly in degrees, which is
    /// accurate enough over the short legs used by the simulator.
    pub fn lerp(&self, to: &Location, t: f64) -> Location {
        let (a0, b0) = self.coords();
        let (a1, b1) = to.coords();
        Location::from_coords(self.space(), a0 + (a1 - a0) * t, b0 + (b1 - b0) * t)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Planar { x, y } => write!(f, "({x}, {y})"),
            Location::Geo { lat, lon } => write!(f, "({lat}°, {lon}°)"),
        }
    }
}

impl MetricSpace {
    /// Checks that `location` belongs to this space and has valid coordinates.
    pub fn validate(&self, location: &Location) -> Result<()> {
        if location.space() != *self {
            return Err(Error::MixedMetricSpace { expected: *self });
        }
        let ok = match *location {
            Location::Planar { x, y } => x.is_finite() && y.is_finite(),
            Location::Geo { lat, lon } => {
                (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLocation {
                location: location.to_string(),
                space: *self,
            })
        }
    }
}
