//! Ingestion of NYC taxi trip records (2013 `trip_data` layout) into one
//! pickup/dropoff request stream per night, plus the random taxi fleet.
//!
//! A trip's pickup time is its registration time, counted in seconds from
//! midnight of its night. Rows are checked in a fixed order and each
//! rejected row is tallied under the first reason that applies: malformed,
//! outside the date range, outside the hour range, outside the bounding box.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime, Timelike};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CostVariant;
use crate::model::{window_of, Agent, AgentId, Location, MetricSpace, Request, RequestId};
use crate::rng;
use crate::scenario::Scenario;

/// 30 mph in meters per second.
pub const TAXI_VELOCITY: f64 = 30.0 * 1609.344 / 3600.0;
/// Five-minute windows.
pub const TAXI_DELTA: f64 = 300.0;
/// Windows in a 12am-7am night.
pub const TAXI_WINDOWS: usize = 84;

const DATETIME_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BoundingBox {
    pub const NEW_YORK: BoundingBox = BoundingBox {
        lat_min: 40.4,
        lat_max: 41.1,
        lon_min: -74.3,
        lon_max: -73.6,
    };

    pub fn contains(&self, lat: f64, lon: f64) -> bool {
        (self.lat_min..=self.lat_max).contains(&lat) && (self.lon_min..=self.lon_max).contains(&lon)
    }
}

/// Header names of the columns read. Headers are matched after trimming.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ColumnMap {
    pub pickup_datetime: String,
    pub pickup_longitude: String,
    pub pickup_latitude: String,
    pub dropoff_longitude: String,
    pub dropoff_latitude: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            pickup_datetime: "pickup_datetime".into(),
            pickup_longitude: "pickup_longitude".into(),
            pickup_latitude: "pickup_latitude".into(),
            dropoff_longitude: "dropoff_longitude".into(),
            dropoff_latitude: "dropoff_latitude".into(),
        }
    }
}

/// Which trips are kept: pickup dates in `[first_date, last_date]`, pickup
/// hours in `[start_hour, end_hour)`, both ends inside `bbox`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripFilter {
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
    pub start_hour: u32,
    pub end_hour: u32,
    pub bbox: BoundingBox,
}

impl Default for TripFilter {
    fn default() -> Self {
        TripFilter {
            first_date: NaiveDate::from_ymd_opt(2013, 1, 7).unwrap(),
            last_date: NaiveDate::from_ymd_opt(2013, 1, 9).unwrap(),
            start_hour: 0,
            end_hour: 7,
            bbox: BoundingBox::NEW_YORK,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DropStats {
    pub total: usize,
    pub retained: usize,
    pub malformed: usize,
    pub date: usize,
    pub hour: usize,
    pub bbox: usize,
}

impl DropStats {
    pub fn dropped(&self) -> usize {
        self.malformed + self.date + self.hour + self.bbox
    }
}

/// Requests grouped by night, each with ids `0..n` in pickup-time order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub nights: BTreeMap<NaiveDate, Vec<Request>>,
    pub drops: DropStats,
}

struct Trip {
    pickup_at: NaiveDateTime,
    pickup: (f64, f64),
    dropoff: (f64, f64),
}

enum Verdict {
    Keep(Trip),
    Malformed,
    Date,
    Hour,
    Bbox,
}

struct Columns {
    datetime: usize,
    pickup_lon: usize,
    pickup_lat: usize,
    dropoff_lon: usize,
    dropoff_lat: usize,
}

impl Columns {
    fn locate(headers: &csv::StringRecord, map: &ColumnMap) -> Result<Self> {
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::TaxiData(format!("missing column {name:?} in header")))
        };
        Ok(Columns {
            datetime: find(&map.pickup_datetime)?,
            pickup_lon: find(&map.pickup_longitude)?,
            pickup_lat: find(&map.pickup_latitude)?,
            dropoff_lon: find(&map.dropoff_longitude)?,
            dropoff_lat: find(&map.dropoff_latitude)?,
        })
    }

    fn judge(&self, record: &csv::StringRecord, filter: &TripFilter) -> Verdict {
        let field = |i: usize| record.get(i).map(str::trim);
        let num = |i: usize| {
            field(i)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
        };
        let parsed = field(self.datetime)
            .and_then(|s| NaiveDateTime::parse_from_str(s, DATETIME_FORMAT).ok())
            .zip(num(self.pickup_lat).zip(num(self.pickup_lon)))
            .zip(num(self.dropoff_lat).zip(num(self.dropoff_lon)));
        let Some(((pickup_at, pickup), dropoff)) = parsed else {
            return Verdict::Malformed;
        };
        let date = pickup_at.date();
        if date < filter.first_date || date > filter.last_date {
            return Verdict::Date;
        }
        let hour = pickup_at.hour();
        if hour < filter.start_hour || hour >= filter.end_hour {
            return Verdict::Hour;
        }
        if !filter.bbox.contains(pickup.0, pickup.1) || !filter.bbox.contains(dropoff.0, dropoff.1)
        {
            return Verdict::Bbox;
        }
        Verdict::Keep(Trip {
            pickup_at,
            pickup,
            dropoff,
        })
    }
}

pub fn ingest(path: &Path, filter: &TripFilter, columns: &ColumnMap) -> Result<Ingested> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ingest_reader(file, filter, columns)
}

pub fn ingest_reader(
    reader: impl Read,
    filter: &TripFilter,
    columns: &ColumnMap,
) -> Result<Ingested> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| Error::TaxiData(format!("unreadable header: {e}")))?
        .clone();
    let cols = Columns::locate(&headers, columns)?;

    let mut drops = DropStats::default();
    let mut trips: BTreeMap<NaiveDate, Vec<Trip>> = BTreeMap::new();
    let mut record = csv::StringRecord::new();
    loop {
        match csv.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) if e.is_io_error() => return Err(Error::TaxiData(e.to_string())),
            Err(_) => {
                drops.total += 1;
                drops.malformed += 1;
                continue;
            }
        }
        drops.total += 1;
        match cols.judge(&record, filter) {
            Verdict::Keep(t) => {
                drops.retained += 1;
                trips.entry(t.pickup_at.date()).or_default().push(t);
            }
            Verdict::Malformed => drops.malformed += 1,
            Verdict::Date => drops.date += 1,
            Verdict::Hour => drops.hour += 1,
            Verdict::Bbox => drops.bbox += 1,
        }
    }

    let nights = trips
        .into_iter()
        .map(|(date, mut trips)| {
            trips.sort_by_key(|t| t.pickup_at);
            let midnight = date.and_hms_opt(0, 0, 0).unwrap();
            let requests = trips
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    let registered_at = (t.pickup_at - midnight).num_seconds() as f64;
                    Request {
                        id: RequestId(i),
                        pickup: Location::geo(t.pickup.0, t.pickup.1),
                        dropoff: Some(Location::geo(t.dropoff.0, t.dropoff.1)),
                        registered_at,
                        registered_window: window_of(registered_at, TAXI_DELTA),
                    }
                })
                .collect();
            (date, requests)
        })
        .collect();
    Ok(Ingested { nights, drops })
}

/// `n` taxis placed uniformly in `bbox`, with no travel budget.
pub fn make_taxi_fleet(
    n: usize,
    bbox: &BoundingBox,
    velocity: f64,
    seed: u64,
) -> Result<Vec<Agent>> {
    if n == 0 {
        return Err(Error::InvalidConfig("fleet needs at least one taxi".into()));
    }
    let mut rng = rng::rng_for(seed, 0x7a_c1);
    (0..n)
        .map(|i| {
            let lat = rng.gen_range(bbox.lat_min..=bbox.lat_max);
            let lon = rng.gen_range(bbox.lon_min..=bbox.lon_max);
            Agent::new(AgentId(i), Location::geo(lat, lon), velocity)
        })
        .collect()
}

/// One night as a scenario for the simulator.
pub fn night_scenario(requests: Vec<Request>, fleet: Vec<Agent>) -> Result<Scenario> {
    Scenario::new(
        MetricSpace::Geographic,
        CostVariant::PickupDropoff,
        TAXI_DELTA,
        fleet,
        requests,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "medallion, pickup_datetime, pickup_longitude, pickup_latitude, dropoff_longitude, dropoff_latitude\n";

    fn rows(lines: &[&str]) -> String {
        let mut s = HEADER.to_string();
        for l in lines {
            s.push_str(l);
            s.push('\n');
        }
        s
    }

    fn ingest_str(s: &str) -> Ingested {
        ingest_reader(s.as_bytes(), &TripFilter::default(), &ColumnMap::default()).unwrap()
    }

    #[test]
    fn hour_filter_counts() {
        let mut lines = Vec::new();
        for h in 0..7 {
            lines.push(format!("m,2013-01-07 0{h}:10:00,-73.98,40.75,-73.95,40.77"));
        }
        for h in [7, 12, 23] {
            lines.push(format!(
                "m,2013-01-07 {h:02}:10:00,-73.98,40.75,-73.95,40.77"
            ));
        }
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let out = ingest_str(&rows(&refs));
        assert_eq!(out.drops.retained, 7);
        assert_eq!(out.drops.hour, 3);
        assert_eq!(out.drops.total, 10);
    }

    #[test]
    fn zero_latitude_is_out_of_bbox() {
        let out = ingest_str(&rows(&["m,2013-01-07 01:00:00,-73.98,0.0,-73.95,40.77"]));
        assert_eq!(out.drops.bbox, 1);
        assert!(out.nights.is_empty());
    }

    #[test]
    fn registration_is_seconds_from_midnight() {
        let out = ingest_str(&rows(&["m,2013-01-07 01:30:00,-73.98,40.75,-73.95,40.77"]));
        let night = &out.nights[&NaiveDate::from_ymd_opt(2013, 1, 7).unwrap()];
        assert_eq!(night[0].registered_at, 5400.0);
        assert_eq!(night[0].registered_window, 18);
        assert_eq!(night[0].pickup, Location::geo(40.75, -73.98));
        assert_eq!(night[0].dropoff, Some(Location::geo(40.77, -73.95)));
    }

    #[test]
    fn malformed_rows_are_soft_drops() {
        let out = ingest_str(&rows(&[
            "m,2013-01-07 01:30,-73.98,40.75,-73.95,40.77",
            "m,2013-01-07 01:30:00,,40.75,-73.95,40.77",
            "m,2013-01-07 01:30:00,-73.98",
            "m,2013-01-07 01:30:00,-73.98,40.75,-73.95,40.77",
        ]));
        assert_eq!(out.drops.malformed, 3);
        assert_eq!(out.drops.retained, 1);
    }

    #[test]
    fn first_failing_reason_wins() {
        // wrong date and wrong hour and outside the box: counted as date
        let out = ingest_str(&rows(&["m,2013-02-01 12:00:00,0,0,0,0"]));
        assert_eq!(out.drops.date, 1);
        let out = ingest_str(&rows(&["m,2013-01-08 12:00:00,0,0,0,0"]));
        assert_eq!(out.drops.hour, 1);
    }

    #[test]
    fn nights_sorted_with_dense_ids() {
        let out = ingest_str(&rows(&[
            "m,2013-01-08 05:00:00,-73.98,40.75,-73.95,40.77",
            "m,2013-01-08 01:00:00,-73.98,40.75,-73.95,40.77",
            "m,2013-01-07 03:00:00,-73.98,40.75,-73.95,40.77",
        ]));
        assert_eq!(out.nights.len(), 2);
        let n8 = &out.nights[&NaiveDate::from_ymd_opt(2013, 1, 8).unwrap()];
        assert_eq!(n8[0].id, RequestId(0));
        assert_eq!(n8[0].registered_at, 3600.0);
        assert_eq!(n8[1].registered_at, 18000.0);
    }

    #[test]
    fn missing_column_is_hard_error() {
        let s = "pickup_datetime,pickup_longitude\n2013-01-07 01:00:00,-73.9\n";
        assert!(matches!(
            ingest_reader(s.as_bytes(), &TripFilter::default(), &ColumnMap::default()),
            Err(Error::TaxiData(_))
        ));
    }

    #[test]
    fn renamed_columns() {
        let s = "t,plon,plat,dlon,dlat\n2013-01-07 01:00:00,-73.98,40.75,-73.95,40.77\n";
        let map = ColumnMap {
            pickup_datetime: "t".into(),
            pickup_longitude: "plon".into(),
            pickup_latitude: "plat".into(),
            dropoff_longitude: "dlon".into(),
            dropoff_latitude: "dlat".into(),
        };
        let out = ingest_reader(s.as_bytes(), &TripFilter::default(), &map).unwrap();
        assert_eq!(out.drops.retained, 1);
    }

    #[test]
    fn fleet() {
        assert_eq!(TAXI_VELOCITY, 13.4112);
        let a = make_taxi_fleet(1000, &BoundingBox::NEW_YORK, TAXI_VELOCITY, 5).unwrap();
        assert_eq!(a.len(), 1000);
        let ids: std::collections::HashSet<_> = a.iter().map(|x| x.id()).collect();
        assert_eq!(ids.len(), 1000);
        for x in &a {
            let (lat, lon) = x.position().coords();
            assert!(BoundingBox::NEW_YORK.contains(lat, lon));
            assert_eq!(x.velocity(), TAXI_VELOCITY);
            assert_eq!(x.travel_budget(), None);
        }
        assert_eq!(
            a,
            make_taxi_fleet(1000, &BoundingBox::NEW_YORK, TAXI_VELOCITY, 5).unwrap()
        );
        assert!(make_taxi_fleet(0, &BoundingBox::NEW_YORK, TAXI_VELOCITY, 5).is_err());
    }
}
