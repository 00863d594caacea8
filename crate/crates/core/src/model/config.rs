use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MetricSpace;
use crate::error::{Error, Result};

/// Share of the population kept as elite each generation, in percent.
pub const ELITE_PERCENT: usize = 30;

/// How far ahead agents are anticipated to become available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorizonMode {
    /// Look ahead exactly `k` windows.
    Fixed(usize),
    /// Solve for every `k` in `0..=max_k` and keep the best.
    Variable { max_k: usize },
}

impl fmt::Display for HorizonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HorizonMode::Fixed(k) => write!(f, "{k}"),
            HorizonMode::Variable { max_k } => write!(f, "variable:{max_k}"),
        }
    }
}

impl FromStr for HorizonMode {
    type Err = Error;

    /// Accepts `"3"`, `"v"`, `"variable"` (max_k = 5) or `"variable:4"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("bad horizon {s:?}"));
        if let Some(rest) = s.strip_prefix("variable").or_else(|| s.strip_prefix('v')) {
            let max_k = match rest.strip_prefix(':') {
                Some(k) => k.parse().map_err(|_| bad())?,
                None if rest.is_empty() => 5,
                None => return Err(bad()),
            };
            return Ok(HorizonMode::Variable { max_k });
        }
        s.parse().map(HorizonMode::Fixed).map_err(|_| bad())
    }
}

/// Per-agent, per-window cap on newly assigned requests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapacityRule {
    /// `ceil(f * |R|)` requests per agent.
    Fraction(f64),
    Unbounded,
}

impl CapacityRule {
    /// Capacity for a window holding `n_tasks` requests.
    pub fn capacity(&self, n_tasks: usize) -> usize {
        match *self {
            // small slack so that e.g. (1/3) * 9 does not round up to 4
            CapacityRule::Fraction(f) => ((f * n_tasks as f64 - 1e-9).ceil() as usize).max(1),
            CapacityRule::Unbounded => n_tasks.max(1),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            CapacityRule::Fraction(f) if !(f.is_finite() && f > 0.0) => Err(Error::InvalidConfig(
                format!("capacity fraction must be positive, got {f}"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CapacityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapacityRule::Fraction(x) => write!(f, "{x}"),
            CapacityRule::Unbounded => write!(f, "unbounded"),
        }
    }
}

impl FromStr for CapacityRule {
    type Err = Error;

    /// Accepts `"unbounded"`/`"inf"`, a ratio like `"1/3"`, or a decimal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("bad capacity {s:?}"));
        if matches!(s, "unbounded" | "inf" | "infinite" | "none") {
            return Ok(CapacityRule::Unbounded);
        }
        let f = match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().map_err(|_| bad())?;
                let d: f64 = d.trim().parse().map_err(|_| bad())?;
                n / d
            }
            None => s.parse().map_err(|_| bad())?,
        };
        let rule = CapacityRule::Fraction(f);
        rule.validate()?;
        Ok(rule)
    }
}

/// When a GA run stops, besides convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    /// Real elapsed time, in seconds.
    WallClock(f64),
    /// Number of evaluated generations, the initial one included.
    Generations(usize),
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::WallClock(s) => write!(f, "wallclock:{s}"),
            Budget::Generations(n) => write!(f, "generations:{n}"),
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidConfig(format!("bad budget {s:?}"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "wallclock" => value.parse().map(Budget::WallClock).map_err(|_| bad()),
            "generations" | "gen" => value.parse().map(Budget::Generations).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                // numbers are accepted too, e.g. `horizon = 3`
                let v = serde_value::Scalar::deserialize(d)?;
                v.0.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

mod serde_value {
    use serde::de::{self, Deserializer, Visitor};
    use std::fmt;

    pub struct Scalar(pub String);

    impl<'de> serde::Deserialize<'de> for Scalar {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            struct V;
            impl Visitor<'_> for V {
                type Value = Scalar;
                fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                    f.write_str("a string or number")
                }
                fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                    Ok(Scalar(v.to_owned()))
                }
                fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                    Ok(Scalar(v.to_string()))
                }
                fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                    Ok(Scalar(v.to_string()))
                }
                fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                    Ok(Scalar(v.to_string()))
                }
            }
            d.deserialize_any(V)
        }
    }
}

string_serde!(HorizonMode);
string_serde!(CapacityRule);
string_serde!(Budget);

/// Genetic algorithm settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaParams {
    pub population_size: usize,
    pub p_muta: f64,
    pub p_swap: f64,
    pub epsilon: f64,
    pub budget: Budget,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 100,
            p_muta: 0.3,
            p_swap: 0.5,
            epsilon: 1e-6,
            budget: Budget::Generations(300),
        }
    }
}

impl GaParams {
    /// Number of elite chromosomes kept per generation (ceil of 30%).
    pub fn elite_count(&self) -> usize {
        (self.population_size * ELITE_PERCENT).div_ceil(100)
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.population_size < 4 {
            return Err(Error::InvalidConfig(format!(
                "population size must be at least 4, got {}",
                self.population_size
            )));
        }
        if !prob(self.p_muta) || !prob(self.p_swap) {
            return Err(Error::InvalidConfig(format!(
                "mutation probabilities must lie in [0, 1], got p_muta={} p_swap={}",
                self.p_muta, self.p_swap
            )));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        match self.budget {
            Budget::WallClock(s) if !(s.is_finite() && s > 0.0) => Err(Error::InvalidConfig(
                format!("wall-clock budget must be positive, got {s}"),
            )),
            Budget::Generations(0) => Err(Error::InvalidConfig(
                "generation budget must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Validated simulation settings. Build through [`SimConfigBuilder`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SimConfigBuilder")]
pub struct SimConfig {
    delta: f64,
    total_windows: usize,
    alpha: f64,
    horizon: HorizonMode,
    capacity: CapacityRule,
    metric_space: MetricSpace,
    seed: u64,
    ga: GaParams,
}

impl SimConfig {
    pub fn builder() -> SimConfigBuilder {
        SimConfigBuilder::default()
    }

    /// Window duration in seconds.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn total_windows(&self) -> usize {
        self.total_windows
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn horizon(&self) -> HorizonMode {
        self.horizon
    }

    pub fn capacity(&self) -> CapacityRule {
        self.capacity
    }

    pub fn metric_space(&self) -> MetricSpace {
        self.metric_space
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ga(&self) -> &GaParams {
        &self.ga
    }

    /// Same settings with a different horizon; horizons are always valid.
    pub fn with_horizon(&self, horizon: HorizonMode) -> SimConfig {
        SimConfig {
            horizon,
            ..self.clone()
        }
    }

    pub fn with_seed(&self, seed: u64) -> SimConfig {
        SimConfig {
            seed,
            ..self.clone()
        }
    }

    /// Back to an editable builder.
    pub fn to_builder(&self) -> SimConfigBuilder {
        SimConfigBuilder {
            delta: self.delta,
            total_windows: self.total_windows,
            alpha: self.alpha,
            horizon: self.horizon,
            capacity: self.capacity,
            metric_space: self.metric_space,
            seed: self.seed,
            population_size: self.ga.population_size,
            p_muta: self.ga.p_muta,
            p_swap: self.ga.p_swap,
            epsilon: self.ga.epsilon,
            budget: Some(self.ga.budget),
        }
    }
}

/// Unvalidated settings, mirroring [`SimConfig`] field names. This is the
/// shape of the configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfigBuilder {
    pub delta: f64,
    pub total_windows: usize,
    pub alpha: f64,
    pub horizon: HorizonMode,
    pub capacity: CapacityRule,
    pub metric_space: MetricSpace,
    pub seed: u64,
    pub population_size: usize,
    pub p_muta: f64,
    pub p_swap: f64,
    pub epsilon: f64,
    /// `None` means a wall-clock budget of one window duration.
    pub budget: Option<Budget>,
}

impl Default for SimConfigBuilder {
    fn default() -> Self {
        let ga = GaParams::default();
        SimConfigBuilder {
            delta: 5.0,
            total_windows: 30,
            alpha: 0.75,
            horizon: HorizonMode::Fixed(0),
            capacity: CapacityRule::Fraction(1.0 / 3.0),
            metric_space: MetricSpace::Planar,
            seed: 0,
            population_size: ga.population_size,
            p_muta: ga.p_muta,
            p_swap: ga.p_swap,
            epsilon: ga.epsilon,
            budget: None,
        }
    }
}

impl SimConfigBuilder {
    pub fn build(&self) -> Result<SimConfig> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.total_windows == 0 {
            return Err(Error::InvalidConfig(
                "total_windows must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        self.capacity.validate()?;
        let ga = GaParams {
            population_size: self.population_size,
            p_muta: self.p_muta,
            p_swap: self.p_swap,
            epsilon: self.epsilon,
            budget: self.budget.unwrap_or(Budget::WallClock(self.delta)),
        };
        ga.validate()?;
        Ok(SimConfig {
            delta: self.delta,
            total_windows: self.total_windows,
            alpha: self.alpha,
            horizon: self.horizon,
            capacity: self.capacity,
            metric_space: self.metric_space,
            seed: self.seed,
            ga,
        })
    }
}

impl TryFrom<SimConfigBuilder> for SimConfig {
    type Error = Error;

    fn try_from(b: SimConfigBuilder) -> Result<Self> {
        b.build()
    }
}
