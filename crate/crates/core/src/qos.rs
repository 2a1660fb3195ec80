//! Path QoS evaluation and the weighted-sum routing cost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{Path, Topology};

/// Additive cost charged once per violated constraint.
pub const DEFAULT_PENALTY: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QosVector {
    /// End-to-end delay in ms: sum over every node on the path.
    pub delay: f64,
    /// Path bandwidth in Mbps, aggregated per [`BandwidthRule`].
    pub bandwidth: f64,
    pub hops: u32,
}

impl QosVector {
    /// Minimization-oriented objectives: `(delay, 1/(1+bandwidth), hops)`.
    pub fn objectives(&self) -> [f64; 3] {
        [self.delay, 1.0 / (1.0 + self.bandwidth), f64::from(self.hops)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl Weights {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        let w = Weights { alpha1, alpha2, alpha3 };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let a = [self.alpha1, self.alpha2, self.alpha3];
        if a.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::param("weights must lie in [0, 1]"));
        }
        if (a.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::param("weights must sum to 1"));
        }
        Ok(())
    }

    pub fn all_positive(&self) -> bool {
        self.alpha1 > 0.0 && self.alpha2 > 0.0 && self.alpha3 > 0.0
    }
}

impl Default for Weights {
    /// Delay 0.5, bandwidth 0.15, hops 0.35.
    fn default() -> Self {
        Weights {
            alpha1: 0.5,
            alpha2: 0.15,
            alpha3: 0.35,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    pub d_max: f64,
    pub b_min: f64,
    pub hops_max: u32,
}

impl Constraints {
    pub fn new(d_max: f64, b_min: f64, hops_max: u32) -> Result<Self> {
        let c = Constraints { d_max, b_min, hops_max };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d_max > 0.0 && self.b_min > 0.0 && self.hops_max > 0) {
            return Err(Error::param("constraints must be strictly positive"));
        }
        Ok(())
    }

    /// Number of violated constraints, 0..=3.
    pub fn violations(&self, q: &QosVector) -> u32 {
        u32::from(q.delay > self.d_max) + u32::from(q.bandwidth < self.b_min) + u32::from(q.hops > self.hops_max)
    }
}

impl Default for Constraints {
    fn default() -> Self {
        Constraints {
            d_max: 50.0,
            b_min: 1.0,
            hops_max: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthRule {
    /// Largest node bandwidth on the path.
    #[default]
    MaxNode,
    /// Smallest node bandwidth on the path (bottleneck).
    BottleneckMin,
}

impl BandwidthRule {
    pub fn cli_name(self) -> &'static str {
        match self {
            BandwidthRule::MaxNode => "max-node",
            BandwidthRule::BottleneckMin => "bottleneck-min",
        }
    }
}

pub fn path_qos(topology: &Topology, path: &Path, rule: BandwidthRule) -> Result<QosVector> {
    if path.is_empty() {
        return Err(Error::Path("empty path".into()));
    }
    for w in path.nodes().windows(2) {
        if !topology.has_edge(w[0], w[1]) {
            return Err(Error::Path(format!("no edge between {} and {}", w[0], w[1])));
        }
    }
    let mut delay = 0.0;
    let mut bandwidth = match rule {
        BandwidthRule::MaxNode => f64::NEG_INFINITY,
        BandwidthRule::BottleneckMin => f64::INFINITY,
    };
    for &n in path.nodes() {
        let a = topology.node(n).map_err(|_| Error::Path(format!("unknown node {n}")))?;
        delay += a.delay;
        bandwidth = match rule {
            BandwidthRule::MaxNode => bandwidth.max(a.bandwidth),
            BandwidthRule::BottleneckMin => bandwidth.min(a.bandwidth),
        };
    }
    Ok(QosVector {
        delay,
        bandwidth,
        hops: path.hops() as u32,
    })
}

/// Inclusive on every bound.
pub fn is_feasible(q: &QosVector, c: &Constraints) -> bool {
    c.violations(q) == 0
}

/// `1 / (1 + b)`: turns bandwidth maximization into minimization.
pub fn bandwidth_transform(b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::param(format!("bandwidth must be > 0, got {b}")));
    }
    Ok(1.0 / (1.0 + b))
}

/// `α1·delay + α2·1/(1+bandwidth) + α3·hops`, plus `penalty` per violated constraint.
///
/// The three terms are combined without normalization.
pub fn weighted_sum_cost(q: &QosVector, w: &Weights, c: &Constraints, penalty: f64) -> f64 {
    let base = w.alpha1 * q.delay + w.alpha2 * (1.0 / (1.0 + q.bandwidth)) + w.alpha3 * f64::from(q.hops);
    base + f64::from(c.violations(q)) * penalty
}

/// `1 / (1 + f)` for non-negative cost `f`.
pub fn cost_to_fitness(f: f64) -> Result<f64> {
    if !(f >= 0.0) {
        return Err(Error::param(format!("cost must be >= 0, got {f}")));
    }
    Ok(1.0 / (1.0 + f))
}
