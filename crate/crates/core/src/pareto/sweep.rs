use rand::Rng;
use rayon::prelude::*;

use super::dominance::ObjectiveVector;
use crate::error::{Error, Result};
use crate::genetic::{evolve, rng_stream, Chromosome, GaConfig};
use crate::qos::Weights;
use crate::topology::{RouteQuery, Topology};

/// RNG stream reserved for drawing sweep weights.
const WEIGHT_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub sample: usize,
    pub weights: Weights,
    pub best: Chromosome,
    pub objectives: ObjectiveVector,
}

/// Sample 0 is the default triple (0.5, 0.15, 0.35); the rest are drawn
/// uniformly from the 2-simplex.
pub fn sample_weights(seed: u64, n_samples: usize) -> Vec<Weights> {
    let mut rng = rng_stream(seed, WEIGHT_STREAM);
    let mut out = Vec::with_capacity(n_samples);
    if n_samples > 0 {
        out.push(Weights::default());
    }
    while out.len() < n_samples {
        // normalized unit exponentials are Dirichlet(1, 1, 1)
        let e: [f64; 3] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
        let s = e[0] + e[1] + e[2];
        if !(s > 0.0) {
            continue;
        }
        let alpha1 = e[0] / s;
        let alpha2 = e[1] / s;
        out.push(Weights {
            alpha1,
            alpha2,
            alpha3: (1.0 - alpha1 - alpha2).max(0.0),
        });
    }
    out
}

/// Runs [`evolve`] once per weight sample with the same seed and operators.
/// `jobs > 1` fans the runs out over a worker pool; results keep sample order.
pub fn weighted_sum_sweep(
    topology: &Topology,
    query: &RouteQuery,
    config: &GaConfig,
    n_samples: usize,
    jobs: usize,
) -> Result<Vec<SweepPoint>> {
    if n_samples < 1 {
        return Err(Error::param("n_samples must be >= 1"));
    }
    let weights = sample_weights(config.seed, n_samples);
    let run = |(sample, w): (usize, &Weights)| -> Result<SweepPoint> {
        let cfg = GaConfig { weights: *w, ..*config };
        let r = evolve(topology, query, &cfg)?;
        Ok(SweepPoint {
            sample,
            weights: *w,
            objectives: ObjectiveVector::from(&r.best.qos),
            best: r.best,
        })
    };
    if jobs <= 1 {
        weights.iter().enumerate().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::param(format!("worker pool: {e}")))?;
        pool.install(|| weights.par_iter().enumerate().map(run).collect())
    }
}
