//! Pareto dominance, NSGA, the cumulative non-dominated archive, hypervolume,
//! and the weighted-sum weight sweep.

mod archive;
mod dominance;
mod hypervolume;
mod nsga;
mod sweep;

pub use archive::{ArchiveEntry, ParetoArchive};
pub use dominance::{dominates, nondominated_sort, normalize, shared_fitness, ObjectiveVector};
pub use hypervolume::hypervolume;
pub use nsga::{nsga_evolve, nsga_fitness, ArchiveSnapshot, NsgaParams, NsgaResult, DUMMY_DECAY};
pub use sweep::{sample_weights, weighted_sum_sweep, SweepPoint};

use crate::qos::Constraints;

/// `(d_max + 1, 2, hops_max + 1)`: strictly dominated by every feasible path.
pub fn default_reference(c: &Constraints) -> ObjectiveVector {
    ObjectiveVector(vec![c.d_max + 1.0, 1.0 + 1.0, f64::from(c.hops_max) + 1.0])
}
