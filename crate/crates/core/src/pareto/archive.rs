use serde::{Deserialize, Serialize};

use super::dominance::{dominates_slice, ObjectiveVector};
use crate::qos::QosVector;
use crate::topology::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub path: Path,
    pub qos: QosVector,
    pub objectives: ObjectiveVector,
}

/// Non-dominated set of paths. Entries with identical objective vectors but
/// different paths coexist, since neither dominates the other.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoArchive {
    entries: Vec<ArchiveEntry>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless dominated or already present; evicts members the new
    /// entry dominates. Returns whether the archive changed.
    pub fn insert(&mut self, path: &Path, qos: QosVector) -> bool {
        let objectives = ObjectiveVector::from(&qos);
        for e in &self.entries {
            if e.path == *path || dominates_slice(&e.objectives.0, &objectives.0) {
                return false;
            }
        }
        self.entries
            .retain(|e| !dominates_slice(&objectives.0, &e.objectives.0));
        self.entries.push(ArchiveEntry {
            path: path.clone(),
            qos,
            objectives,
        });
        true
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    /// Entries ordered by (delay, hops, path).
    pub fn sorted_entries(&self) -> Vec<ArchiveEntry> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| {
            a.qos
                .delay
                .total_cmp(&b.qos.delay)
                .then(a.qos.hops.cmp(&b.qos.hops))
                .then_with(|| a.path.cmp(&b.path))
        });
        v
    }

    /// Distinct objective vectors, sorted lexicographically.
    pub fn front(&self) -> Vec<ObjectiveVector> {
        let mut v: Vec<ObjectiveVector> = self.entries.iter().map(|e| e.objectives.clone()).collect();
        v.sort_by(|a, b| cmp_vectors(&a.0, &b.0));
        v.dedup();
        v
    }

    /// Same set of objective vectors (exact float equality).
    pub fn same_front(&self, other: &ParetoArchive) -> bool {
        self.front() == other.front()
    }
}

pub(crate) fn cmp_vectors(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}
