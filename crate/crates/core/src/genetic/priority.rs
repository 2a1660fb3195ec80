//! Priority-based encoding: a fixed-length genome with one priority per node
//! (position = node, value = priority), decoded greedily into a path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{NodeId, Path, RouteQuery, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorityChromosome {
    priorities: Vec<u32>,
}

impl PriorityChromosome {
    pub fn new(priorities: Vec<u32>) -> Result<Self> {
        if priorities.contains(&0) {
            return Err(Error::param("priorities must be >= 1"));
        }
        Ok(PriorityChromosome { priorities })
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priorities
    }

    pub fn priority(&self, n: NodeId) -> u32 {
        self.priorities[n.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Route(Path),
    /// The walk got stuck at this node before reaching the destination.
    DeadEnd {
        walked: Path,
    },
}

/// Greedy walk from the source: always step to the unvisited neighbor with
/// the highest priority, smallest id on ties.
pub fn decode_priority(topology: &Topology, query: &RouteQuery, genome: &PriorityChromosome) -> Result<DecodeOutcome> {
    if genome.priorities.len() != topology.node_count() {
        return Err(Error::param(format!(
            "genome has {} loci, topology has {} nodes",
            genome.priorities.len(),
            topology.node_count()
        )));
    }
    let mut visited = vec![false; topology.node_count()];
    let mut walk = vec![query.source];
    visited[query.source.index()] = true;
    let mut cur = query.source;
    while cur != query.destination {
        // Reverse(id): smallest id wins ties
        let next = topology
            .adj(cur)
            .iter()
            .copied()
            .filter(|n| !visited[n.index()])
            .max_by_key(|&n| (genome.priority(n), std::cmp::Reverse(n)));
        match next {
            Some(n) => {
                visited[n.index()] = true;
                walk.push(n);
                cur = n;
            }
            None => {
                return Ok(DecodeOutcome::DeadEnd {
                    walked: Path::new(walk),
                })
            }
        }
    }
    Ok(DecodeOutcome::Route(Path::new(walk)))
}
