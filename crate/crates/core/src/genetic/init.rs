use rand::Rng;

use crate::error::{Error, Result};
use crate::topology::{NodeId, Path, RouteQuery, Topology};

/// One randomized depth-first walk from source to destination. At each step
/// the next hop is drawn uniformly among unvisited neighbors; dead ends are
/// backtracked and stay marked, so the walk always terminates.
pub fn random_walk_path<R: Rng + ?Sized>(topology: &Topology, query: &RouteQuery, rng: &mut R) -> Option<Path> {
    let mut visited = vec![false; topology.node_count()];
    let mut stack = vec![query.source];
    visited[query.source.index()] = true;
    let mut open: Vec<NodeId> = Vec::new();
    while let Some(&cur) = stack.last() {
        if cur == query.destination {
            return Some(Path::new(stack));
        }
        open.clear();
        open.extend(topology.adj(cur).iter().copied().filter(|n| !visited[n.index()]));
        if open.is_empty() {
            stack.pop();
        } else {
            let next = open[rng.gen_range(0..open.len())];
            visited[next.index()] = true;
            stack.push(next);
        }
    }
    None
}

/// `count` random simple source-to-destination paths. Duplicates are allowed.
pub fn random_paths<R: Rng + ?Sized>(
    topology: &Topology,
    query: &RouteQuery,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Path>> {
    if !topology.is_connected(query.source, query.destination) {
        return Err(Error::NoRoute {
            source_id: query.source.0,
            destination: query.destination.0,
        });
    }
    Ok((0..count)
        .map(|_| random_walk_path(topology, query, rng).expect("connected pair yields a walk"))
        .collect())
}
