//! Exhaustive ground truth for small instances, plus a node-weighted
//! Dijkstra baseline for end-to-end delay.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::pareto::ParetoArchive;
use crate::qos::{is_feasible, path_qos, weighted_sum_cost, BandwidthRule, Constraints, Weights, DEFAULT_PENALTY};
use crate::topology::{NodeId, Path, RouteQuery, Topology};

pub const DEFAULT_MAX_NODES: usize = 14;

/// Every simple source-to-destination path, in lexicographic node order.
pub fn enumerate_paths(topology: &Topology, query: &RouteQuery, max_nodes_guard: usize) -> Result<Vec<Path>> {
    if topology.node_count() > max_nodes_guard {
        return Err(Error::Size {
            nodes: topology.node_count(),
            guard: max_nodes_guard,
        });
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; topology.node_count()];
    let mut stack = vec![query.source];
    on_path[query.source.index()] = true;
    extend(topology, query.destination, &mut stack, &mut on_path, &mut out);
    Ok(out)
}

fn extend(t: &Topology, d: NodeId, stack: &mut Vec<NodeId>, on_path: &mut [bool], out: &mut Vec<Path>) {
    let cur = *stack.last().unwrap();
    if cur == d {
        out.push(Path::new(stack.clone()));
        return;
    }
    for &n in t.adj(cur) {
        if on_path[n.index()] {
            continue;
        }
        on_path[n.index()] = true;
        stack.push(n);
        extend(t, d, stack, on_path, out);
        stack.pop();
        on_path[n.index()] = false;
    }
}

/// Minimum weighted-sum cost over feasible paths; ties go to the
/// lexicographically smallest path. `None` when nothing is feasible.
pub fn exact_weighted_optimum(
    topology: &Topology,
    query: &RouteQuery,
    weights: &Weights,
    constraints: &Constraints,
    rule: BandwidthRule,
) -> Result<Option<(Path, f64)>> {
    let mut best: Option<(Path, f64)> = None;
    for p in enumerate_paths(topology, query, DEFAULT_MAX_NODES)? {
        let q = path_qos(topology, &p, rule)?;
        if !is_feasible(&q, constraints) {
            continue;
        }
        let cost = weighted_sum_cost(&q, weights, constraints, DEFAULT_PENALTY);
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((p, cost));
        }
    }
    Ok(best)
}

/// Non-dominated subset of all feasible enumerated paths.
pub fn exact_pareto_front(
    topology: &Topology,
    query: &RouteQuery,
    constraints: &Constraints,
    rule: BandwidthRule,
) -> Result<ParetoArchive> {
    let mut archive = ParetoArchive::new();
    for p in enumerate_paths(topology, query, DEFAULT_MAX_NODES)? {
        let q = path_qos(topology, &p, rule)?;
        if is_feasible(&q, constraints) {
            archive.insert(&p, q);
        }
    }
    Ok(archive)
}

#[derive(PartialEq)]
struct Label {
    delay: f64,
    node: NodeId,
}

impl Eq for Label {}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.delay.total_cmp(&other.delay).then(self.node.cmp(&other.node))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum total node delay, counting both endpoints. Equal-delay
/// predecessors resolve to the smallest id.
pub fn dijkstra_delay(topology: &Topology, query: &RouteQuery) -> Result<(Path, f64)> {
    let n = topology.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev: Vec<Option<NodeId>> = vec![None; n];
    let mut done = vec![false; n];
    let s = query.source;
    dist[s.index()] = topology.node(s)?.delay;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Label {
        delay: dist[s.index()],
        node: s,
    }));
    while let Some(Reverse(Label { delay, node })) = heap.pop() {
        if done[node.index()] {
            continue;
        }
        done[node.index()] = true;
        if node == query.destination {
            break;
        }
        for &v in topology.adj(node) {
            if done[v.index()] {
                continue;
            }
            let cand = delay + topology.nodes()[v.index()].delay;
            let better =
                cand < dist[v.index()] || (cand == dist[v.index()] && prev[v.index()].is_none_or(|p| node < p));
            if better {
                dist[v.index()] = cand;
                prev[v.index()] = Some(node);
                heap.push(Reverse(Label { delay: cand, node: v }));
            }
        }
    }
    let d = query.destination;
    if !done[d.index()] {
        return Err(Error::NoRoute {
            source_id: s.0,
            destination: d.0,
        });
    }
    let mut nodes = vec![d];
    let mut cur = d;
    while let Some(p) = prev[cur.index()] {
        nodes.push(p);
        cur = p;
    }
    nodes.reverse();
    Ok((Path::new(nodes), dist[d.index()]))
}
