//! Path-level variation: single-point crossover on shared nodes, and
//! neighbor-pivot mutation rebuilt from breadth-first shortest paths.

use rand::Rng;

use crate::topology::{NodeId, Path, RouteQuery, Topology};

/// Removes cycles: on revisiting a node, the walk is cut back to that node's
/// first occurrence.
pub fn remove_loops(nodes: &[NodeId]) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::with_capacity(nodes.len());
    for &n in nodes {
        if let Some(k) = out.iter().position(|&m| m == n) {
            out.truncate(k + 1);
        } else {
            out.push(n);
        }
    }
    out
}

/// Intermediate nodes of `p1` (in `p1` order) that also appear as
/// intermediates of `p2`.
pub fn common_nodes(p1: &Path, p2: &Path) -> Vec<NodeId> {
    let inner = |p: &Path| -> Vec<NodeId> {
        let n = p.nodes();
        if n.len() <= 2 {
            Vec::new()
        } else {
            n[1..n.len() - 1].to_vec()
        }
    };
    let other = inner(p2);
    inner(p1).into_iter().filter(|n| other.contains(n)).collect()
}

/// Swaps suffixes of the parents after `cross`, which must appear in both.
/// Children are loop-repaired; a child that still fails validation is
/// replaced by its own parent.
pub fn crossover_at(topology: &Topology, query: &RouteQuery, p1: &Path, p2: &Path, cross: NodeId) -> (Path, Path) {
    let (Some(i1), Some(i2)) = (
        p1.nodes().iter().position(|&n| n == cross),
        p2.nodes().iter().position(|&n| n == cross),
    ) else {
        return (p1.clone(), p2.clone());
    };
    let splice = |head: &[NodeId], tail: &[NodeId]| -> Vec<NodeId> {
        let raw: Vec<NodeId> = head.iter().chain(tail).copied().collect();
        remove_loops(&raw)
    };
    let c1 = Path::new(splice(&p1.nodes()[..=i1], &p2.nodes()[i2 + 1..]));
    let c2 = Path::new(splice(&p2.nodes()[..=i2], &p1.nodes()[i1 + 1..]));
    let c1 = if topology.validate_path(query, &c1) {
        c1
    } else {
        p1.clone()
    };
    let c2 = if topology.validate_path(query, &c2) {
        c2
    } else {
        p2.clone()
    };
    (c1, c2)
}

/// Picks the cross node uniformly from the common intermediates. With no
/// common node the parents come back unchanged.
pub fn crossover<R: Rng + ?Sized>(
    topology: &Topology,
    query: &RouteQuery,
    p1: &Path,
    p2: &Path,
    rng: &mut R,
) -> (Path, Path) {
    let nc = common_nodes(p1, p2);
    if nc.is_empty() {
        return (p1.clone(), p2.clone());
    }
    let cross = nc[rng.gen_range(0..nc.len())];
    crossover_at(topology, query, p1, p2, cross)
}

/// Rebuilds the route through `pivot` as BFS(s, pivot) joined with
/// BFS(pivot, d). If the two halves share any node besides the pivot, the
/// mutation is cancelled and the parent returned.
pub fn mutate_through(topology: &Topology, query: &RouteQuery, parent: &Path, pivot: NodeId) -> Path {
    let (Some(r1), Some(r2)) = (
        topology.hop_shortest_path(query.source, pivot),
        topology.hop_shortest_path(pivot, query.destination),
    ) else {
        return parent.clone();
    };
    if r1[..r1.len() - 1].iter().any(|n| r2.contains(n)) {
        return parent.clone();
    }
    let mut joined = r1;
    joined.extend_from_slice(&r2[1..]);
    let child = Path::new(joined);
    if topology.validate_path(query, &child) {
        child
    } else {
        parent.clone()
    }
}

/// Mutation site `i` uniform over the parent's nodes, pivot `j` uniform over
/// the neighbors of `i`.
pub fn mutate<R: Rng + ?Sized>(topology: &Topology, query: &RouteQuery, parent: &Path, rng: &mut R) -> Path {
    if parent.is_empty() {
        return parent.clone();
    }
    let site = parent.nodes()[rng.gen_range(0..parent.len())];
    let Ok(nbrs) = topology.neighbors(site) else {
        return parent.clone();
    };
    if nbrs.is_empty() {
        return parent.clone();
    }
    let pivot = nbrs[rng.gen_range(0..nbrs.len())];
    mutate_through(topology, query, parent, pivot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{Area, NodeAttrs};

    fn node(x: f64, y: f64) -> NodeAttrs {
        NodeAttrs {
            x,
            y,
            delay: 1.0,
            bandwidth: 1.0,
        }
    }

    fn complete(n: usize) -> Topology {
        let nodes = (0..n).map(|i| node(i as f64 * 0.01, 0.0)).collect();
        Topology::from_nodes(
            Area {
                width: 1.0,
                height: 1.0,
            },
            10.0,
            nodes,
        )
        .unwrap()
    }

    fn diamond() -> Topology {
        Topology::from_nodes(
            Area {
                width: 1.0,
                height: 1.0,
            },
            1.0,
            vec![node(0.0, 0.0), node(1.0, 0.0), node(0.0, 1.0), node(1.0, 1.0)],
        )
        .unwrap()
    }

    fn q(t: &Topology, s: u32, d: u32) -> RouteQuery {
        RouteQuery::new(t, NodeId(s), NodeId(d)).unwrap()
    }

    #[test]
    fn single_point_swap_of_suffixes() {
        let t = complete(10);
        let query = q(&t, 1, 10);
        let p1 = Path::from_ids(&[1, 2, 5, 8, 10]);
        let p2 = Path::from_ids(&[1, 3, 5, 9, 10]);
        assert_eq!(common_nodes(&p1, &p2), vec![NodeId(5)]);
        let (c1, c2) = crossover_at(&t, &query, &p1, &p2, NodeId(5));
        assert_eq!(c1, Path::from_ids(&[1, 2, 5, 9, 10]));
        assert_eq!(c2, Path::from_ids(&[1, 3, 5, 8, 10]));
    }

    #[test]
    fn no_common_nodes_returns_parents() {
        let t = complete(6);
        let query = q(&t, 1, 6);
        let p1 = Path::from_ids(&[1, 2, 6]);
        let p2 = Path::from_ids(&[1, 3, 4, 6]);
        let mut rng = rand::thread_rng();
        assert_eq!(crossover(&t, &query, &p1, &p2, &mut rng), (p1, p2));
    }

    #[test]
    fn repeated_node_is_loop_removed() {
        let t = complete(6);
        let query = q(&t, 1, 6);
        let p1 = Path::from_ids(&[1, 2, 3, 6]);
        let p2 = Path::from_ids(&[1, 3, 2, 6]);
        let (c1, c2) = crossover_at(&t, &query, &p1, &p2, NodeId(2));
        // raw c1 = [1,2,6]; raw c2 = [1,3,2,3,6] -> [1,3,6]
        assert_eq!(c1, Path::from_ids(&[1, 2, 6]));
        assert_eq!(c2, Path::from_ids(&[1, 3, 6]));
    }

    #[test]
    fn loop_removal_cuts_back_to_first_occurrence() {
        let ids = |v: &[u32]| v.iter().map(|&i| NodeId(i)).collect::<Vec<_>>();
        assert_eq!(remove_loops(&ids(&[1, 2, 3, 2, 4])), ids(&[1, 2, 4]));
        assert_eq!(remove_loops(&ids(&[1, 2, 3, 4, 2, 3, 5])), ids(&[1, 2, 3, 5]));
        assert_eq!(remove_loops(&ids(&[1, 2, 3])), ids(&[1, 2, 3]));
    }

    #[test]
    fn mutation_on_diamond() {
        let t = diamond();
        let query = q(&t, 1, 4);
        let parent = Path::from_ids(&[1, 2, 4]);
        // i = 2, j = 1: r1 = [1], r2 = [1, 2, 4]
        assert_eq!(
            mutate_through(&t, &query, &parent, NodeId(1)),
            Path::from_ids(&[1, 2, 4])
        );
        // i = 4, j = 3: r1 = [1, 3], r2 = [3, 4]
        assert_eq!(
            mutate_through(&t, &query, &parent, NodeId(3)),
            Path::from_ids(&[1, 3, 4])
        );
    }

    #[test]
    fn mutation_cancelled_on_shared_node() {
        // 1 - 2 - 3 with a leaf 4 hanging off 2
        let t = Topology::from_nodes(
            Area {
                width: 2.0,
                height: 1.0,
            },
            1.0,
            vec![node(0.0, 0.0), node(1.0, 0.0), node(2.0, 0.0), node(1.0, 1.0)],
        )
        .unwrap();
        let query = q(&t, 1, 3);
        let parent = Path::from_ids(&[1, 2, 3]);
        assert_eq!(mutate_through(&t, &query, &parent, NodeId(4)), parent);
    }

    #[test]
    fn chain_mutation_is_identity() {
        let t = Topology::from_nodes(
            Area {
                width: 2.0,
                height: 1.0,
            },
            1.0,
            vec![node(0.0, 0.0), node(1.0, 0.0), node(2.0, 0.0)],
        )
        .unwrap();
        let query = q(&t, 1, 3);
        let parent = Path::from_ids(&[1, 2, 3]);
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            assert_eq!(mutate(&t, &query, &parent, &mut rng), parent);
        }
    }
}
