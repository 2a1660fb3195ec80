//! Wireless mesh network model: a random geometric graph whose nodes carry
//! QoS attributes (delay and bandwidth).
//!
//! An edge `{u, v}` exists exactly when the euclidean distance between the
//! two nodes is at most the coverage radius. Every constructor derives the
//! edge set from positions, and the loader rejects documents whose stored
//! edges disagree with that rule.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TOPOLOGY_FORMAT_VERSION: u32 = 1;

/// 1-based node identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        NodeId(i as u32 + 1)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Default for Area {
    fn default() -> Self {
        Area {
            width: 1000.0,
            height: 1000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeAttrs {
    pub x: f64,
    pub y: f64,
    /// Milliseconds, `>= 0`.
    pub delay: f64,
    /// Mbps, `> 0`.
    pub bandwidth: f64,
}

/// Closed sampling intervals for the per-node QoS attributes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttrRanges {
    pub delay_ms: (f64, f64),
    pub bandwidth_mbps: (f64, f64),
}

impl Default for AttrRanges {
    fn default() -> Self {
        AttrRanges {
            delay_ms: (1.0, 10.0),
            bandwidth_mbps: (1.0, 10.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologyParams {
    pub node_count: usize,
    pub area: Area,
    pub coverage_radius: f64,
    pub attr_ranges: AttrRanges,
}

impl Default for TopologyParams {
    fn default() -> Self {
        TopologyParams {
            node_count: 50,
            area: Area::default(),
            coverage_radius: 200.0,
            attr_ranges: AttrRanges::default(),
        }
    }
}

impl TopologyParams {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 2 {
            return Err(Error::param("node_count must be at least 2"));
        }
        if !(self.coverage_radius > 0.0) || !self.coverage_radius.is_finite() {
            return Err(Error::param("coverage_radius must be positive and finite"));
        }
        if !(self.area.width >= 0.0 && self.area.height >= 0.0)
            || !self.area.width.is_finite()
            || !self.area.height.is_finite()
        {
            return Err(Error::param("area dimensions must be finite and non-negative"));
        }
        let (dlo, dhi) = self.attr_ranges.delay_ms;
        if !(dlo >= 0.0 && dlo <= dhi && dhi.is_finite()) {
            return Err(Error::param(format!(
                "delay range [{dlo}, {dhi}] must satisfy 0 <= lo <= hi"
            )));
        }
        let (blo, bhi) = self.attr_ranges.bandwidth_mbps;
        if !(blo > 0.0 && blo <= bhi && bhi.is_finite()) {
            return Err(Error::param(format!(
                "bandwidth range [{blo}, {bhi}] must satisfy 0 < lo <= hi"
            )));
        }
        Ok(())
    }
}

/// Undirected geometric graph. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    area: Area,
    coverage_radius: f64,
    nodes: Vec<NodeAttrs>,
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
}

fn sample_closed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

impl Topology {
    /// Samples node positions uniformly over the area and node attributes
    /// uniformly from `attr_ranges`. The edge set follows from the coverage rule.
    pub fn generate(params: &TopologyParams, seed: u64) -> Result<Topology> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dlo, dhi) = params.attr_ranges.delay_ms;
        let (blo, bhi) = params.attr_ranges.bandwidth_mbps;
        let nodes = (0..params.node_count)
            .map(|_| {
                let x = sample_closed(&mut rng, 0.0, params.area.width);
                let y = sample_closed(&mut rng, 0.0, params.area.height);
                let delay = sample_closed(&mut rng, dlo, dhi);
                let bandwidth = sample_closed(&mut rng, blo, bhi);
                NodeAttrs { x, y, delay, bandwidth }
            })
            .collect();
        Topology::from_nodes(params.area, params.coverage_radius, nodes)
    }

    /// Builds a topology from explicit node attributes, deriving edges from
    /// positions. Node `i` in `nodes` becomes `NodeId(i + 1)`.
    pub fn from_nodes(area: Area, coverage_radius: f64, nodes: Vec<NodeAttrs>) -> Result<Topology> {
        if !(coverage_radius > 0.0) || !coverage_radius.is_finite() {
            return Err(Error::param("coverage_radius must be positive and finite"));
        }
        for (i, n) in nodes.iter().enumerate() {
            let id = i + 1;
            if !(n.x.is_finite() && n.y.is_finite()) {
                return Err(Error::param(format!("node {id}: position must be finite")));
            }
            if n.x < 0.0 || n.x > area.width || n.y < 0.0 || n.y > area.height {
                return Err(Error::param(format!("node {id}: position outside area")));
            }
            if !(n.delay >= 0.0) || !n.delay.is_finite() {
                return Err(Error::param(format!("node {id}: delay must be >= 0")));
            }
            if !(n.bandwidth > 0.0) || !n.bandwidth.is_finite() {
                return Err(Error::param(format!("node {id}: bandwidth must be > 0")));
            }
        }
        let n = nodes.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if within_radius(&nodes[u], &nodes[v], coverage_radius) {
                    adjacency[u].push(NodeId::from_index(v));
                    adjacency[v].push(NodeId::from_index(u));
                    edges.push((NodeId::from_index(u), NodeId::from_index(v)));
                }
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Topology {
            area,
            coverage_radius,
            nodes,
            adjacency,
            edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn area(&self) -> Area {
        self.area
    }

    pub fn coverage_radius(&self) -> f64 {
        self.coverage_radius
    }

    pub fn nodes(&self) -> &[NodeAttrs] {
        &self.nodes
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn contains(&self, n: NodeId) -> bool {
        n.0 >= 1 && n.index() < self.nodes.len()
    }

    pub fn node(&self, n: NodeId) -> Result<&NodeAttrs> {
        if self.contains(n) {
            Ok(&self.nodes[n.index()])
        } else {
            Err(Error::param(format!(
                "node id {n} out of range 1..={}",
                self.nodes.len()
            )))
        }
    }

    /// Neighbor ids of `n` in ascending order.
    pub fn neighbors(&self, n: NodeId) -> Result<&[NodeId]> {
        if self.contains(n) {
            Ok(&self.adjacency[n.index()])
        } else {
            Err(Error::param(format!(
                "node id {n} out of range 1..={}",
                self.nodes.len()
            )))
        }
    }

    /// Unchecked neighbor slice; `n` must be valid.
    pub(crate) fn adj(&self, n: NodeId) -> &[NodeId] {
        &self.adjacency[n.index()]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.contains(u) && self.contains(v) && self.adjacency[u.index()].binary_search(&v).is_ok()
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> f64 {
        let a = &self.nodes[u.index()];
        let b = &self.nodes[v.index()];
        ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
    }

    pub fn is_connected(&self, s: NodeId, d: NodeId) -> bool {
        self.hop_shortest_path(s, d).is_some()
    }

    /// Breadth-first hop-count shortest path. Neighbors are expanded in
    /// ascending id order, so among equal-length paths the one through the
    /// earliest-discovered (smallest id) predecessors wins.
    pub fn hop_shortest_path(&self, from: NodeId, to: NodeId) -> Option<Vec<NodeId>> {
        if !self.contains(from) || !self.contains(to) {
            return None;
        }
        if from == to {
            return Some(vec![from]);
        }
        let n = self.nodes.len();
        let mut parent: Vec<Option<NodeId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[from.index()] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            for &v in self.adj(u) {
                if seen[v.index()] {
                    continue;
                }
                seen[v.index()] = true;
                parent[v.index()] = Some(u);
                if v == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while let Some(p) = parent[cur.index()] {
                        path.push(p);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(v);
            }
        }
        None
    }

    /// Checks every structural [`Path`] invariant against this topology and query.
    pub fn validate_path(&self, query: &RouteQuery, path: &Path) -> bool {
        let nodes = path.nodes();
        let (Some(&first), Some(&last)) = (nodes.first(), nodes.last()) else {
            return false;
        };
        if first != query.source || last != query.destination {
            return false;
        }
        if nodes.iter().any(|&n| !self.contains(n)) {
            return false;
        }
        let mut seen = vec![false; self.nodes.len()];
        for &n in nodes {
            if std::mem::replace(&mut seen[n.index()], true) {
                return false;
            }
        }
        nodes.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }
}

fn within_radius(a: &NodeAttrs, b: &NodeAttrs, radius: f64) -> bool {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt() <= radius
}

/// Ordered node sequence from source to destination; the GA chromosome.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<NodeId>);

impl Path {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Path(nodes)
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        Path(ids.iter().map(|&i| NodeId(i)).collect())
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn hops(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn ids(&self) -> Vec<u32> {
        self.0.iter().map(|n| n.0).collect()
    }
}

impl fmt::Display for Path {
    /// Space-separated ids, e.g. `1 24 26 46 50`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteQuery {
    pub source: NodeId,
    pub destination: NodeId,
}

impl RouteQuery {
    pub fn new(topology: &Topology, source: NodeId, destination: NodeId) -> Result<Self> {
        if source == destination {
            return Err(Error::param("source and destination must differ"));
        }
        topology.node(source)?;
        topology.node(destination)?;
        Ok(RouteQuery { source, destination })
    }

    /// Node 1 to node `node_count`.
    pub fn default_for(topology: &Topology) -> Result<Self> {
        RouteQuery::new(topology, NodeId(1), NodeId(topology.node_count() as u32))
    }
}

// --- persistence ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyDoc {
    version: u32,
    area: Area,
    coverage_radius: f64,
    nodes: Vec<NodeDoc>,
    edges: Vec<[u32; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: u32,
    x: f64,
    y: f64,
    delay_ms: f64,
    bandwidth_mbps: f64,
}

/// Serializes to the versioned JSON topology document. Output is
/// byte-deterministic: nodes sorted by id, edges `u < v` sorted, floats in
/// shortest round-trip form.
pub fn save_topology(t: &Topology) -> Vec<u8> {
    let doc = TopologyDoc {
        version: TOPOLOGY_FORMAT_VERSION,
        area: t.area,
        coverage_radius: t.coverage_radius,
        nodes: t
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| NodeDoc {
                id: i as u32 + 1,
                x: n.x,
                y: n.y,
                delay_ms: n.delay,
                bandwidth_mbps: n.bandwidth,
            })
            .collect(),
        edges: t.edges.iter().map(|&(u, v)| [u.0, v.0]).collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("topology serializes");
    out.push(b'\n');
    out
}

pub fn load_topology(bytes: &[u8]) -> Result<Topology> {
    let doc: TopologyDoc = serde_json::from_slice(bytes).map_err(|e| Error::format("document", e.to_string()))?;
    if doc.version != TOPOLOGY_FORMAT_VERSION {
        return Err(Error::format(
            "version",
            format!("expected {TOPOLOGY_FORMAT_VERSION}, found {}", doc.version),
        ));
    }
    if !(doc.area.width >= 0.0 && doc.area.height >= 0.0) || !doc.area.width.is_finite() || !doc.area.height.is_finite()
    {
        return Err(Error::format("area", "width and height must be finite and >= 0"));
    }
    if !(doc.coverage_radius > 0.0) || !doc.coverage_radius.is_finite() {
        return Err(Error::format("coverage_radius", "must be positive and finite"));
    }
    if doc.nodes.len() < 2 {
        return Err(Error::format("nodes", "at least two nodes are required"));
    }
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.iter().enumerate() {
        let field = |f: &str| format!("nodes[{i}].{f}");
        if n.id as usize != i + 1 {
            return Err(Error::format(
                field("id"),
                format!("expected id {} (ids must be 1..=n in order), found {}", i + 1, n.id),
            ));
        }
        if !n.x.is_finite() || n.x < 0.0 || n.x > doc.area.width {
            return Err(Error::format(field("x"), "outside area"));
        }
        if !n.y.is_finite() || n.y < 0.0 || n.y > doc.area.height {
            return Err(Error::format(field("y"), "outside area"));
        }
        if !(n.delay_ms >= 0.0) || !n.delay_ms.is_finite() {
            return Err(Error::format(field("delay_ms"), "must be >= 0"));
        }
        if !(n.bandwidth_mbps > 0.0) || !n.bandwidth_mbps.is_finite() {
            return Err(Error::format(field("bandwidth_mbps"), "must be > 0"));
        }
        nodes.push(NodeAttrs {
            x: n.x,
            y: n.y,
            delay: n.delay_ms,
            bandwidth: n.bandwidth_mbps,
        });
    }
    let t = Topology::from_nodes(doc.area, doc.coverage_radius, nodes)
        .map_err(|e| Error::format("nodes", e.to_string()))?;

    for (k, w) in doc.edges.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::format(
                format!("edges[{}]", k + 1),
                "edges must be sorted and unique",
            ));
        }
    }
    let stored: Vec<(NodeId, NodeId)> = doc.edges.iter().map(|e| (NodeId(e[0]), NodeId(e[1]))).collect();
    for (k, &(u, v)) in stored.iter().enumerate() {
        if !(u < v) || !t.contains(u) || !t.contains(v) {
            return Err(Error::format(
                format!("edges[{k}]"),
                format!("[{u}, {v}] must satisfy 1 <= u < v <= {}", t.node_count()),
            ));
        }
        if !t.has_edge(u, v) {
            return Err(Error::format(
                format!("edges[{k}]"),
                format!("[{u}, {v}] is farther apart than coverage_radius"),
            ));
        }
    }
    if let Some(&(u, v)) = t.edges.iter().find(|e| stored.binary_search(e).is_err()) {
        return Err(Error::format(
            "edges",
            format!("missing [{u}, {v}], which lies within coverage_radius"),
        ));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(x: f64, y: f64) -> NodeAttrs {
        NodeAttrs {
            x,
            y,
            delay: 1.0,
            bandwidth: 1.0,
        }
    }

    fn chain3() -> Topology {
        Topology::from_nodes(
            Area {
                width: 10.0,
                height: 10.0,
            },
            1.0,
            vec![at(0.0, 0.0), at(1.0, 0.0), at(2.0, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn boundary_distance_is_inclusive() {
        let area = Area::default();
        let t = Topology::from_nodes(area, 200.0, vec![at(0.0, 0.0), at(0.0, 200.0)]).unwrap();
        assert_eq!(t.edges(), &[(NodeId(1), NodeId(2))]);
        let t = Topology::from_nodes(area, 200.0, vec![at(0.0, 0.0), at(0.0, 200.001)]).unwrap();
        assert!(t.edges().is_empty());
    }

    #[test]
    fn neighbors_of_chain_and_isolated() {
        let t = chain3();
        assert_eq!(t.neighbors(NodeId(2)).unwrap(), &[NodeId(1), NodeId(3)]);
        let iso = Topology::from_nodes(Area::default(), 1.0, vec![at(0.0, 0.0), at(500.0, 500.0)]).unwrap();
        assert!(iso.neighbors(NodeId(1)).unwrap().is_empty());
        assert!(matches!(t.neighbors(NodeId(4)), Err(Error::Parameter(_))));
        assert!(matches!(t.neighbors(NodeId(0)), Err(Error::Parameter(_))));
    }

    #[test]
    fn validate_path_rules() {
        let t = chain3();
        let q = RouteQuery::new(&t, NodeId(1), NodeId(3)).unwrap();
        assert!(t.validate_path(&q, &Path::from_ids(&[1, 2, 3])));
        assert!(!t.validate_path(&q, &Path::from_ids(&[1, 3])));
        assert!(!t.validate_path(&q, &Path::from_ids(&[1, 2, 1, 2, 3])));
        assert!(!t.validate_path(&q, &Path::from_ids(&[])));
        assert!(!t.validate_path(&q, &Path::from_ids(&[2, 3])));
        assert!(!t.validate_path(&q, &Path::from_ids(&[1, 2, 9])));
    }

    #[test]
    fn query_rejects_equal_or_unknown_endpoints() {
        let t = chain3();
        assert!(RouteQuery::new(&t, NodeId(1), NodeId(1)).is_err());
        assert!(RouteQuery::new(&t, NodeId(1), NodeId(7)).is_err());
    }

    #[test]
    fn generate_rejects_bad_ranges() {
        let mut p = TopologyParams::default();
        p.attr_ranges.delay_ms = (5.0, 1.0);
        assert!(matches!(Topology::generate(&p, 1), Err(Error::Parameter(_))));
        let mut p = TopologyParams::default();
        p.attr_ranges.bandwidth_mbps = (0.0, 1.0);
        assert!(Topology::generate(&p, 1).is_err());
        let p = TopologyParams {
            node_count: 1,
            ..TopologyParams::default()
        };
        assert!(Topology::generate(&p, 1).is_err());
        let p = TopologyParams {
            coverage_radius: 0.0,
            ..TopologyParams::default()
        };
        assert!(Topology::generate(&p, 1).is_err());
    }

    #[test]
    fn generated_attributes_stay_in_range() {
        let p = TopologyParams::default();
        let t = Topology::generate(&p, 11).unwrap();
        assert_eq!(t.node_count(), 50);
        for n in t.nodes() {
            assert!((0.0..=1000.0).contains(&n.x) && (0.0..=1000.0).contains(&n.y));
            assert!((1.0..=10.0).contains(&n.delay));
            assert!((1.0..=10.0).contains(&n.bandwidth));
        }
    }

    #[test]
    fn bfs_breaks_ties_toward_small_ids() {
        // square: 1=(0,0) 2=(1,0) 3=(0,1) 4=(1,1)
        let t = Topology::from_nodes(
            Area {
                width: 1.0,
                height: 1.0,
            },
            1.0,
            vec![at(0.0, 0.0), at(1.0, 0.0), at(0.0, 1.0), at(1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(
            t.hop_shortest_path(NodeId(1), NodeId(4)).unwrap(),
            vec![NodeId(1), NodeId(2), NodeId(4)]
        );
        assert_eq!(t.hop_shortest_path(NodeId(3), NodeId(3)).unwrap(), vec![NodeId(3)]);
    }

    #[test]
    fn save_is_deterministic_and_round_trips() {
        let t = Topology::generate(&TopologyParams::default(), 5).unwrap();
        let a = save_topology(&t);
        let b = save_topology(&Topology::generate(&TopologyParams::default(), 5).unwrap());
        assert_eq!(a, b);
        assert_eq!(load_topology(&a).unwrap(), t);
    }

    fn doc_with(edit: impl FnOnce(&mut serde_json::Value)) -> Vec<u8> {
        let t = chain3();
        let mut v: serde_json::Value = serde_json::from_slice(&save_topology(&t)).unwrap();
        edit(&mut v);
        serde_json::to_vec(&v).unwrap()
    }

    fn format_field(r: Result<Topology>) -> String {
        match r {
            Err(Error::Format { field, .. }) => field,
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn loader_rejects_missing_edge() {
        let bytes = doc_with(|v| {
            v["edges"].as_array_mut().unwrap().remove(0);
        });
        assert_eq!(format_field(load_topology(&bytes)), "edges");
    }

    #[test]
    fn loader_rejects_spurious_edge() {
        let bytes = doc_with(|v| {
            v["edges"] = serde_json::json!([[1, 2], [1, 3], [2, 3]]);
        });
        assert_eq!(format_field(load_topology(&bytes)), "edges[1]");
    }

    #[test]
    fn loader_rejects_zero_bandwidth() {
        let bytes = doc_with(|v| v["nodes"][1]["bandwidth_mbps"] = 0.0.into());
        assert_eq!(format_field(load_topology(&bytes)), "nodes[1].bandwidth_mbps");
    }

    #[test]
    fn loader_rejects_version_and_ids() {
        let bytes = doc_with(|v| v["version"] = 2.into());
        assert_eq!(format_field(load_topology(&bytes)), "version");
        let bytes = doc_with(|v| v["nodes"][2]["id"] = 9.into());
        assert_eq!(format_field(load_topology(&bytes)), "nodes[2].id");
        assert_eq!(format_field(load_topology(b"{not json")), "document");
    }
}
