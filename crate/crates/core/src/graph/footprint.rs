use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GraphError;

pub type NodeId = usize;
pub type Port = usize;
pub type EdgeId = usize;

/// Generated footprint families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FootprintKind {
    Clique,
    Ring,
    Path,
}

impl fmt::Display for FootprintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FootprintKind::Clique => "clique",
            FootprintKind::Ring => "ring",
            FootprintKind::Path => "path",
        };
        f.write_str(s)
    }
}

/// Static simple graph with an independent port labeling at every node.
///
/// Edges are stored as `(u, v)` with `u < v`. `ports[v][p]` is the edge behind
/// port `p` of node `v`; `edge_ports[e]` holds the label of `e` at each endpoint.
#[derive(Clone, PartialEq, Eq)]
pub struct Footprint {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    ports: Vec<Vec<EdgeId>>,
    edge_ports: Vec<(Port, Port)>,
    lookup: Vec<Option<EdgeId>>,
}

impl fmt::Debug for Footprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Footprint")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Footprint {
    /// Build a footprint with the canonical labeling: ports follow ascending neighbor index.
    pub fn new(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::InvalidFootprint(format!(
                    "edge ({u},{v}) references a node outside 0..{n}"
                )));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self::with_port_order(n, &neighbors)
    }

    /// Build a footprint from per-node neighbor lists given in port order.
    ///
    /// `port_order[v][p]` is the neighbor reached through port `p` of `v`.
    pub fn with_port_order(n: usize, port_order: &[Vec<NodeId>]) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::InvalidFootprint("footprint needs at least one node".into()));
        }
        if port_order.len() != n {
            return Err(GraphError::InvalidFootprint(format!(
                "expected port lists for {n} nodes, got {}",
                port_order.len()
            )));
        }
        let mut edges = Vec::new();
        for (u, list) in port_order.iter().enumerate() {
            for &v in list {
                if v >= n {
                    return Err(GraphError::InvalidFootprint(format!(
                        "node {u} lists neighbor {v} outside 0..{n}"
                    )));
                }
                if v == u {
                    return Err(GraphError::InvalidFootprint(format!("self-loop at node {u}")));
                }
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidFootprint("duplicate edge".into()));
        }
        let mut lookup = vec![None; n * n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            lookup[u * n + v] = Some(e);
            lookup[v * n + u] = Some(e);
        }
        let mut ports = vec![Vec::new(); n];
        let mut edge_ports = vec![(usize::MAX, usize::MAX); edges.len()];
        for (u, list) in port_order.iter().enumerate() {
            for (p, &v) in list.iter().enumerate() {
                let e = lookup[u * n + v].expect("edge registered above");
                ports[u].push(e);
                let slot = &mut edge_ports[e];
                if u == edges[e].0 {
                    slot.0 = p;
                } else {
                    slot.1 = p;
                }
            }
        }
        if edge_ports.iter().any(|&(a, b)| a == usize::MAX || b == usize::MAX) {
            return Err(GraphError::InvalidFootprint(
                "an edge is listed at only one of its endpoints".into(),
            ));
        }
        Ok(Footprint {
            n,
            edges,
            ports,
            edge_ports,
            lookup,
        })
    }

    /// Generated clique, ring or path with canonical ports.
    pub fn make(kind: FootprintKind, n: usize) -> Result<Self, GraphError> {
        let edges: Vec<(NodeId, NodeId)> = match kind {
            FootprintKind::Clique => {
                if n < 2 {
                    return Err(GraphError::InvalidFootprint("clique needs n >= 2".into()));
                }
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
            }
            FootprintKind::Ring => {
                if n < 3 {
                    return Err(GraphError::InvalidFootprint("ring needs n >= 3".into()));
                }
                (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n))).collect()
            }
            FootprintKind::Path => {
                if n < 2 {
                    return Err(GraphError::InvalidFootprint("path needs n >= 2".into()));
                }
                (0..n - 1).map(|u| (u, u + 1)).collect()
            }
        };
        Self::new(n, &edges)
    }

    /// Same graph with every node's port labels shuffled.
    pub fn with_shuffled_ports<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let order: Vec<Vec<NodeId>> = (0..self.n)
            .map(|v| {
                let mut list: Vec<NodeId> = (0..self.degree(v)).map(|p| self.neighbor(v, p)).collect();
                list.shuffle(rng);
                list
            })
            .collect();
        Self::with_port_order(self.n, &order).expect("permuting ports keeps the graph valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.ports[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.ports.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edge behind port `p` of `v`. Panics when out of range.
    pub fn edge_at(&self, v: NodeId, p: Port) -> EdgeId {
        self.ports[v][p]
    }

    /// Other endpoint of port `p` at `v`. Panics when out of range.
    pub fn neighbor(&self, v: NodeId, p: Port) -> NodeId {
        self.other_end(self.ports[v][p], v)
    }

    pub fn neighbor_via_port(&self, v: NodeId, p: Port) -> Result<NodeId, GraphError> {
        if v >= self.n {
            return Err(GraphError::NodeOutOfRange { node: v, n: self.n });
        }
        if p >= self.degree(v) {
            return Err(GraphError::PortOutOfRange {
                node: v,
                port: p,
                degree: self.degree(v),
            });
        }
        Ok(self.neighbor(v, p))
    }

    pub fn other_end(&self, e: EdgeId, v: NodeId) -> NodeId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Label of edge `e` at its endpoint `v`.
    pub fn port_of(&self, e: EdgeId, v: NodeId) -> Port {
        let (a, _) = self.edges[e];
        if a == v {
            self.edge_ports[e].0
        } else {
            self.edge_ports[e].1
        }
    }

    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.lookup[u * self.n + v]
    }

    /// Neighbor lists in port order, the serialized form of the labeling.
    pub fn port_order(&self) -> Vec<Vec<NodeId>> {
        (0..self.n)
            .map(|v| (0..self.degree(v)).map(|p| self.neighbor(v, p)).collect())
            .collect()
    }

    /// True when the labeling equals the canonical ascending-neighbor one.
    pub fn has_canonical_ports(&self) -> bool {
        self.port_order().iter().all(|l| l.windows(2).all(|w| w[0] < w[1]))
    }
}

#[derive(Serialize, Deserialize)]
struct FootprintDoc {
    n: usize,
    ports: Vec<Vec<NodeId>>,
}

impl Serialize for Footprint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FootprintDoc {
            n: self.n,
            ports: self.port_order(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Footprint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = FootprintDoc::deserialize(deserializer)?;
        Footprint::with_port_order(doc.n, &doc.ports).map_err(serde::de::Error::custom)
    }
}
