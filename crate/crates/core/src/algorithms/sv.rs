//! Node summaries broadcast under global communication and the snapshot
//! reconstruction shared by weak dispersion and the balancing algorithm.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::engine::{AgentId, Observation};
use crate::graph::Port;

/// One port of a node as seen by the node's minimum-ID agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SvTuple {
    /// Agents at the node.
    pub alpha: u32,
    /// Minimum agent ID at the node; names the node for everyone.
    pub id_v: AgentId,
    pub port: Port,
    /// Whether the edge behind `port` exists this round.
    pub edge_present: bool,
    /// Minimum agent ID at the neighbor, `None` when the neighbor is a hole.
    pub id_u: Option<AgentId>,
}

/// Build the node summary; `None` without one-hop visibility.
pub fn build_sv<S, M>(obs: &Observation<'_, S, M>) -> Option<Vec<SvTuple>> {
    let nb = obs.neighborhood()?;
    let here = obs.colocated();
    let alpha = here.len() as u32;
    let id_v = here.first().map(|p| p.id).unwrap_or_else(|| obs.me());
    Some(
        (0..nb.degree())
            .map(|port| SvTuple {
                alpha,
                id_v,
                port,
                edge_present: nb.edge_present(port),
                id_u: nb.occupants(port).first().map(|p| p.id),
            })
            .collect(),
    )
}

/// Occupied nodes reconstructed from the round's summaries, sorted by node name.
#[derive(Clone, Debug, Default)]
pub struct OccupiedMap {
    nodes: Vec<NodeSummary>,
}

#[derive(Clone, Debug)]
pub struct NodeSummary {
    pub id: AgentId,
    pub alpha: u32,
    /// Per port: edge present, neighbor name (`None` = hole).
    pub ports: Vec<(bool, Option<AgentId>)>,
}

impl OccupiedMap {
    pub fn from_messages(messages: &[(AgentId, Vec<SvTuple>)]) -> Self {
        let mut nodes: Vec<NodeSummary> = Vec::with_capacity(messages.len());
        for (_, tuples) in messages {
            let Some(first) = tuples.first() else {
                continue;
            };
            let mut ports = vec![(false, None); tuples.len()];
            for t in tuples {
                if t.port < ports.len() {
                    ports[t.port] = (t.edge_present, t.id_u);
                }
            }
            nodes.push(NodeSummary {
                id: first.id_v,
                alpha: first.alpha,
                ports,
            });
        }
        nodes.sort_by_key(|s| s.id);
        nodes.dedup_by_key(|s| s.id);
        OccupiedMap { nodes }
    }

    pub fn nodes(&self) -> &[NodeSummary] {
        &self.nodes
    }

    fn index(&self, id: AgentId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |s| s.id).ok()
    }

    /// Some summary reports a hole neighbor.
    pub fn any_hole(&self) -> bool {
        self.nodes.iter().any(|s| s.ports.iter().any(|p| p.1.is_none()))
    }

    pub fn any_multinode(&self) -> bool {
        self.nodes.iter().any(|s| s.alpha >= 2)
    }

    /// Weak-dispersion slide plan: `(mover ID, port)` pairs.
    ///
    /// Per occupied component, the minimum-ID multinode that reaches a hole
    /// through singly occupied nodes slides along the shortest such path with
    /// the lexicographically smallest port sequence.
    pub fn slide_plan(&self) -> Vec<(AgentId, Port)> {
        let len = self.nodes.len();
        let mut comp = vec![usize::MAX; len];
        let mut comps = 0;
        for start in 0..len {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            comp[start] = comps;
            while let Some(x) = queue.pop_front() {
                for &(present, nbr) in &self.nodes[x].ports {
                    if let (true, Some(id)) = (present, nbr) {
                        if let Some(y) = self.index(id) {
                            if comp[y] == usize::MAX {
                                comp[y] = comps;
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
            comps += 1;
        }
        let mut plan = Vec::new();
        for c in 0..comps {
            // nodes are sorted by id, so this scans multinodes by ascending id
            for m in (0..len).filter(|&x| comp[x] == c && self.nodes[x].alpha >= 2) {
                if let Some(path) = self.path_to_hole(m) {
                    plan.extend(path);
                    break;
                }
            }
        }
        plan
    }

    /// Breadth-first search from multinode `m` through singly occupied nodes to a hole stub.
    fn path_to_hole(&self, m: usize) -> Option<Vec<(AgentId, Port)>> {
        let len = self.nodes.len();
        let mut parent: Vec<Option<(usize, Port)>> = vec![None; len];
        let mut seen = vec![false; len];
        seen[m] = true;
        let mut queue = VecDeque::from([m]);
        while let Some(x) = queue.pop_front() {
            for (port, &(present, nbr)) in self.nodes[x].ports.iter().enumerate() {
                if !present {
                    continue;
                }
                match nbr {
                    None => {
                        let mut moves = vec![(self.nodes[x].id, port)];
                        let mut at = x;
                        while let Some((prev, p)) = parent[at] {
                            moves.push((self.nodes[prev].id, p));
                            at = prev;
                        }
                        moves.reverse();
                        return Some(moves);
                    }
                    Some(id) => {
                        if let Some(y) = self.index(id) {
                            if !seen[y] && self.nodes[y].alpha == 1 {
                                seen[y] = true;
                                parent[y] = Some((x, port));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Shortest path between two named nodes over present edges, smallest port
    /// sequence among shortest ones, as `(mover ID, port)` hops.
    pub fn path_between(&self, from: AgentId, to: AgentId) -> Option<Vec<(AgentId, Port)>> {
        let src = self.index(from)?;
        let dst = self.index(to)?;
        if src == dst {
            return Some(Vec::new());
        }
        let len = self.nodes.len();
        let mut parent: Vec<Option<(usize, Port)>> = vec![None; len];
        let mut seen = vec![false; len];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for (port, &(present, nbr)) in self.nodes[x].ports.iter().enumerate() {
                let (true, Some(id)) = (present, nbr) else {
                    continue;
                };
                let Some(y) = self.index(id) else {
                    continue;
                };
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = Some((x, port));
                if y == dst {
                    let mut moves = Vec::new();
                    let mut at = y;
                    while let Some((prev, p)) = parent[at] {
                        moves.push((self.nodes[prev].id, p));
                        at = prev;
                    }
                    moves.reverse();
                    return Some(moves);
                }
                queue.push_back(y);
            }
        }
        None
    }
}
