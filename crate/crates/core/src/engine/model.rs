use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, Port};

/// Positive agent identifier.
pub type AgentId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    ZeroHop,
    OneHop,
    /// Same observation content as `OneHop`; node identities stay hidden.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Communication {
    F2f,
    LHop(u32),
    Global,
}

impl Communication {
    /// Hop range; `None` is unbounded.
    pub fn range(self) -> Option<u32> {
        match self {
            Communication::F2f => Some(0),
            Communication::LHop(l) => Some(l),
            Communication::Global => None,
        }
    }

    /// True when `self` delivers at least what `other` delivers.
    pub fn covers(self, other: Communication) -> bool {
        match (self.range(), other.range()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a >= b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub visibility: Visibility,
    pub communication: Communication,
}

impl ModelSpec {
    pub const fn new(visibility: Visibility, communication: Communication) -> Self {
        ModelSpec {
            visibility,
            communication,
        }
    }

    /// True when running under `self` gives an algorithm needing `required` all it asks for.
    pub fn satisfies(&self, required: &ModelSpec) -> bool {
        self.visibility >= required.visibility && self.communication.covers(required.communication)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.visibility {
            Visibility::ZeroHop => "zero_hop",
            Visibility::OneHop => "one_hop",
            Visibility::Full => "full",
        };
        match self.communication {
            Communication::F2f => write!(f, "{v}+f2f"),
            Communication::LHop(l) => write!(f, "{v}+l_hop({l})"),
            Communication::Global => write!(f, "{v}+global"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveIntent {
    Stay,
    Move(Port),
}

impl MoveIntent {
    pub fn port(self) -> Option<Port> {
        match self {
            MoveIntent::Stay => None,
            MoveIntent::Move(p) => Some(p),
        }
    }
}

/// Output of one agent's Compute step.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition<S> {
    pub state: S,
    pub intent: MoveIntent,
    pub terminated: bool,
}

impl<S> Transition<S> {
    pub fn stay(state: S) -> Self {
        Transition {
            state,
            intent: MoveIntent::Stay,
            terminated: false,
        }
    }

    pub fn go(state: S, port: Port) -> Self {
        Transition {
            state,
            intent: MoveIntent::Move(port),
            terminated: false,
        }
    }

    pub fn terminate(state: S) -> Self {
        Transition {
            state,
            intent: MoveIntent::Stay,
            terminated: true,
        }
    }
}

/// Placement of agents on nodes at a round boundary.
///
/// Agents are kept in ascending ID order; `positions[i]` is the node of `ids[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    n: usize,
    ids: Vec<AgentId>,
    positions: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigurationError {
    #[error("agent id {0} appears more than once")]
    DuplicateId(AgentId),
    #[error("agent id must be positive")]
    ZeroId,
    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: NodeId, n: usize },
}

impl Configuration {
    /// Build from `(agent, node)` pairs in any order.
    pub fn new(n: usize, agents: impl IntoIterator<Item = (AgentId, NodeId)>) -> Result<Self, ConfigurationError> {
        let mut pairs: Vec<(AgentId, NodeId)> = agents.into_iter().collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ConfigurationError::DuplicateId(w[0].0));
            }
        }
        for &(id, node) in &pairs {
            if id == 0 {
                return Err(ConfigurationError::ZeroId);
            }
            if node >= n {
                return Err(ConfigurationError::NodeOutOfRange { node, n });
            }
        }
        Ok(Configuration {
            n,
            ids: pairs.iter().map(|p| p.0).collect(),
            positions: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Build from a node → agent-list map.
    pub fn from_placement(placement: &[Vec<AgentId>]) -> Result<Self, ConfigurationError> {
        let n = placement.len();
        Self::new(
            n,
            placement
                .iter()
                .enumerate()
                .flat_map(|(v, ids)| ids.iter().map(move |&id| (id, v))),
        )
    }

    /// `k` agents with IDs 1..=k on `node`.
    pub fn rooted(n: usize, k: usize, node: NodeId) -> Result<Self, ConfigurationError> {
        Self::new(n, (1..=k as AgentId).map(|id| (id, node)))
    }

    pub(crate) fn from_parts(n: usize, ids: Vec<AgentId>, positions: Vec<NodeId>) -> Self {
        Configuration { n, ids, positions }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[AgentId] {
        &self.ids
    }

    pub fn positions(&self) -> &[NodeId] {
        &self.positions
    }

    pub fn node_of(&self, id: AgentId) -> Option<NodeId> {
        self.ids.binary_search(&id).ok().map(|i| self.positions[i])
    }

    /// Ascending agent IDs per node.
    pub fn placement(&self) -> Vec<Vec<AgentId>> {
        let mut out = vec![Vec::new(); self.n];
        for (&id, &v) in self.ids.iter().zip(&self.positions) {
            out[v].push(id);
        }
        out
    }

    pub fn counts(&self) -> Vec<usize> {
        node_counts(self.n, &self.positions)
    }

    pub fn is_balanced(&self) -> bool {
        is_balanced(&self.counts(), self.k())
    }

    pub fn holes(&self) -> usize {
        self.counts().iter().filter(|&&c| c == 0).count()
    }

    pub fn multinodes(&self) -> usize {
        self.counts().iter().filter(|&&c| c >= 2).count()
    }
}

pub fn node_counts(n: usize, positions: &[NodeId]) -> Vec<usize> {
    let mut counts = vec![0; n];
    for &v in positions {
        counts[v] += 1;
    }
    counts
}

/// Every node holds between ⌊k/n⌋ and ⌈k/n⌉ agents.
pub fn is_balanced(counts: &[usize], k: usize) -> bool {
    let n = counts.len();
    if n == 0 {
        return k == 0;
    }
    let lo = k / n;
    let hi = k.div_ceil(n);
    counts.iter().all(|&c| lo <= c && c <= hi)
}
