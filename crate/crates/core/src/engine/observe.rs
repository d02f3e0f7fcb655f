use crate::graph::{hop_distances, Footprint, NodeId, Port, Snapshot};

use super::model::{AgentId, Communication, ModelSpec, Visibility};

/// Another agent as seen by an observer: its ID and full persisted state.
#[derive(Debug)]
pub struct Peer<'a, S> {
    pub id: AgentId,
    pub state: &'a S,
    pub terminated: bool,
}

impl<S> Clone for Peer<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for Peer<'_, S> {}

/// Everything the agents can observe in one round, indexed internally by node.
///
/// Observations borrow from a frame; node indices never leave it.
pub struct Frame<'a, S, M> {
    footprint: &'a Footprint,
    snapshot: &'a Snapshot,
    model: ModelSpec,
    ids: &'a [AgentId],
    positions: &'a [NodeId],
    states: &'a [S],
    last_success: &'a [bool],
    arrival: &'a [Option<Port>],
    occupants: Vec<Vec<Peer<'a, S>>>,
    messages: Messages<M>,
}

enum Messages<M> {
    Empty,
    Global(Vec<(AgentId, M)>),
    PerNode(Vec<Vec<(AgentId, M)>>),
}

/// Borrowed inputs of a frame.
pub struct FrameInput<'a, S> {
    pub footprint: &'a Footprint,
    pub snapshot: &'a Snapshot,
    pub model: ModelSpec,
    pub ids: &'a [AgentId],
    pub positions: &'a [NodeId],
    pub states: &'a [S],
    pub terminated: &'a [bool],
    pub last_success: &'a [bool],
    pub arrival: &'a [Option<Port>],
}

impl<'a, S, M: Clone> Frame<'a, S, M> {
    pub fn new(input: FrameInput<'a, S>) -> Self {
        let mut occupants: Vec<Vec<Peer<'a, S>>> = vec![Vec::new(); input.footprint.n()];
        for i in 0..input.ids.len() {
            occupants[input.positions[i]].push(Peer {
                id: input.ids[i],
                state: &input.states[i],
                terminated: input.terminated[i],
            });
        }
        Frame {
            footprint: input.footprint,
            snapshot: input.snapshot,
            model: input.model,
            ids: input.ids,
            positions: input.positions,
            states: input.states,
            last_success: input.last_success,
            arrival: input.arrival,
            occupants,
            messages: Messages::Empty,
        }
    }

    /// Deliver broadcasts `(sender index, payload)` according to the communication model.
    pub fn deliver(&mut self, sent: Vec<(usize, M)>) {
        if sent.is_empty() {
            self.messages = Messages::Empty;
            return;
        }
        match self.model.communication.range() {
            None => {
                self.messages = Messages::Global(sent.into_iter().map(|(i, m)| (self.ids[i], m)).collect());
            }
            Some(range) => {
                let n = self.footprint.n();
                let mut per_node: Vec<Vec<(AgentId, M)>> = vec![Vec::new(); n];
                if range == 0 {
                    for (i, m) in sent {
                        per_node[self.positions[i]].push((self.ids[i], m));
                    }
                } else {
                    let mut dist_cache: Vec<Option<Vec<usize>>> = vec![None; n];
                    for (i, m) in sent {
                        let src = self.positions[i];
                        let dist = dist_cache[src]
                            .get_or_insert_with(|| hop_distances(self.footprint, self.snapshot, src));
                        for (v, bucket) in per_node.iter_mut().enumerate() {
                            if dist[v] <= range as usize && !self.occupants[v].is_empty() {
                                bucket.push((self.ids[i], m.clone()));
                            }
                        }
                    }
                }
                self.messages = Messages::PerNode(per_node);
            }
        }
    }

    pub fn observation(&self, agent: usize) -> Observation<'_, S, M> {
        Observation { frame: self, agent }
    }

    pub fn agent_count(&self) -> usize {
        self.ids.len()
    }
}

/// One agent's view of the current round.
pub struct Observation<'a, S, M> {
    frame: &'a Frame<'a, S, M>,
    agent: usize,
}

impl<'a, S, M> Observation<'a, S, M> {
    fn node(&self) -> NodeId {
        self.frame.positions[self.agent]
    }

    pub fn me(&self) -> AgentId {
        self.frame.ids[self.agent]
    }

    pub fn state(&self) -> &'a S {
        &self.frame.states[self.agent]
    }

    /// Footprint degree of the current node.
    pub fn degree(&self) -> usize {
        self.frame.footprint.degree(self.node())
    }

    /// All agents on the current node in ascending ID order, the observer included.
    pub fn colocated(&self) -> &'a [Peer<'a, S>] {
        &self.frame.occupants[self.node()]
    }

    pub fn last_move_success(&self) -> bool {
        self.frame.last_success[self.agent]
    }

    /// Port of the current node through which the last successful move arrived.
    pub fn arrival_port(&self) -> Option<Port> {
        self.frame.arrival[self.agent]
    }

    /// Per-port presence and neighbor occupants; absent under zero-hop visibility.
    pub fn neighborhood(&self) -> Option<Neighborhood<'a, S>> {
        match self.frame.model.visibility {
            Visibility::ZeroHop => None,
            Visibility::OneHop | Visibility::Full => Some(Neighborhood {
                footprint: self.frame.footprint,
                snapshot: self.frame.snapshot,
                occupants: &self.frame.occupants,
                node: self.node(),
            }),
        }
    }

    /// Messages delivered this round, in sender-ID order.
    pub fn messages(&self) -> &'a [(AgentId, M)] {
        match &self.frame.messages {
            Messages::Empty => &[],
            Messages::Global(all) => all,
            Messages::PerNode(per) => &per[self.node()],
        }
    }

    pub fn model(&self) -> ModelSpec {
        self.frame.model
    }

    /// Owned, comparable copy of everything the observation exposes except states.
    pub fn summary(&self) -> ObservationSummary {
        ObservationSummary {
            me: self.me(),
            degree: self.degree(),
            colocated: self.colocated().iter().map(|p| (p.id, p.terminated)).collect(),
            last_move_success: self.last_move_success(),
            arrival_port: self.arrival_port(),
            neighborhood: self.neighborhood().map(|nb| {
                (0..nb.degree())
                    .map(|p| (nb.edge_present(p), nb.occupants(p).iter().map(|o| o.id).collect()))
                    .collect()
            }),
            senders: self.messages().iter().map(|(id, _)| *id).collect(),
        }
    }
}

/// One-hop view around the observer's node.
pub struct Neighborhood<'a, S> {
    footprint: &'a Footprint,
    snapshot: &'a Snapshot,
    occupants: &'a [Vec<Peer<'a, S>>],
    node: NodeId,
}

impl<'a, S> Neighborhood<'a, S> {
    pub fn degree(&self) -> usize {
        self.footprint.degree(self.node)
    }

    pub fn edge_present(&self, port: Port) -> bool {
        self.snapshot.is_present(self.footprint.edge_at(self.node, port))
    }

    /// Agents on the neighbor behind `port`, ascending by ID.
    pub fn occupants(&self, port: Port) -> &'a [Peer<'a, S>] {
        &self.occupants[self.footprint.neighbor(self.node, port)]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationSummary {
    pub me: AgentId,
    pub degree: usize,
    pub colocated: Vec<(AgentId, bool)>,
    pub last_move_success: bool,
    pub arrival_port: Option<Port>,
    pub neighborhood: Option<Vec<(bool, Vec<AgentId>)>>,
    pub senders: Vec<AgentId>,
}

impl Communication {
    /// Shorthand used in scenario validation messages.
    pub fn label(self) -> String {
        match self {
            Communication::F2f => "f2f".into(),
            Communication::LHop(l) => format!("l_hop({l})"),
            Communication::Global => "global".into(),
        }
    }
}
