//! Group DFS machine for co-located agents on a 1-bounded 1-interval connected graph.
//!
//! Unsettled agents run one DFS per group. Group G1 (label ending in 0)
//! retries a blocked edge; group G2 (label ending in 1) re-routes around G1's
//! blocked edge, restarts with a skipped port after `limit2` failures, and
//! gives up after `limit3` restarts. Settled agents hold the DFS bookkeeping
//! (parent port, label, DFS label) for both groups. Odd machine rounds move,
//! even machine rounds read the outcome of the move.

use serde::{Deserialize, Serialize};

use super::label::GroupLabel;
use crate::engine::{bits_for, AgentId, MoveIntent};
use crate::graph::Port;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DfsMode {
    Explore,
    Backtrack,
}

/// A settled agent's record of one group's DFS at its node.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StoredTriple {
    /// Port to the DFS parent; `None` at the DFS root or when unset.
    pub parent: Option<Port>,
    pub label: Option<GroupLabel>,
    pub dfs_label: u64,
}

impl StoredTriple {
    pub fn matches(&self, label: &GroupLabel, dfs_label: u64) -> bool {
        self.label.as_ref() == Some(label) && self.dfs_label == dfs_label
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Records {
    pub g1: StoredTriple,
    pub g2: StoredTriple,
}

impl Records {
    pub fn slot(&self, g2: bool) -> &StoredTriple {
        if g2 {
            &self.g2
        } else {
            &self.g1
        }
    }

    fn slot_mut(&mut self, g2: bool) -> &mut StoredTriple {
        if g2 {
            &mut self.g2
        } else {
            &mut self.g1
        }
    }

    pub fn bits(&self, port_bits: u64) -> u64 {
        [&self.g1, &self.g2]
            .iter()
            .map(|t| port_bits + 1 + t.label.as_ref().map_or(0, |l| l.len() as u64) + bits_for(t.dfs_label))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedState {
    /// Machine rounds taken.
    pub r: u64,
    pub settled: bool,
    /// Stopped for good without settling (group exhausted or done).
    pub halted: bool,
    pub prt_in: Option<Port>,
    pub prt_out: Option<Port>,
    pub mode: DfsMode,
    pub dfs_label: u64,
    pub success: bool,
    pub skip: Option<Port>,
    pub divide: bool,
    pub grp_label: GroupLabel,
    pub count_1: u32,
    pub count_2: u32,
    pub count_3: u32,
    pub stored: Records,
    /// No member of the group settled since the current DFS started.
    pub clean: bool,
}

impl Default for RootedState {
    fn default() -> Self {
        RootedState::with_label(GroupLabel::initial())
    }
}

impl RootedState {
    pub fn with_label(grp_label: GroupLabel) -> Self {
        RootedState {
            r: 0,
            settled: false,
            halted: false,
            prt_in: None,
            prt_out: None,
            mode: DfsMode::Explore,
            dfs_label: 1,
            success: true,
            skip: None,
            divide: false,
            grp_label,
            count_1: 0,
            count_2: 0,
            count_3: 0,
            stored: Records::default(),
            clean: true,
        }
    }

    pub fn in_g2(&self) -> bool {
        self.grp_label.is_g2()
    }

    pub fn is_active(&self) -> bool {
        !self.settled && !self.halted
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineParams {
    pub n: usize,
    /// Settled agents a node takes before it stops counting as free.
    pub quota: usize,
    pub limit1: u32,
    pub limit2: u32,
    pub limit3: u32,
    /// A group this small halts instead of dividing when its counters run out.
    pub halt_at_most: usize,
    /// A group no larger than `halt_at_most` also halts after a complete DFS that settled nobody.
    pub halt_on_clean: bool,
}

impl MachineParams {
    pub fn new(n: usize, quota: usize) -> Self {
        let n2 = (n * n) as u32;
        MachineParams {
            n,
            quota,
            limit1: 16 * n2,
            limit2: 4 * n2,
            limit3: 4 * n2,
            halt_at_most: 1,
            halt_on_clean: false,
        }
    }
}

/// One agent at the node, as the machine sees it.
#[derive(Clone, Copy, Debug)]
pub struct Member<'a> {
    pub id: AgentId,
    pub state: &'a RootedState,
    /// Present exactly for settled members.
    pub records: Option<&'a Records>,
}

/// The agents of one node relevant to the machine, ascending by ID.
#[derive(Clone, Debug)]
pub struct NodeView<'a> {
    pub degree: usize,
    pub members: Vec<Member<'a>>,
}

impl<'a> NodeView<'a> {
    pub fn settled_count(&self) -> usize {
        self.members.iter().filter(|m| m.records.is_some()).count()
    }

    pub fn keeper_records(&self) -> Option<&'a Records> {
        self.members.iter().find_map(|m| m.records)
    }

    pub fn active(&self) -> impl Iterator<Item = &Member<'a>> + '_ {
        self.members.iter().filter(|m| m.records.is_none())
    }

    pub fn group<'s>(&'s self, label: &'s GroupLabel) -> impl Iterator<Item = &'s Member<'a>> + 's {
        self.active().filter(move |m| &m.state.grp_label == label)
    }
}

/// What a settled agent has to write down after a group's odd round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Book {
    None,
    Settled,
    /// First visit of the current DFS: record the parent port.
    ExploreNew {
        parent: Option<Port>,
        label: GroupLabel,
        dfs: u64,
    },
    /// A DFS restarts here.
    Root { label: GroupLabel, dfs: u64 },
    /// The group splits here; both halves root their DFS here.
    Divide { label: GroupLabel, dfs: u64 },
    Halt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub state: RootedState,
    pub intent: MoveIntent,
    pub book: Book,
}

impl Step {
    fn stay(state: RootedState, book: Book) -> Self {
        Step {
            state,
            intent: MoveIntent::Stay,
            book,
        }
    }

    fn go(state: RootedState, port: Port, book: Book) -> Self {
        Step {
            state,
            intent: MoveIntent::Move(port),
            book,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Machine {
    pub params: MachineParams,
}

impl Machine {
    pub fn new(params: MachineParams) -> Self {
        Machine { params }
    }

    /// One round for an active (unsettled, not halted) agent.
    pub fn step(
        &self,
        me: AgentId,
        st: &RootedState,
        view: &NodeView<'_>,
        last_success: bool,
        arrival: Option<Port>,
    ) -> Step {
        let mut s = st.clone();
        s.r += 1;
        if s.r % 2 == 0 {
            s.success = last_success;
            if last_success {
                if let Some(p) = arrival {
                    s.prt_in = Some(p);
                }
            }
            return Step::stay(s, Book::None);
        }
        self.odd(me, s, view)
    }

    /// Whether `id` is among the agents that fill the node this round.
    pub fn settles(&self, id: AgentId, view: &NodeView<'_>) -> bool {
        let have = view.settled_count();
        if have >= self.params.quota {
            return false;
        }
        view.active().take(self.params.quota - have).any(|m| m.id == id)
    }

    /// A settled agent's records after this round's visitors acted.
    pub fn keeper(&self, records: &Records, view: &NodeView<'_>) -> Records {
        let mut rec = records.clone();
        let mut labels: Vec<&GroupLabel> = view.active().map(|m| &m.state.grp_label).collect();
        labels.sort();
        labels.dedup();
        for label in labels {
            let Some(rep) = view.group(label).last() else {
                continue;
            };
            if rep.state.r % 2 == 1 || self.settles(rep.id, view) {
                continue;
            }
            let mut s = rep.state.clone();
            s.r += 1;
            match self.odd(rep.id, s, view).book {
                Book::ExploreNew { parent, label, dfs } => {
                    let g2 = label.is_g2();
                    *rec.slot_mut(g2) = StoredTriple {
                        parent,
                        label: Some(label),
                        dfs_label: dfs,
                    };
                }
                Book::Root { label, dfs } => {
                    let g2 = label.is_g2();
                    *rec.slot_mut(g2) = StoredTriple {
                        parent: None,
                        label: Some(label),
                        dfs_label: dfs,
                    };
                }
                Book::Divide { label, dfs } => {
                    rec.g1 = StoredTriple {
                        parent: None,
                        label: Some(label.with(false)),
                        dfs_label: dfs,
                    };
                    rec.g2 = StoredTriple {
                        parent: None,
                        label: Some(label.with(true)),
                        dfs_label: dfs,
                    };
                }
                Book::None | Book::Settled | Book::Halt => {}
            }
        }
        rec
    }

    /// Port the co-located G1 group tries this round, if it moves.
    fn g1_port(&self, view: &NodeView<'_>) -> Option<Port> {
        let rep = view.active().filter(|m| !m.state.in_g2()).last()?;
        if rep.state.r % 2 == 1 || self.settles(rep.id, view) {
            return None;
        }
        let mut s = rep.state.clone();
        s.r += 1;
        self.odd(rep.id, s, view).intent.port()
    }

    fn odd(&self, me: AgentId, mut s: RootedState, view: &NodeView<'_>) -> Step {
        if self.settles(me, view) {
            s.settled = true;
            let base = view.keeper_records().cloned().unwrap_or_default();
            s.stored = self.keeper(&base, view);
            return Step::stay(s, Book::Settled);
        }
        if view.degree == 0 {
            return Step::stay(s, Book::None);
        }
        if view.settled_count() < self.params.quota {
            // a node below quota is new for every DFS; someone settled here
            s.clean = false;
            s.count_1 = 0;
            s.count_2 = 0;
            return self.new_node(s, view.degree);
        }
        let g2 = s.in_g2();
        if s.success {
            if g2 {
                s.count_2 = 0;
            } else {
                s.count_1 = 0;
            }
            return match s.mode {
                DfsMode::Explore => self.arrive_explore(s, view),
                DfsMode::Backtrack => self.arrive_backtrack(s, view),
            };
        }
        if g2 {
            self.g2_failure(me, s, view)
        } else {
            self.g1_failure(me, s, view)
        }
    }

    fn new_node(&self, mut s: RootedState, deg: usize) -> Step {
        let next = s.prt_in.map_or(0, |p| (p + 1) % deg);
        s.prt_out = Some(next);
        s.mode = if Some(next) == s.prt_in {
            DfsMode::Backtrack
        } else {
            DfsMode::Explore
        };
        let book = Book::ExploreNew {
            parent: s.prt_in,
            label: s.grp_label.clone(),
            dfs: s.dfs_label,
        };
        Step::go(s, next, book)
    }

    fn arrive_explore(&self, mut s: RootedState, view: &NodeView<'_>) -> Step {
        let rec = view.keeper_records().map(|r| r.slot(s.in_g2()));
        match (rec, s.prt_in) {
            (Some(rec), Some(pin)) if rec.matches(&s.grp_label, s.dfs_label) => {
                s.mode = DfsMode::Backtrack;
                s.prt_out = Some(pin);
                Step::go(s, pin, Book::None)
            }
            _ => self.new_node(s, view.degree),
        }
    }

    fn arrive_backtrack(&self, mut s: RootedState, view: &NodeView<'_>) -> Step {
        let deg = view.degree;
        let rec = view.keeper_records().map(|r| r.slot(s.in_g2()));
        let (Some(rec), Some(pin)) = (rec, s.prt_in) else {
            return self.new_node(s, deg);
        };
        match rec.parent {
            None => {
                let mut next = pin + 1;
                if Some(next) == s.skip {
                    next += 1;
                }
                if next >= deg {
                    return self.complete(s, view);
                }
                s.mode = DfsMode::Explore;
                s.prt_out = Some(next);
                Step::go(s, next, Book::None)
            }
            Some(parent) => {
                let next = (pin + 1) % deg;
                s.mode = if next == parent {
                    DfsMode::Backtrack
                } else {
                    DfsMode::Explore
                };
                s.prt_out = Some(next);
                Step::go(s, next, Book::None)
            }
        }
    }

    /// Back at the root with every port tried.
    fn complete(&self, mut s: RootedState, view: &NodeView<'_>) -> Step {
        let size = view.group(&s.grp_label).count();
        if self.params.halt_on_clean && s.clean && size <= self.params.halt_at_most {
            s.halted = true;
            return Step::stay(s, Book::Halt);
        }
        self.fresh_root(s, None, view.degree)
    }

    fn fresh_root(&self, mut s: RootedState, skip: Option<Port>, deg: usize) -> Step {
        s.dfs_label += 1;
        s.skip = skip;
        s.mode = DfsMode::Explore;
        s.clean = true;
        let port = if skip == Some(0) && deg > 1 { 1 } else { 0 };
        s.prt_out = Some(port);
        let book = Book::Root {
            label: s.grp_label.clone(),
            dfs: s.dfs_label,
        };
        Step::go(s, port, book)
    }

    fn retry(&self, s: RootedState) -> Step {
        let port = s.prt_out.unwrap_or(0);
        Step::go(s, port, Book::None)
    }

    fn g1_failure(&self, me: AgentId, mut s: RootedState, view: &NodeView<'_>) -> Step {
        if !s.divide {
            s.divide = true;
            return self.divide(me, s, view);
        }
        s.count_1 += 1;
        if s.count_1 >= self.params.limit1 {
            return self.exhausted(me, s, view);
        }
        self.retry(s)
    }

    fn g2_failure(&self, me: AgentId, mut s: RootedState, view: &NodeView<'_>) -> Step {
        let deg = view.degree;
        let out = s.prt_out.unwrap_or(0);
        if self.g1_port(view) == Some(out) {
            // G1 waits on the same edge: route around it at once; the DFS may now miss nodes
            s.count_2 = 0;
            s.clean = false;
            if s.mode == DfsMode::Backtrack {
                return self.fresh_root(s, Some(out), deg);
            }
            let rec = view.keeper_records().map(|r| r.slot(true));
            match rec.and_then(|r| r.parent) {
                None => {
                    let mut next = out + 1;
                    if Some(next) == s.skip {
                        next += 1;
                    }
                    if next >= deg {
                        return self.fresh_root(s, None, deg);
                    }
                    s.prt_out = Some(next);
                    return Step::go(s, next, Book::None);
                }
                Some(parent) => {
                    let next = (out + 1) % deg;
                    if next == parent {
                        s.mode = DfsMode::Backtrack;
                    }
                    s.prt_out = Some(next);
                    return Step::go(s, next, Book::None);
                }
            }
        }
        s.count_2 += 1;
        if s.count_2 < self.params.limit2 {
            return self.retry(s);
        }
        s.count_2 = 0;
        s.count_3 += 1;
        if s.count_3 < self.params.limit3 {
            return self.fresh_root(s, Some(out), deg);
        }
        self.exhausted(me, s, view)
    }

    fn exhausted(&self, me: AgentId, mut s: RootedState, view: &NodeView<'_>) -> Step {
        let size = view.group(&s.grp_label).count();
        if size > self.params.halt_at_most {
            return self.divide(me, s, view);
        }
        s.halted = true;
        Step::stay(s, Book::Halt)
    }

    /// Split the co-located members of the group: the lower half keeps to G1.
    fn divide(&self, me: AgentId, mut s: RootedState, view: &NodeView<'_>) -> Step {
        let members: Vec<AgentId> = view.group(&s.grp_label).map(|m| m.id).collect();
        let idx = members.iter().position(|&id| id == me).unwrap_or(0);
        let old = s.grp_label.clone();
        s.grp_label.push(idx >= members.len().div_ceil(2));
        s.prt_out = Some(0);
        s.mode = DfsMode::Explore;
        s.skip = None;
        s.dfs_label += 1;
        s.count_1 = 0;
        s.count_2 = 0;
        s.count_3 = 0;
        s.clean = true;
        let book = Book::Divide {
            label: old,
            dfs: s.dfs_label,
        };
        Step::go(s, 0, book)
    }

    /// Persisted width of a machine state; `horizon` bounds the round counter.
    pub fn memory_bits(&self, s: &RootedState, horizon: u64) -> u64 {
        let pb = bits_for(self.params.n as u64);
        bits_for(horizon)
            + 3
            + 2 * pb
            + 1
            + bits_for(s.dfs_label)
            + 1
            + pb
            + 1
            + s.grp_label.len() as u64
            + bits_for(self.params.limit1 as u64)
            + bits_for(self.params.limit2 as u64)
            + bits_for(self.params.limit3 as u64)
            + s.stored.bits(pb)
    }
}
