//! pn+q co-located agents (q ∈ {1, 2}) on 1-bounded 1-interval connected graphs.
//!
//! Round 1 splits the agents by ID rank into n groups: n−1 groups of p and a
//! last group of p+q. The groups then run the n+1 machine as single agents
//! named by their group index and settle whole. A group left over when its
//! counters run out, together with the q reserve agents of the last group,
//! runs the machine again on real agents, filling nodes up to p. At most q
//! agents are left over; two of them on one node split through ports 0 and 1.

use serde::{Deserialize, Serialize};

use super::label::GroupLabel;
use super::machine::{Machine, MachineParams, Member, NodeView, Records, RootedState};
use super::{node_view, termination_round};
use crate::engine::{
    bits_for, ceil_log2, AgentId, Algorithm, Communication, ModelSpec, MoveIntent, Observation, Peer, Transition,
    Visibility,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PnqPhase {
    /// Before the round-1 grouping.
    Start,
    /// Part of a group acting as one agent.
    Group,
    /// The group's counters ran out; waiting to rejoin as a single agent.
    Waiting,
    /// Running the machine as itself.
    Active,
    /// Left over after the last machine run.
    Parked,
    /// Made its last move; terminates next round.
    Finishing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PnqState {
    pub r: u64,
    pub p: u64,
    pub q: u64,
    /// Group index in 1..=n once assigned.
    pub id1: Option<u32>,
    /// One of the q smallest IDs of the last group; leaves it after round T+2.
    pub reserve: bool,
    pub phase: PnqPhase,
    pub machine: RootedState,
    /// Bookkeeping for the second machine run, held by agents settled as a group.
    pub records3: Records,
}

/// `(p, q)` with `k = p·n + q` and `q ∈ {1, 2}`, if any.
pub fn split_pq(n: usize, k: usize) -> Option<(u64, u64)> {
    if n == 0 || k == 0 {
        return None;
    }
    let (mut p, mut q) = (k / n, k % n);
    if q == 0 {
        p -= 1;
        q = n;
    }
    (q == 1 || q == 2).then_some((p as u64, q as u64))
}

/// Round by which every agent has terminated: T + 2 + 8n² + 128n⁴⌈log₂ max(n, p)⌉.
pub fn pnq_deadline(n: usize, p: u64) -> u64 {
    let nn = n as u64;
    termination_round(n) + 2 + 8 * nn * nn + 128 * nn.pow(4) * ceil_log2(nn.max(p))
}

#[derive(Clone, Debug)]
pub struct Pnq {
    n: usize,
    group_machine: Machine,
    t: u64,
}

impl Pnq {
    pub fn new(n: usize) -> Self {
        Pnq {
            n,
            group_machine: Machine::new(MachineParams::new(n, 1)),
            t: termination_round(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn agent_machine(&self, p: u64, q: u64) -> Machine {
        let mut params = MachineParams::new(self.n, p as usize);
        params.halt_at_most = q as usize;
        params.halt_on_clean = true;
        Machine::new(params)
    }

    /// Groups at the node, one member per group index.
    fn group_view<'a>(&self, degree: usize, peers: &'a [Peer<'a, PnqState>]) -> NodeView<'a> {
        let mut members: Vec<Member<'a>> = Vec::new();
        for p in peers.iter().filter(|p| !p.terminated && p.state.phase == PnqPhase::Group) {
            let st = p.state;
            let (Some(id1), false) = (st.id1, st.machine.halted) else {
                continue;
            };
            let id = id1 as AgentId;
            if members.iter().any(|m| m.id == id) {
                continue;
            }
            let records = st.machine.settled.then_some(&st.machine.stored);
            members.push(Member {
                id,
                state: &st.machine,
                records,
            });
        }
        members.sort_by_key(|m| m.id);
        NodeView { degree, members }
    }

    /// Real agents taking part in the second machine run.
    fn agent_view<'a>(&self, degree: usize, peers: &'a [Peer<'a, PnqState>]) -> NodeView<'a> {
        node_view(
            degree,
            peers.iter().filter(|p| !p.terminated).map(|p| (p.id, p.state)),
            |st: &PnqState| match st.phase {
                PnqPhase::Group if st.machine.settled && !st.reserve => Some((&st.machine, Some(&st.records3))),
                PnqPhase::Active if st.machine.settled => Some((&st.machine, Some(&st.machine.stored))),
                PnqPhase::Active if st.machine.is_active() => Some((&st.machine, None)),
                _ => None,
            },
        )
    }

    fn start(&self, obs: &Observation<'_, PnqState, ()>, mut s: PnqState) -> Transition<PnqState> {
        let here = obs.colocated();
        let Some((p, q)) = split_pq(self.n, here.len()) else {
            return Transition::terminate(s);
        };
        s.p = p;
        s.q = q;
        let rank = here.iter().position(|x| x.id == obs.me()).unwrap_or(0);
        if p == 0 {
            if q == 1 || rank >= 2 {
                return Transition::terminate(s);
            }
            s.phase = PnqPhase::Finishing;
            return split_pair(s, rank, obs.degree());
        }
        let j = (rank as u64 / p + 1).min(self.n as u64);
        s.id1 = Some(j as u32);
        s.reserve = j == self.n as u64 && (rank as u64) < (self.n as u64 - 1) * p + q;
        s.phase = PnqPhase::Group;
        Transition::stay(s)
    }

    fn parked(&self, obs: &Observation<'_, PnqState, ()>, mut s: PnqState) -> Transition<PnqState> {
        let here = obs.colocated();
        let view = self.agent_view(obs.degree(), here);
        let settled = view.settled_count() as u64;
        if settled < s.p {
            s.phase = PnqPhase::Active;
            s.machine.settled = true;
            s.machine.halted = false;
            s.machine.stored = view.keeper_records().cloned().unwrap_or_default();
            return Transition::stay(s);
        }
        let extras: Vec<AgentId> = here
            .iter()
            .filter(|x| !x.terminated && x.state.phase == PnqPhase::Parked)
            .map(|x| x.id)
            .collect();
        let rank = extras.iter().position(|&id| id == obs.me()).unwrap_or(0);
        if extras.len() >= 2 && settled + extras.len() as u64 >= s.p + 2 && rank < 2 {
            s.phase = PnqPhase::Finishing;
            return split_pair(s, rank, obs.degree());
        }
        Transition::stay(s)
    }
}

/// Rank 0 takes port 0 and rank 1 port 1; on a leaf rank 0 stays and rank 1 takes port 0.
fn split_pair(s: PnqState, rank: usize, degree: usize) -> Transition<PnqState> {
    let port = match (rank, degree) {
        (_, 0) | (0, 1) => return Transition::stay(s),
        (0, _) => 0,
        (_, 1) => 0,
        _ => 1,
    };
    Transition::go(s, port)
}

impl Algorithm for Pnq {
    type State = PnqState;
    type Message = ();

    fn name(&self) -> &'static str {
        "pnq"
    }

    fn requirements(&self) -> ModelSpec {
        ModelSpec::new(Visibility::ZeroHop, Communication::F2f)
    }

    fn initial_state(&self, _id: AgentId) -> PnqState {
        PnqState {
            r: 0,
            p: 0,
            q: 0,
            id1: None,
            reserve: false,
            phase: PnqPhase::Start,
            machine: RootedState::default(),
            records3: Records::default(),
        }
    }

    fn transition(&self, obs: &Observation<'_, PnqState, ()>) -> Transition<PnqState> {
        let st = obs.state();
        let mut s = st.clone();
        s.r += 1;
        if s.phase == PnqPhase::Start {
            return self.start(obs, s);
        }
        if s.r >= pnq_deadline(self.n, s.p) || s.phase == PnqPhase::Finishing {
            return Transition::terminate(s);
        }
        let aligned = s.r % 2 == 0;
        let degree = obs.degree();
        let here = obs.colocated();
        match s.phase {
            PnqPhase::Start | PnqPhase::Finishing => unreachable!("handled above"),
            PnqPhase::Group if st.machine.settled => {
                let gv = self.group_view(degree, here);
                s.machine.stored = self.group_machine.keeper(&st.machine.stored, &gv);
                if s.reserve {
                    if s.r >= self.t + 2 && aligned {
                        s.reserve = false;
                        s.phase = PnqPhase::Active;
                        s.machine = second_run_state(true, true);
                    }
                } else {
                    let av = self.agent_view(degree, here);
                    s.records3 = self.agent_machine(s.p, s.q).keeper(&st.records3, &av);
                }
                Transition::stay(s)
            }
            PnqPhase::Group => {
                let gv = self.group_view(degree, here);
                let id1 = st.id1.unwrap_or(0) as AgentId;
                let step = self
                    .group_machine
                    .step(id1, &st.machine, &gv, obs.last_move_success(), obs.arrival_port());
                s.machine = step.state;
                if s.machine.halted {
                    s.phase = PnqPhase::Waiting;
                    s.reserve = false;
                }
                Transition {
                    state: s,
                    intent: step.intent,
                    terminated: false,
                }
            }
            PnqPhase::Waiting => {
                let last_group = st.id1 == Some(self.n as u32);
                if (last_group || s.r >= self.t + 2) && aligned {
                    s.phase = PnqPhase::Active;
                    // alone when the last group is left over, otherwise alongside the reserves
                    s.machine = second_run_state(false, !last_group);
                }
                Transition::stay(s)
            }
            PnqPhase::Active => {
                let m = self.agent_machine(s.p, s.q);
                let av = self.agent_view(degree, here);
                if st.machine.settled {
                    s.machine.stored = m.keeper(&st.machine.stored, &av);
                    return Transition::stay(s);
                }
                let step = m.step(obs.me(), &st.machine, &av, obs.last_move_success(), obs.arrival_port());
                s.machine = step.state;
                if s.machine.halted {
                    s.phase = PnqPhase::Parked;
                }
                let intent = if s.machine.halted { MoveIntent::Stay } else { step.intent };
                Transition {
                    state: s,
                    intent,
                    terminated: false,
                }
            }
            PnqPhase::Parked => self.parked(obs, s),
        }
    }

    fn memory_bits(&self, s: &PnqState) -> u64 {
        let horizon = pnq_deadline(self.n, s.p);
        bits_for(horizon)
            + bits_for(s.p)
            + 2
            + bits_for(self.n as u64)
            + 1
            + 3
            + self.group_machine.memory_bits(&s.machine, horizon)
            + s.records3.bits(bits_for(self.n as u64))
    }

    fn is_settled(&self, s: &PnqState) -> bool {
        s.machine.settled && !s.reserve
    }
}

/// Fresh machine for the second run, labelled "110" for the leftover group
/// and "111" for the reserves. With two groups from the start there is no
/// first-failure split.
fn second_run_state(reserve: bool, paired: bool) -> RootedState {
    let mut l = GroupLabel::empty();
    l.push(true);
    l.push(true);
    l.push(reserve);
    let mut s = RootedState::with_label(l);
    s.divide = paired;
    s
}
