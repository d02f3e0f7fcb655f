//! Dispersion of co-located agents on 1-bounded 1-interval connected graphs:
//! the n+1 algorithm and its pn+q extension.

mod label;
mod machine;
mod pnq;

pub use label::GroupLabel;
pub use machine::{Book, DfsMode, Machine, MachineParams, Member, NodeView, Records, RootedState, Step, StoredTriple};
pub use pnq::{pnq_deadline, split_pq, Pnq, PnqPhase, PnqState};

use crate::engine::{
    ceil_log2, AgentId, Algorithm, Communication, ModelSpec, Observation, Transition, Visibility,
};

/// Rounds after which every agent of the n+1 algorithm terminates: 8n² + 128n⁴⌈log₂ n⌉.
pub fn termination_round(n: usize) -> u64 {
    let n = n as u64;
    8 * n * n + 128 * n.pow(4) * ceil_log2(n)
}

/// n+1 co-located agents; each node ends with one agent and one node with two.
#[derive(Clone, Debug)]
pub struct RootedNPlusOne {
    machine: Machine,
    horizon: u64,
}

impl RootedNPlusOne {
    pub fn new(n: usize) -> Self {
        RootedNPlusOne {
            machine: Machine::new(MachineParams::new(n, 1)),
            horizon: termination_round(n),
        }
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }
}

pub(crate) fn node_view<'a, S>(
    degree: usize,
    peers: impl Iterator<Item = (AgentId, &'a S)>,
    project: impl Fn(&'a S) -> Option<(&'a RootedState, Option<&'a Records>)>,
) -> NodeView<'a>
where
    S: 'a,
{
    NodeView {
        degree,
        members: peers
            .filter_map(|(id, s)| project(s).map(|(state, records)| Member { id, state, records }))
            .collect(),
    }
}

impl Algorithm for RootedNPlusOne {
    type State = RootedState;
    type Message = ();

    fn name(&self) -> &'static str {
        "rooted_n_plus_1"
    }

    fn requirements(&self) -> ModelSpec {
        ModelSpec::new(Visibility::ZeroHop, Communication::F2f)
    }

    fn initial_state(&self, _id: AgentId) -> RootedState {
        RootedState::default()
    }

    fn transition(&self, obs: &Observation<'_, RootedState, ()>) -> Transition<RootedState> {
        let st = obs.state();
        if st.r + 1 >= self.horizon {
            let mut s = st.clone();
            s.r += 1;
            return Transition::terminate(s);
        }
        let view = node_view(
            obs.degree(),
            obs.colocated().iter().filter(|p| !p.terminated).map(|p| (p.id, p.state)),
            |s: &RootedState| {
                if s.settled {
                    Some((s, Some(&s.stored)))
                } else if s.halted {
                    None
                } else {
                    Some((s, None))
                }
            },
        );
        if !st.is_active() {
            let mut s = st.clone();
            s.r += 1;
            if s.settled {
                s.stored = self.machine.keeper(&st.stored, &view);
            }
            return Transition::stay(s);
        }
        let step = self
            .machine
            .step(obs.me(), st, &view, obs.last_move_success(), obs.arrival_port());
        Transition {
            state: step.state,
            intent: step.intent,
            terminated: false,
        }
    }

    fn memory_bits(&self, state: &RootedState) -> u64 {
        self.machine.memory_bits(state, self.horizon)
    }

    fn is_settled(&self, state: &RootedState) -> bool {
        state.settled
    }
}
