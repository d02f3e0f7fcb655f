//! Reference strategies without termination guarantees, used as subjects for
//! the impossibility adversaries.

use serde::{Deserialize, Serialize};

use crate::engine::{
    bits_for, AgentId, Algorithm, Communication, ModelSpec, Observation, Transition, Visibility,
};

/// Moves through a pseudo-random port every round and never terminates.
#[derive(Clone, Debug)]
pub struct RandomWalker {
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkerState {
    pub id: AgentId,
    pub r: u64,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomWalker {
    pub fn new(seed: u64) -> Self {
        RandomWalker { seed }
    }
}

impl Algorithm for RandomWalker {
    type State = WalkerState;
    type Message = ();

    fn name(&self) -> &'static str {
        "random_walker"
    }

    fn requirements(&self) -> ModelSpec {
        ModelSpec::new(Visibility::ZeroHop, Communication::F2f)
    }

    fn initial_state(&self, id: AgentId) -> WalkerState {
        WalkerState { id, r: 0 }
    }

    fn transition(&self, obs: &Observation<'_, WalkerState, ()>) -> Transition<WalkerState> {
        let mut state = obs.state().clone();
        state.r += 1;
        let degree = obs.degree() as u64;
        if degree == 0 {
            return Transition::stay(state);
        }
        let port = mix(self.seed ^ mix(state.id ^ mix(state.r))) % degree;
        Transition::go(state, port as usize)
    }

    fn memory_bits(&self, state: &WalkerState) -> u64 {
        bits_for(state.id) + bits_for(state.r)
    }
}

/// The largest-ID agent of a crowded node steps to the least loaded visible
/// neighbor holding at least two agents fewer. Never terminates.
#[derive(Clone, Debug)]
pub struct GreedyHoleSeeker {
    pub id_bound: u64,
}

impl GreedyHoleSeeker {
    pub fn new(id_bound: u64) -> Self {
        GreedyHoleSeeker { id_bound }
    }
}

impl Algorithm for GreedyHoleSeeker {
    type State = AgentId;
    type Message = ();

    fn name(&self) -> &'static str {
        "greedy"
    }

    fn requirements(&self) -> ModelSpec {
        ModelSpec::new(Visibility::OneHop, Communication::F2f)
    }

    fn initial_state(&self, id: AgentId) -> AgentId {
        id
    }

    fn transition(&self, obs: &Observation<'_, AgentId, ()>) -> Transition<AgentId> {
        let state = *obs.state();
        let here = obs.colocated();
        let c = here.len();
        if c < 2 || here.last().map(|p| p.id) != Some(obs.me()) {
            return Transition::stay(state);
        }
        let Some(nb) = obs.neighborhood() else {
            return Transition::stay(state);
        };
        let target = (0..nb.degree())
            .filter(|&p| nb.edge_present(p) && nb.occupants(p).len() + 2 <= c)
            .min_by_key(|&p| (nb.occupants(p).len(), p));
        match target {
            Some(port) => Transition::go(state, port),
            None => Transition::stay(state),
        }
    }

    fn memory_bits(&self, _state: &AgentId) -> u64 {
        bits_for(self.id_bound)
    }
}
