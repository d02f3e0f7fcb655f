//! Weak dispersion: every occupied component with a multinode slides one agent
//! toward a hole each round.

use serde::{Deserialize, Serialize};

use super::sv::{build_sv, OccupiedMap, SvTuple};
use crate::engine::{bits_for, AgentId, Algorithm, Communication, ModelSpec, Observation, Transition, Visibility};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakDispState {
    pub id: AgentId,
}

#[derive(Clone, Debug)]
pub struct WeakDisp {
    pub id_bound: u64,
}

impl WeakDisp {
    pub fn new(id_bound: u64) -> Self {
        WeakDisp { id_bound }
    }
}

/// Broadcast rule shared with the balancing algorithm: only the minimum-ID agent of a node speaks.
pub(crate) fn node_summary<S, M>(obs: &Observation<'_, S, M>) -> Option<Vec<SvTuple>> {
    let leader = obs.colocated().first().map(|p| p.id)?;
    if leader != obs.me() {
        return None;
    }
    build_sv(obs)
}

impl Algorithm for WeakDisp {
    type State = WeakDispState;
    type Message = Vec<SvTuple>;

    fn name(&self) -> &'static str {
        "weak_disp"
    }

    fn requirements(&self) -> ModelSpec {
        ModelSpec::new(Visibility::OneHop, Communication::Global)
    }

    fn initial_state(&self, id: AgentId) -> WeakDispState {
        WeakDispState { id }
    }

    fn broadcast(&self, obs: &Observation<'_, WeakDispState, Vec<SvTuple>>) -> Option<Vec<SvTuple>> {
        node_summary(obs)
    }

    fn transition(&self, obs: &Observation<'_, WeakDispState, Vec<SvTuple>>) -> Transition<WeakDispState> {
        let state = obs.state().clone();
        let map = OccupiedMap::from_messages(obs.messages());
        if !map.any_multinode() || !map.any_hole() {
            return Transition::terminate(state);
        }
        match map.slide_plan().into_iter().find(|&(id, _)| id == obs.me()) {
            Some((_, port)) => Transition::go(state, port),
            None => Transition::stay(state),
        }
    }

    fn memory_bits(&self, _state: &WeakDispState) -> u64 {
        bits_for(self.id_bound)
    }
}
