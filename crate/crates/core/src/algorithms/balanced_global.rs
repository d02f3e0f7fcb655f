//! k-balanced dispersion from any configuration with one-hop visibility and
//! global communication.
//!
//! Phase 0 runs weak dispersion until no hole is left (or no multinode is, which
//! already means balanced). Phase 1 repeatedly moves one agent from the
//! smallest-named maximum node to the smallest-named minimum node along a
//! shortest path of the current snapshot.

use serde::{Deserialize, Serialize};

use super::sv::{OccupiedMap, SvTuple};
use super::weak_disp::node_summary;
use crate::engine::{bits_for, AgentId, Algorithm, Communication, ModelSpec, Observation, Transition, Visibility};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedGlobalState {
    pub id: AgentId,
    /// `false` while holes may remain, `true` once every node is occupied.
    pub balancing: bool,
}

#[derive(Clone, Debug)]
pub struct BalancedGlobal {
    pub id_bound: u64,
}

impl BalancedGlobal {
    pub fn new(id_bound: u64) -> Self {
        BalancedGlobal { id_bound }
    }
}

/// The balancing route for the round, or `None` when the configuration is balanced.
pub fn balancing_route(map: &OccupiedMap) -> Option<Vec<(AgentId, usize)>> {
    let nodes = map.nodes();
    let n = nodes.len() as u64;
    if n == 0 {
        return None;
    }
    let k: u64 = nodes.iter().map(|s| s.alpha as u64).sum();
    let hi = k.div_ceil(n);
    let lo = k / n;
    let x = nodes.iter().map(|s| s.alpha as u64).max()?;
    let y = nodes.iter().map(|s| s.alpha as u64).min()?;
    if x < hi + 1 && y + 1 > lo {
        return None;
    }
    // nodes are sorted by name, so `find` yields the smallest name
    let from = nodes.iter().find(|s| s.alpha as u64 == x)?.id;
    let to = nodes.iter().find(|s| s.alpha as u64 == y)?.id;
    Some(map.path_between(from, to).unwrap_or_default())
}

impl Algorithm for BalancedGlobal {
    type State = BalancedGlobalState;
    type Message = Vec<SvTuple>;

    fn name(&self) -> &'static str {
        "balanced_global"
    }

    fn requirements(&self) -> ModelSpec {
        ModelSpec::new(Visibility::OneHop, Communication::Global)
    }

    fn initial_state(&self, id: AgentId) -> BalancedGlobalState {
        BalancedGlobalState { id, balancing: false }
    }

    fn broadcast(&self, obs: &Observation<'_, BalancedGlobalState, Vec<SvTuple>>) -> Option<Vec<SvTuple>> {
        node_summary(obs)
    }

    fn transition(&self, obs: &Observation<'_, BalancedGlobalState, Vec<SvTuple>>) -> Transition<BalancedGlobalState> {
        let mut state = obs.state().clone();
        let map = OccupiedMap::from_messages(obs.messages());
        let me = obs.me();
        if !state.balancing {
            if map.any_hole() {
                if !map.any_multinode() {
                    return Transition::terminate(state);
                }
                return match map.slide_plan().into_iter().find(|&(id, _)| id == me) {
                    Some((_, port)) => Transition::go(state, port),
                    None => Transition::stay(state),
                };
            }
            state.balancing = true;
            return Transition::stay(state);
        }
        match balancing_route(&map) {
            None => Transition::terminate(state),
            Some(route) => match route.into_iter().find(|&(id, _)| id == me) {
                Some((_, port)) => Transition::go(state, port),
                None => Transition::stay(state),
            },
        }
    }

    fn memory_bits(&self, _state: &BalancedGlobalState) -> u64 {
        bits_for(self.id_bound) + 1
    }
}
