use std::sync::Arc;

use crate::adversary::{Oracle, Prediction, SystemView};
use crate::graph::{Footprint, NodeId, Port, Snapshot};

use super::model::{node_counts, AgentId, Configuration, ModelSpec, MoveIntent};
use super::observe::{Frame, FrameInput};
use super::trace::RoundRecord;
use super::{Algorithm, EngineError};

/// Result of one CCM round computed against a snapshot, not yet committed.
#[derive(Clone, Debug)]
pub struct RoundOutcome<S> {
    /// `None` for agents terminated before the round.
    pub intents: Vec<Option<MoveIntent>>,
    pub success: Vec<bool>,
    pub positions: Vec<NodeId>,
    pub arrival: Vec<Option<Port>>,
    /// `None` where the state is unchanged (terminated agents).
    pub states: Vec<Option<S>>,
    pub terminated: Vec<bool>,
}

/// Resolve all intents simultaneously against `s`.
///
/// New positions, per-agent success flags and arrival ports.
pub type Moves = (Vec<NodeId>, Vec<bool>, Vec<Option<Port>>);

pub fn apply_moves(
    f: &Footprint,
    s: &Snapshot,
    positions: &[NodeId],
    intents: &[Option<MoveIntent>],
) -> Result<Moves, EngineError> {
    let mut next = positions.to_vec();
    let mut success = vec![true; positions.len()];
    let mut arrival = vec![None; positions.len()];
    for (i, intent) in intents.iter().enumerate() {
        let Some(MoveIntent::Move(p)) = *intent else {
            continue;
        };
        let v = positions[i];
        if p >= f.degree(v) {
            return Err(EngineError::PortOutOfRange {
                agent_index: i,
                port: p,
                degree: f.degree(v),
            });
        }
        let e = f.edge_at(v, p);
        if s.is_present(e) {
            let w = f.other_end(e, v);
            next[i] = w;
            arrival[i] = Some(f.port_of(e, w));
        } else {
            success[i] = false;
        }
    }
    Ok((next, success, arrival))
}

/// Engine state between rounds for one algorithm.
pub struct Simulation<A: Algorithm> {
    algo: A,
    footprint: Arc<Footprint>,
    model: ModelSpec,
    ids: Vec<AgentId>,
    positions: Vec<NodeId>,
    states: Vec<A::State>,
    terminated: Vec<bool>,
    last_success: Vec<bool>,
    arrival: Vec<Option<Port>>,
    round: u64,
}

impl<A: Algorithm> Simulation<A> {
    pub fn new(algo: A, footprint: Arc<Footprint>, model: ModelSpec, cfg: &Configuration) -> Result<Self, EngineError> {
        if cfg.n() != footprint.n() {
            return Err(EngineError::Mismatch(format!(
                "configuration has {} nodes, footprint has {}",
                cfg.n(),
                footprint.n()
            )));
        }
        let ids = cfg.ids().to_vec();
        let states = ids.iter().map(|&id| algo.initial_state(id)).collect();
        let k = ids.len();
        Ok(Simulation {
            algo,
            footprint,
            model,
            ids,
            positions: cfg.positions().to_vec(),
            states,
            terminated: vec![false; k],
            last_success: vec![true; k],
            arrival: vec![None; k],
            round: 0,
        })
    }

    pub fn algorithm(&self) -> &A {
        &self.algo
    }

    pub fn footprint(&self) -> &Footprint {
        &self.footprint
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    /// Number of completed rounds.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn ids(&self) -> &[AgentId] {
        &self.ids
    }

    pub fn positions(&self) -> &[NodeId] {
        &self.positions
    }

    pub fn states(&self) -> &[A::State] {
        &self.states
    }

    pub fn terminated(&self) -> &[bool] {
        &self.terminated
    }

    pub fn last_success(&self) -> &[bool] {
        &self.last_success
    }

    pub fn all_terminated(&self) -> bool {
        self.terminated.iter().all(|&t| t)
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::from_parts(self.footprint.n(), self.ids.clone(), self.positions.clone())
    }

    pub fn counts(&self) -> Vec<usize> {
        node_counts(self.footprint.n(), &self.positions)
    }

    pub fn memory_bits(&self) -> Vec<u64> {
        self.states.iter().map(|s| self.algo.memory_bits(s)).collect()
    }

    pub fn settled(&self) -> Vec<bool> {
        self.states.iter().map(|s| self.algo.is_settled(s)).collect()
    }

    pub fn system_view(&self) -> SystemView<'_> {
        SystemView {
            round: self.round + 1,
            n: self.footprint.n(),
            k: self.ids.len(),
            ids: &self.ids,
            positions: &self.positions,
            terminated: &self.terminated,
            settled: self.settled(),
            counts: self.counts(),
        }
    }

    /// Run the Communicate and Compute steps and resolve moves against `s` without committing.
    pub fn compute_round(&self, s: &Snapshot) -> Result<RoundOutcome<A::State>, EngineError> {
        let k = self.ids.len();
        let mut frame: Frame<'_, A::State, A::Message> = Frame::new(FrameInput {
            footprint: &self.footprint,
            snapshot: s,
            model: self.model,
            ids: &self.ids,
            positions: &self.positions,
            states: &self.states,
            terminated: &self.terminated,
            last_success: &self.last_success,
            arrival: &self.arrival,
        });
        let mut sent = Vec::new();
        for i in 0..k {
            if !self.terminated[i] {
                if let Some(m) = self.algo.broadcast(&frame.observation(i)) {
                    sent.push((i, m));
                }
            }
        }
        frame.deliver(sent);
        let mut intents = Vec::with_capacity(k);
        let mut states = Vec::with_capacity(k);
        let mut terminated = self.terminated.clone();
        for (i, done) in terminated.iter_mut().enumerate() {
            if *done {
                intents.push(None);
                states.push(None);
                continue;
            }
            let t = self.algo.transition(&frame.observation(i));
            intents.push(Some(t.intent));
            states.push(Some(t.state));
            *done = t.terminated;
        }
        drop(frame);
        let (positions, success, arrival) = apply_moves(&self.footprint, s, &self.positions, &intents)?;
        Ok(RoundOutcome {
            intents,
            success,
            positions,
            arrival,
            states,
            terminated,
        })
    }

    /// Oracle view of [`compute_round`](Self::compute_round).
    pub fn predict(&self, s: &Snapshot) -> Result<Prediction, EngineError> {
        let out = self.compute_round(s)?;
        Ok(Prediction {
            positions: out.positions,
            intents: out.intents,
            success: out.success,
        })
    }

    /// Build the trace record for `outcome` before committing it.
    pub fn record(&self, s: &Snapshot, outcome: &RoundOutcome<A::State>, note: Option<String>) -> RoundRecord {
        let memory_bits = outcome
            .states
            .iter()
            .zip(&self.states)
            .map(|(new, old)| self.algo.memory_bits(new.as_ref().unwrap_or(old)))
            .collect();
        RoundRecord {
            round: self.round + 1,
            present: s.present_edges().collect(),
            before: self.positions.clone(),
            intents: outcome.intents.clone(),
            success: outcome.success.clone(),
            after: outcome.positions.clone(),
            memory_bits,
            terminated: outcome.terminated.clone(),
            note,
        }
    }

    pub fn commit(&mut self, outcome: RoundOutcome<A::State>) {
        for (slot, new) in self.states.iter_mut().zip(outcome.states) {
            if let Some(st) = new {
                *slot = st;
            }
        }
        for i in 0..self.ids.len() {
            if !self.terminated[i] {
                self.last_success[i] = outcome.success[i];
                self.arrival[i] = outcome.arrival[i];
            }
        }
        self.positions = outcome.positions;
        self.terminated = outcome.terminated;
        self.round += 1;
    }

    /// One full round against a given snapshot.
    pub fn step_with(&mut self, s: &Snapshot) -> Result<RoundRecord, EngineError> {
        let out = self.compute_round(s)?;
        let rec = self.record(s, &out, None);
        self.commit(out);
        Ok(rec)
    }
}

impl<A: Algorithm> Oracle for Simulation<A> {
    fn predict(&self, s: &Snapshot) -> Result<Prediction, EngineError> {
        Simulation::predict(self, s)
    }
}
