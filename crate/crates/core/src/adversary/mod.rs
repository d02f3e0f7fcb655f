//! Snapshot generators: the impossibility constructions, random schedules and a blocking adversary.

mod blocking;
mod path;
mod random;
mod ring;
mod split;

pub use blocking::LargestGroupBlocker;
pub use path::PathSort;
pub use random::{RandomClass, RandomSchedule};
pub use ring::RingOneEdge;
pub use split::{SplitMax, SplitMin};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{AgentId, EngineError, MoveIntent};
use crate::graph::{Footprint, NodeId, Snapshot};

/// Connectivity class an adversary promises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectivityClass {
    Temporal,
    OneBounded,
    EllBounded(usize),
}

/// Variants of the ring and path constructions, named after the model they defeat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    OneHopF2f,
    ZeroHopGlobal,
}

/// Read-only system state at the beginning of a round.
pub struct SystemView<'a> {
    pub round: u64,
    pub n: usize,
    pub k: usize,
    pub ids: &'a [AgentId],
    pub positions: &'a [NodeId],
    pub terminated: &'a [bool],
    pub settled: Vec<bool>,
    pub counts: Vec<usize>,
}

/// Engine forward simulation of one round under a hypothetical snapshot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub positions: Vec<NodeId>,
    pub intents: Vec<Option<MoveIntent>>,
    pub success: Vec<bool>,
}

impl Prediction {
    pub fn counts(&self, n: usize) -> Vec<usize> {
        crate::engine::node_counts(n, &self.positions)
    }
}

/// Side-effect free access to the engine's next step.
pub trait Oracle {
    fn predict(&self, s: &Snapshot) -> Result<Prediction, EngineError>;
}

pub struct Decision {
    pub snapshot: Snapshot,
    pub note: Option<String>,
}

impl Decision {
    pub fn plain(snapshot: Snapshot) -> Self {
        Decision { snapshot, note: None }
    }

    pub fn noted(snapshot: Snapshot, note: impl Into<String>) -> Self {
        Decision {
            snapshot,
            note: Some(note.into()),
        }
    }
}

pub trait Adversary: Send {
    fn name(&self) -> String;

    fn declared_class(&self) -> ConnectivityClass;

    fn next_snapshot(
        &mut self,
        round: u64,
        f: &Footprint,
        view: &SystemView<'_>,
        oracle: &dyn Oracle,
    ) -> Result<Decision, AdversaryError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("adversary precondition violated: {0}")]
    Precondition(String),
    #[error("adversary invariant violated: {0}")]
    ProofInvariant(String),
    #[error("oracle failed: {0}")]
    Oracle(String),
}

fn oracle_predict(oracle: &dyn Oracle, s: &Snapshot) -> Result<Prediction, AdversaryError> {
    oracle.predict(s).map_err(|e| AdversaryError::Oracle(e.to_string()))
}

fn is_clique(f: &Footprint) -> bool {
    f.m() == f.n() * (f.n() - 1) / 2
}

/// Index of the first maximum (or minimum) of `counts` restricted to `nodes`.
fn extreme<I: IntoIterator<Item = NodeId>>(counts: &[usize], nodes: I, max: bool) -> NodeId {
    let mut best: Option<NodeId> = None;
    for v in nodes {
        best = match best {
            None => Some(v),
            Some(b) => {
                let better = if max {
                    counts[v] > counts[b] || (counts[v] == counts[b] && v < b)
                } else {
                    counts[v] < counts[b] || (counts[v] == counts[b] && v < b)
                };
                Some(if better { v } else { b })
            }
        };
    }
    best.expect("non-empty node set")
}

/// Snapshot of a clique footprint made of two cliques on `part` and its complement.
fn two_cliques(f: &Footprint, round: u64, part: &[NodeId]) -> Snapshot {
    let mut inside = vec![false; f.n()];
    for &v in part {
        inside[v] = true;
    }
    let mut s = Snapshot::empty(f, round);
    for (e, &(u, v)) in f.edges().iter().enumerate() {
        if inside[u] == inside[v] {
            s.set(e, true);
        }
    }
    s
}
