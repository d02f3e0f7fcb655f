//! Synchronous Communicate-Compute-Move rounds: observations, move resolution, traces.

mod memory;
mod model;
mod observe;
mod run;
mod sim;
mod trace;

use std::fmt::Debug;

use thiserror::Error;

pub use memory::{bits_for, ceil_log2, port_bits};
pub use model::{
    is_balanced, node_counts, AgentId, Communication, Configuration, ConfigurationError, ModelSpec, MoveIntent,
    Transition, Visibility,
};
pub use observe::{Frame, FrameInput, Neighborhood, Observation, ObservationSummary, Peer};
pub use run::{class_violation, run, run_observed, RunEnd, RunOptions, RunReport, ScheduleSource, StopCondition};
pub use sim::{apply_moves, RoundOutcome, Simulation};
pub use trace::{trace_hash, JsonlSink, NullSink, RoundRecord, Tee, Trace, TraceHasher, TraceHeader, TraceSink};

use crate::adversary::AdversaryError;
use crate::graph::Port;

/// A deterministic agent algorithm.
///
/// `broadcast` runs in the Communicate step on the round's local view; the
/// payloads are delivered in the same round before `transition` runs.
pub trait Algorithm: Send + Sync {
    type State: Clone + Debug + PartialEq + Send + Sync;
    type Message: Clone + Debug + Send + Sync;

    fn name(&self) -> &'static str;

    /// Weakest model the algorithm is correct under.
    fn requirements(&self) -> ModelSpec;

    fn initial_state(&self, id: AgentId) -> Self::State;

    fn broadcast(&self, _obs: &Observation<'_, Self::State, Self::Message>) -> Option<Self::Message> {
        None
    }

    fn transition(&self, obs: &Observation<'_, Self::State, Self::Message>) -> Transition<Self::State>;

    /// Width of the persisted state, fields at minimal width for their declared range.
    fn memory_bits(&self, state: &Self::State) -> u64;

    fn is_settled(&self, _state: &Self::State) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("agent #{agent_index} chose port {port} at a node of degree {degree}")]
    PortOutOfRange { agent_index: usize, port: Port, degree: usize },
    #[error("inconsistent input: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error("trace i/o: {0}")]
    Io(String),
}
