//! Footprints, per-round snapshots, journeys and connectivity-class checkers.

mod footprint;
mod journey;
mod snapshot;

pub use footprint::{EdgeId, Footprint, FootprintKind, NodeId, Port};
pub use journey::{
    check_ell_bounded, check_temporal_connectivity, find_journey, find_journey_within, first_ell_violation,
    first_temporal_violation, snapshot_at, Journey,
};
pub use snapshot::{components, hop_distances, is_removable, is_snapshot_connected, missing_edge_count, Snapshot};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid footprint: {0}")]
    InvalidFootprint(String),
    #[error("port {port} out of range at node {node} (degree {degree})")]
    PortOutOfRange { node: NodeId, port: Port, degree: usize },
    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("edge {edge} out of range (m = {m})")]
    EdgeOutOfRange { edge: EdgeId, m: usize },
}

#[cfg(test)]
mod tests;
