//! Deterministic simulator and verification harness for k-balanced dispersion of mobile agents on time-varying graphs.

pub mod adversary;
pub mod algorithms;
pub mod batch;
pub mod engine;
pub mod graph;
pub mod runner;
pub mod scenario;
