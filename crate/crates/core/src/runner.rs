//! Executes scenarios and produces summaries, traces, schedule reports and CSV tables.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::ConnectivityClass;
use crate::algorithms::{BalancedGlobal, GreedyHoleSeeker, Pnq, RandomWalker, RootedNPlusOne, WeakDisp};
use crate::engine::{
    class_violation, is_balanced, run_observed, Algorithm, EngineError, RoundRecord, RunEnd, RunOptions, Simulation,
    StopCondition, Tee, Trace, TraceHasher, TraceHeader, TraceSink,
};
use crate::graph::{first_temporal_violation, Footprint, Snapshot};
use crate::scenario::{AlgorithmSpec, Scenario, ScenarioError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Balanced at a round end with agents still running (stop = balanced).
    Balanced,
    TerminatedBalanced,
    TerminatedUnbalanced,
    Timeout,
    AdversaryClassViolation,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Balanced => "balanced",
            Outcome::TerminatedBalanced => "terminated_balanced",
            Outcome::TerminatedUnbalanced => "terminated_unbalanced",
            Outcome::Timeout => "timeout",
            Outcome::AdversaryClassViolation => "adversary_class_violation",
        }
    }

    pub fn is_balanced(self) -> bool {
        matches!(self, Outcome::Balanced | Outcome::TerminatedBalanced)
    }

    /// Process exit code for the command-line runner.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Balanced | Outcome::TerminatedBalanced => 0,
            Outcome::TerminatedUnbalanced => 1,
            Outcome::Timeout => 2,
            Outcome::AdversaryClassViolation => 4,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of one run. Round counts are engine rounds (one CCM cycle each).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario_id: String,
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub algorithm: String,
    pub adversary: String,
    pub rounds: u64,
    pub outcome: Outcome,
    pub max_memory_bits: u64,
    pub trace_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
    pub final_counts: Vec<usize>,
    /// Per-round series, index `r−1` for round `r`.
    pub holes: Vec<u32>,
    pub multinodes: Vec<u32>,
    pub max_counts: Vec<u32>,
    /// Number of rounds at whose end the configuration was balanced.
    pub balanced_rounds: u64,
    /// First round at whose end the configuration was balanced (0 when balanced from the start).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_balanced: Option<u64>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("i/o: {0}")]
    Io(String),
}

impl RunError {
    /// Validation and adversary precondition failures map to 3, everything else to 5.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Scenario(_) => 3,
            RunError::Engine(EngineError::Adversary(crate::adversary::AdversaryError::Precondition(_))) => 3,
            _ => 5,
        }
    }
}

/// Header of the trace a scenario produces.
pub fn trace_header(sc: &Scenario) -> Result<TraceHeader, RunError> {
    let cfg = sc.build_configuration()?;
    Ok(TraceHeader {
        algorithm: sc.algorithm.name().to_string(),
        n: sc.n(),
        ids: cfg.ids().to_vec(),
    })
}

/// Run with the full trace kept in memory.
pub fn run_experiment(sc: &Scenario) -> Result<(Trace, RunSummary), RunError> {
    let header = trace_header(sc)?;
    let mut records: Vec<RoundRecord> = Vec::new();
    let summary = run_with_sink(sc, &mut records)?;
    let trace = Trace {
        header,
        records,
        timed_out: summary.outcome == Outcome::Timeout,
    };
    Ok((trace, summary))
}

/// Run without keeping records; the digest is still computed.
pub fn run_summary(sc: &Scenario) -> Result<RunSummary, RunError> {
    run_with_sink(sc, &mut crate::engine::NullSink)
}

/// Run streaming every record into `sink`.
pub fn run_with_sink(sc: &Scenario, sink: &mut dyn TraceSink) -> Result<RunSummary, RunError> {
    sc.validate()?;
    let f = Arc::new(sc.build_footprint()?);
    let id_bound = |b: Option<u64>| -> Result<u64, RunError> {
        match b {
            Some(b) => Ok(b),
            None => Ok(sc.max_id()?),
        }
    };
    let n = f.n();
    match sc.algorithm {
        AlgorithmSpec::WeakDisp { id_bound: b } => drive(sc, f, WeakDisp::new(id_bound(b)?), sink),
        AlgorithmSpec::BalancedGlobal { id_bound: b } => drive(sc, f, BalancedGlobal::new(id_bound(b)?), sink),
        AlgorithmSpec::RootedNPlusOne => drive(sc, f, RootedNPlusOne::new(n), sink),
        AlgorithmSpec::Pnq => drive(sc, f, Pnq::new(n), sink),
        AlgorithmSpec::RandomWalker { seed } => drive(sc, f, RandomWalker::new(seed.unwrap_or(sc.seed)), sink),
        AlgorithmSpec::Greedy { id_bound: b } => drive(sc, f, GreedyHoleSeeker::new(id_bound(b)?), sink),
    }
}

fn drive<A: Algorithm>(
    sc: &Scenario,
    f: Arc<Footprint>,
    algo: A,
    sink: &mut dyn TraceSink,
) -> Result<RunSummary, RunError> {
    let header = trace_header(sc)?;
    let cfg = sc.build_configuration()?;
    let mut source = sc.schedule_source(&f)?;
    let mut sim = Simulation::new(algo, f.clone(), sc.model, &cfg)?;
    let opts = RunOptions {
        max_rounds: sc.max_rounds,
        stop: sc.stop,
        keep_schedule: false,
    };
    let mut hasher = TraceHasher::new(&header);
    let mut max_counts: Vec<u32> = Vec::new();
    let mut balanced_rounds = 0u64;
    let mut first_balanced = cfg.is_balanced().then_some(0);
    let report = {
        let mut tee = Tee {
            first: &mut hasher,
            second: sink,
        };
        run_observed(&mut sim, &mut source, &opts, &mut tee, &mut |s, _| {
            let counts = s.counts();
            max_counts.push(counts.iter().copied().max().unwrap_or(0) as u32);
            if is_balanced(&counts, counts.iter().sum()) {
                balanced_rounds += 1;
                first_balanced.get_or_insert(s.round());
            }
        })?
    };
    let final_counts = sim.counts();
    let balanced = is_balanced(&final_counts, sc.k);
    let (outcome, violation) = match report.end {
        RunEnd::Balanced => (Outcome::Balanced, None),
        RunEnd::AllTerminated if balanced => (Outcome::TerminatedBalanced, None),
        RunEnd::AllTerminated => (Outcome::TerminatedUnbalanced, None),
        RunEnd::Timeout => (Outcome::Timeout, None),
        RunEnd::ClassViolation { round, reason } => {
            (Outcome::AdversaryClassViolation, Some(format!("round {round}: {reason}")))
        }
    };
    Ok(RunSummary {
        scenario_id: sc.scenario_id(),
        n: f.n(),
        k: sc.k,
        p: sc.k / f.n(),
        q: sc.k % f.n(),
        algorithm: sc.algorithm.name().to_string(),
        adversary: sc.schedule.label(),
        rounds: report.rounds,
        outcome,
        max_memory_bits: report.max_memory_bits,
        trace_digest: hasher.finish(),
        violation,
        final_counts,
        holes: report.holes,
        multinodes: report.multinodes,
        max_counts,
        balanced_rounds,
        first_balanced,
    })
}

/// Verdict for one round of a schedule prefix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundVerdict {
    pub round: u64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub scenario_id: String,
    /// Checked class; `connected` when the schedule declares none.
    pub class: String,
    /// Rounds the schedule actually produced; shorter than requested if every agent terminated.
    pub realized_rounds: u64,
    pub rounds: Vec<RoundVerdict>,
}

impl ScheduleReport {
    pub fn passed(&self) -> bool {
        self.rounds.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<u64> {
        self.rounds.iter().find(|r| !r.pass).map(|r| r.round)
    }
}

/// Horizon, in rounds, within which the temporal check expects every journey.
pub const TEMPORAL_HORIZON: u64 = 3;

/// Realize `prefix_rounds` snapshots of the scenario's schedule and check each
/// against the declared class. Class violations do not stop the run here.
///
/// Temporal schedules are checked per start round with horizon [`TEMPORAL_HORIZON`];
/// start rounds too close to the end of the prefix are not reported.
pub fn verify_schedule(sc: &Scenario, prefix_rounds: u64) -> Result<ScheduleReport, RunError> {
    let schedule = realize_schedule(sc, prefix_rounds)?;
    let f = sc.build_footprint()?;
    let class = sc.schedule.class();
    let mut rounds = Vec::new();
    let label = match class {
        None => "connected".to_string(),
        Some(ConnectivityClass::Temporal) => format!("temporal(horizon={TEMPORAL_HORIZON})"),
        Some(ConnectivityClass::OneBounded) => "one_bounded".to_string(),
        Some(ConnectivityClass::EllBounded(l)) => format!("ell_bounded({l})"),
    };
    let realized = schedule.len() as u64;
    match class {
        Some(ConnectivityClass::Temporal) => {
            let last_start = realized.saturating_sub(TEMPORAL_HORIZON - 1);
            for r in 1..=last_start {
                let v = first_temporal_violation(&f, &schedule, r..r + 1, TEMPORAL_HORIZON);
                rounds.push(RoundVerdict {
                    round: r,
                    pass: v.is_none(),
                    reason: v.map(|(_, u, w)| format!("no journey from node {u} to node {w}")),
                });
            }
        }
        other => {
            let c = other.unwrap_or(ConnectivityClass::EllBounded(f.m()));
            for s in &schedule {
                let reason = class_violation(&f, s, c);
                rounds.push(RoundVerdict {
                    round: s.round,
                    pass: reason.is_none(),
                    reason,
                });
            }
        }
    }
    Ok(ScheduleReport {
        scenario_id: sc.scenario_id(),
        class: label,
        realized_rounds: realized,
        rounds,
    })
}

/// Snapshots the scenario's schedule emits over its first `prefix_rounds` rounds.
pub fn realize_schedule(sc: &Scenario, prefix_rounds: u64) -> Result<Vec<Snapshot>, RunError> {
    sc.validate()?;
    let f = Arc::new(sc.build_footprint()?);
    let n = f.n();
    let b = sc.max_id()?;
    match sc.algorithm {
        AlgorithmSpec::WeakDisp { id_bound } => realize(sc, f, WeakDisp::new(id_bound.unwrap_or(b)), prefix_rounds),
        AlgorithmSpec::BalancedGlobal { id_bound } => {
            realize(sc, f, BalancedGlobal::new(id_bound.unwrap_or(b)), prefix_rounds)
        }
        AlgorithmSpec::RootedNPlusOne => realize(sc, f, RootedNPlusOne::new(n), prefix_rounds),
        AlgorithmSpec::Pnq => realize(sc, f, Pnq::new(n), prefix_rounds),
        AlgorithmSpec::RandomWalker { seed } => {
            realize(sc, f, RandomWalker::new(seed.unwrap_or(sc.seed)), prefix_rounds)
        }
        AlgorithmSpec::Greedy { id_bound } => {
            realize(sc, f, GreedyHoleSeeker::new(id_bound.unwrap_or(b)), prefix_rounds)
        }
    }
}

fn realize<A: Algorithm>(sc: &Scenario, f: Arc<Footprint>, algo: A, rounds: u64) -> Result<Vec<Snapshot>, RunError> {
    let cfg = sc.build_configuration()?;
    let mut source = sc.schedule_source(&f)?;
    let mut sim = Simulation::new(algo, f, sc.model, &cfg)?;
    let mut out = Vec::with_capacity(rounds as usize);
    while sim.round() < rounds && !sim.all_terminated() {
        let (snap, _) = source.next(&sim)?;
        sim.step_with(&snap)?;
        out.push(snap);
    }
    Ok(out)
}

pub fn emit_trace<W: Write>(trace: &Trace, out: W) -> Result<(), RunError> {
    trace.write_jsonl(out).map_err(RunError::Engine)
}

pub const CSV_COLUMNS: [&str; 11] = [
    "scenario_id",
    "n",
    "k",
    "p",
    "q",
    "algorithm",
    "adversary",
    "rounds",
    "outcome",
    "max_memory_bits",
    "trace_digest",
];

/// One row per summary under a fixed header; an empty list yields the header alone.
pub fn emit_summary_csv<W: Write>(summaries: &[RunSummary], out: W) -> Result<(), RunError> {
    let io = |e: csv::Error| RunError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for s in summaries {
        w.write_record([
            s.scenario_id.clone(),
            s.n.to_string(),
            s.k.to_string(),
            s.p.to_string(),
            s.q.to_string(),
            s.algorithm.clone(),
            s.adversary.clone(),
            s.rounds.to_string(),
            s.outcome.to_string(),
            s.max_memory_bits.to_string(),
            s.trace_digest.clone(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| RunError::Io(e.to_string()))
}

impl StopCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            StopCondition::Balanced => "balanced",
            StopCondition::AllTerminated => "all_terminated",
            StopCondition::Rounds => "rounds",
        }
    }
}
