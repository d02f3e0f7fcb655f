use crate::adversary::{Adversary, ConnectivityClass};
use crate::graph::{is_snapshot_connected, missing_edge_count, Snapshot};

use super::model::is_balanced;
use super::sim::Simulation;
use super::trace::{RoundRecord, TraceSink};
use super::{Algorithm, EngineError};

/// Where each round's snapshot comes from.
pub enum ScheduleSource {
    /// Entry `r−1` is used in round `r`; the last entry repeats. Empty means the full footprint.
    Fixed(Vec<Snapshot>),
    /// As `Fixed`, with every snapshot checked against a declared class.
    Declared(Vec<Snapshot>, ConnectivityClass),
    Adaptive(Box<dyn Adversary>),
}

impl ScheduleSource {
    pub fn declared_class(&self) -> Option<ConnectivityClass> {
        match self {
            ScheduleSource::Fixed(_) => None,
            ScheduleSource::Declared(_, c) => Some(*c),
            ScheduleSource::Adaptive(a) => Some(a.declared_class()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ScheduleSource::Fixed(list) if list.is_empty() => "static".into(),
            ScheduleSource::Fixed(_) | ScheduleSource::Declared(..) => "fixed".into(),
            ScheduleSource::Adaptive(a) => a.name(),
        }
    }

    /// Snapshot for the next round of `sim`, plus an optional annotation.
    pub fn next<A: Algorithm>(&mut self, sim: &Simulation<A>) -> Result<(Snapshot, Option<String>), EngineError> {
        let round = sim.round() + 1;
        let f = sim.footprint();
        match self {
            ScheduleSource::Fixed(list) | ScheduleSource::Declared(list, _) => {
                let s = match list.len() {
                    0 => Snapshot::full(f, round),
                    len => list[((round - 1) as usize).min(len - 1)].clone().with_round(round),
                };
                Ok((s, None))
            }
            ScheduleSource::Adaptive(adv) => {
                let view = sim.system_view();
                let d = adv.next_snapshot(round, f, &view, sim).map_err(EngineError::Adversary)?;
                Ok((d.snapshot.with_round(round), d.note))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopCondition {
    /// Stop as soon as the configuration is balanced at a round end.
    Balanced,
    /// Stop only when every agent has terminated.
    AllTerminated,
    /// Run the full round budget (still stops if every agent terminated).
    Rounds,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub max_rounds: u64,
    pub stop: StopCondition,
    /// Keep every snapshot for post-hoc schedule checks.
    pub keep_schedule: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunEnd {
    Balanced,
    AllTerminated,
    Timeout,
    ClassViolation { round: u64, reason: String },
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub end: RunEnd,
    pub rounds: u64,
    pub schedule: Vec<Snapshot>,
    pub max_memory_bits: u64,
    pub holes: Vec<u32>,
    pub multinodes: Vec<u32>,
}

/// Checks a snapshot against a per-round connectivity class.
pub fn class_violation(f: &crate::graph::Footprint, s: &Snapshot, class: ConnectivityClass) -> Option<String> {
    let ell = match class {
        ConnectivityClass::Temporal => return None,
        ConnectivityClass::OneBounded => 1,
        ConnectivityClass::EllBounded(l) => l,
    };
    if !is_snapshot_connected(f, s) {
        return Some("snapshot disconnected".into());
    }
    let missing = missing_edge_count(f, s);
    (missing > ell).then(|| format!("{missing} edges missing, class allows {ell}"))
}

pub fn run<A: Algorithm>(
    sim: &mut Simulation<A>,
    source: &mut ScheduleSource,
    opts: &RunOptions,
    sink: &mut dyn TraceSink,
) -> Result<RunReport, EngineError> {
    run_observed(sim, source, opts, sink, &mut |_, _| {})
}

/// [`run`] with a callback invoked after each committed round.
pub fn run_observed<A: Algorithm>(
    sim: &mut Simulation<A>,
    source: &mut ScheduleSource,
    opts: &RunOptions,
    sink: &mut dyn TraceSink,
    observe: &mut dyn FnMut(&Simulation<A>, &RoundRecord),
) -> Result<RunReport, EngineError> {
    let class = source.declared_class();
    let mut report = RunReport {
        end: RunEnd::Timeout,
        rounds: 0,
        schedule: Vec::new(),
        max_memory_bits: sim.memory_bits().into_iter().max().unwrap_or(0),
        holes: Vec::new(),
        multinodes: Vec::new(),
    };
    let k = sim.ids().len();
    if opts.stop == StopCondition::Balanced && is_balanced(&sim.counts(), k) {
        report.end = RunEnd::Balanced;
        return Ok(report);
    }
    if sim.all_terminated() {
        report.end = RunEnd::AllTerminated;
        return Ok(report);
    }
    let m = sim.footprint().m();
    while sim.round() < opts.max_rounds {
        let (snap, note) = source.next(sim)?;
        if snap.edge_capacity() != m {
            return Err(EngineError::Mismatch(format!(
                "snapshot covers {} edges, footprint has {m}",
                snap.edge_capacity()
            )));
        }
        if let Some(c) = class {
            if let Some(reason) = class_violation(sim.footprint(), &snap, c) {
                report.end = RunEnd::ClassViolation {
                    round: snap.round,
                    reason,
                };
                return Ok(report);
            }
        }
        let outcome = sim.compute_round(&snap)?;
        let rec = sim.record(&snap, &outcome, note);
        sink.record(&rec)?;
        sim.commit(outcome);
        report.rounds = sim.round();
        report.max_memory_bits = report
            .max_memory_bits
            .max(rec.memory_bits.iter().copied().max().unwrap_or(0));
        let counts = sim.counts();
        report.holes.push(counts.iter().filter(|&&c| c == 0).count() as u32);
        report.multinodes.push(counts.iter().filter(|&&c| c >= 2).count() as u32);
        if opts.keep_schedule {
            report.schedule.push(snap);
        }
        observe(sim, &rec);
        if sim.all_terminated() {
            report.end = RunEnd::AllTerminated;
            return Ok(report);
        }
        if opts.stop == StopCondition::Balanced && is_balanced(&counts, k) {
            report.end = RunEnd::Balanced;
            return Ok(report);
        }
    }
    report.end = RunEnd::Timeout;
    Ok(report)
}
