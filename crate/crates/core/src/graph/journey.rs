use serde::{Deserialize, Serialize};

use super::{EdgeId, Footprint, NodeId, Snapshot};

/// Temporally ordered walk: `(edge, round)` pairs with strictly increasing rounds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Journey {
    pub steps: Vec<(EdgeId, u64)>,
}

impl Journey {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn arrival(&self) -> Option<u64> {
        self.steps.last().map(|&(_, r)| r)
    }

    /// Checks round order, edge presence and that the walk leads from `u` to `v`.
    pub fn is_valid(&self, f: &Footprint, prefix: &[Snapshot], u: NodeId, v: NodeId) -> bool {
        let mut at = u;
        let mut last: Option<u64> = None;
        for &(e, r) in &self.steps {
            if last.is_some_and(|l| r <= l) || e >= f.m() {
                return false;
            }
            let Some(snap) = snapshot_at(prefix, r) else {
                return false;
            };
            if !snap.is_present(e) {
                return false;
            }
            let (a, b) = f.edge(e);
            at = if a == at {
                b
            } else if b == at {
                a
            } else {
                return false;
            };
            last = Some(r);
        }
        at == v
    }
}

/// Snapshot for round `r` in a prefix of consecutive rounds.
pub fn snapshot_at(prefix: &[Snapshot], r: u64) -> Option<&Snapshot> {
    let first = prefix.first()?.round;
    let idx = r.checked_sub(first)? as usize;
    prefix.get(idx).filter(|s| s.round == r)
}

/// Earliest-arrival journey from `u` to `v` using rounds `r, r+1, ...` of the prefix.
///
/// Breadth-first over the time-expanded graph: at most one hop per round.
pub fn find_journey(f: &Footprint, prefix: &[Snapshot], u: NodeId, v: NodeId, r: u64) -> Option<Journey> {
    find_journey_within(f, prefix, u, v, r, u64::MAX)
}

/// Like [`find_journey`] but only rounds in `[r, r + horizon)` may be used.
pub fn find_journey_within(
    f: &Footprint,
    prefix: &[Snapshot],
    u: NodeId,
    v: NodeId,
    r: u64,
    horizon: u64,
) -> Option<Journey> {
    if u == v {
        return Some(Journey::default());
    }
    // parent[w] = (edge, round, predecessor) of the first arrival at w
    let mut parent: Vec<Option<(EdgeId, u64, NodeId)>> = vec![None; f.n()];
    let mut reached = vec![false; f.n()];
    reached[u] = true;
    let mut frontier = vec![u];
    let end = r.saturating_add(horizon);
    let mut round = r;
    while round < end {
        let Some(snap) = snapshot_at(prefix, round) else {
            break;
        };
        let mut fresh = Vec::new();
        for &x in &frontier {
            for p in 0..f.degree(x) {
                let e = f.edge_at(x, p);
                if !snap.is_present(e) {
                    continue;
                }
                let w = f.other_end(e, x);
                if !reached[w] {
                    reached[w] = true;
                    parent[w] = Some((e, round, x));
                    fresh.push(w);
                }
            }
        }
        if reached[v] {
            let mut steps = Vec::new();
            let mut at = v;
            while at != u {
                let (e, rr, prev) = parent[at].expect("reached nodes have parents");
                steps.push((e, rr));
                at = prev;
            }
            steps.reverse();
            return Some(Journey { steps });
        }
        if fresh.is_empty() && frontier.len() == f.n() {
            break;
        }
        frontier.extend(fresh);
        round += 1;
    }
    None
}

/// Nodes reachable from `u` by journeys within `[r, r + horizon)`.
fn reachable_within(f: &Footprint, prefix: &[Snapshot], u: NodeId, r: u64, horizon: u64) -> Vec<bool> {
    let mut reached = vec![false; f.n()];
    reached[u] = true;
    let mut frontier = vec![u];
    for round in r..r.saturating_add(horizon) {
        let Some(snap) = snapshot_at(prefix, round) else {
            break;
        };
        let mut fresh = Vec::new();
        for &x in &frontier {
            for p in 0..f.degree(x) {
                let e = f.edge_at(x, p);
                if snap.is_present(e) {
                    let w = f.other_end(e, x);
                    if !reached[w] {
                        reached[w] = true;
                        fresh.push(w);
                    }
                }
            }
        }
        frontier.extend(fresh);
        if frontier.len() == f.n() {
            break;
        }
    }
    reached
}

/// Temporal connectivity on a finite prefix: for every start round in `window`
/// and every ordered pair, a journey exists within `horizon` rounds.
///
/// Rounds missing from the prefix count as empty, so a short prefix fails.
pub fn check_temporal_connectivity(
    f: &Footprint,
    prefix: &[Snapshot],
    window: std::ops::Range<u64>,
    horizon: u64,
) -> bool {
    first_temporal_violation(f, prefix, window, horizon).is_none()
}

/// First `(start_round, u, v)` without a journey, if any.
pub fn first_temporal_violation(
    f: &Footprint,
    prefix: &[Snapshot],
    window: std::ops::Range<u64>,
    horizon: u64,
) -> Option<(u64, NodeId, NodeId)> {
    for r in window {
        for u in 0..f.n() {
            let reached = reachable_within(f, prefix, u, r, horizon);
            if let Some(v) = reached.iter().position(|&x| !x) {
                return Some((r, u, v));
            }
        }
    }
    None
}

/// Every snapshot connected and missing at most `ell` edges.
pub fn check_ell_bounded(f: &Footprint, prefix: &[Snapshot], ell: usize) -> bool {
    first_ell_violation(f, prefix, ell).is_none()
}

/// Round of the first snapshot breaking ℓ-bounded 1-interval connectivity.
pub fn first_ell_violation(f: &Footprint, prefix: &[Snapshot], ell: usize) -> Option<u64> {
    prefix
        .iter()
        .find(|s| !super::is_snapshot_connected(f, s) || super::missing_edge_count(f, s) > ell)
        .map(|s| s.round)
}
