use crate::graph::{Footprint, NodeId};

use super::{extreme, is_clique, two_cliques, Adversary, AdversaryError, ConnectivityClass, Decision, Oracle, SystemView};

fn split_params(view: &SystemView<'_>) -> (usize, usize) {
    (view.k / view.n, view.k % view.n)
}

/// Keeps some node at ≥ p+2 agents on a clique: isolate the fullest node, then
/// pair it with the fullest node of the big component, alternating.
#[derive(Clone, Debug)]
pub struct SplitMax {
    base: Option<u64>,
    isolated: NodeId,
    pair: Option<(NodeId, NodeId)>,
    check_preconditions: bool,
}

impl Default for SplitMax {
    fn default() -> Self {
        Self::new()
    }
}

impl SplitMax {
    pub fn new() -> Self {
        SplitMax {
            base: None,
            isolated: 0,
            pair: None,
            check_preconditions: true,
        }
    }

    /// Start the construction at `round` treated as its round 0, skipping the round-0 checks.
    fn rebased(round: u64) -> Self {
        SplitMax {
            base: Some(round),
            isolated: 0,
            pair: None,
            check_preconditions: false,
        }
    }

    fn check(f: &Footprint, view: &SystemView<'_>) -> Result<(), AdversaryError> {
        let (p, q) = split_params(view);
        if !is_clique(f) || view.n < 4 {
            return Err(AdversaryError::Precondition("split_max needs a clique with n >= 4".into()));
        }
        if q < 3 || q > view.n - 1 {
            return Err(AdversaryError::Precondition(format!(
                "split_max needs k = pn+q with 3 <= q <= n-1, got q = {q}"
            )));
        }
        if view.counts.iter().all(|&c| c < p + 2) {
            return Err(AdversaryError::Precondition(format!(
                "split_max needs a node with at least p+2 = {} agents",
                p + 2
            )));
        }
        Ok(())
    }
}

impl Adversary for SplitMax {
    fn name(&self) -> String {
        "temporal_split_max".into()
    }

    fn declared_class(&self) -> ConnectivityClass {
        ConnectivityClass::Temporal
    }

    fn next_snapshot(
        &mut self,
        round: u64,
        f: &Footprint,
        view: &SystemView<'_>,
        _oracle: &dyn Oracle,
    ) -> Result<Decision, AdversaryError> {
        let base = *self.base.get_or_insert(round);
        let local = round - base;
        let n = f.n();
        if local == 0 {
            if self.check_preconditions {
                Self::check(f, view)?;
            }
            self.isolated = extreme(&view.counts, 0..n, true);
            self.pair = None;
            return Ok(Decision::noted(
                two_cliques(f, round, &[self.isolated]),
                format!("isolate {}", self.isolated),
            ));
        }
        if local % 2 == 1 {
            let partner = extreme(&view.counts, (0..n).filter(|&v| v != self.isolated), true);
            self.pair = Some((self.isolated, partner));
            Ok(Decision::noted(
                two_cliques(f, round, &[self.isolated, partner]),
                format!("pair {} {}", self.isolated, partner),
            ))
        } else {
            let (a, b) = self.pair.expect("odd round precedes even round");
            self.isolated = extreme(&view.counts, [a.min(b), a.max(b)], true);
            Ok(Decision::noted(
                two_cliques(f, round, &[self.isolated]),
                format!("isolate {}", self.isolated),
            ))
        }
    }
}

/// Keeps some node below p agents by isolating and pairing the emptiest node,
/// switching to [`SplitMax`] once a node of the big component reaches p+2.
#[derive(Clone, Debug)]
pub struct SplitMin {
    base: Option<u64>,
    isolated: NodeId,
    pair: Option<(NodeId, NodeId)>,
    delegate: Option<SplitMax>,
}

impl Default for SplitMin {
    fn default() -> Self {
        Self::new()
    }
}

impl SplitMin {
    pub fn new() -> Self {
        SplitMin {
            base: None,
            isolated: 0,
            pair: None,
            delegate: None,
        }
    }

    pub fn delegated(&self) -> bool {
        self.delegate.is_some()
    }
}

impl Adversary for SplitMin {
    fn name(&self) -> String {
        "temporal_split_min".into()
    }

    fn declared_class(&self) -> ConnectivityClass {
        ConnectivityClass::Temporal
    }

    fn next_snapshot(
        &mut self,
        round: u64,
        f: &Footprint,
        view: &SystemView<'_>,
        oracle: &dyn Oracle,
    ) -> Result<Decision, AdversaryError> {
        if let Some(d) = &mut self.delegate {
            return d.next_snapshot(round, f, view, oracle);
        }
        let base = *self.base.get_or_insert(round);
        let local = round - base;
        let n = f.n();
        let (p, q) = split_params(view);
        if local == 0 {
            if !is_clique(f) || n < 6 {
                return Err(AdversaryError::Precondition("split_min needs a clique with n >= 6".into()));
            }
            if q < 3 || q > n - 3 || p < 1 {
                return Err(AdversaryError::Precondition(format!(
                    "split_min needs k = pn+q with p >= 1 and 3 <= q <= n-3, got p = {p}, q = {q}"
                )));
            }
            let min = *view.counts.iter().min().expect("n >= 6");
            if min + 1 > p {
                if view.counts.iter().any(|&c| c >= p + 2) {
                    let mut d = SplitMax::rebased(round);
                    let out = d.next_snapshot(round, f, view, oracle)?;
                    self.delegate = Some(d);
                    return Ok(Decision::noted(out.snapshot, "delegate to split_max at start"));
                }
                return Err(AdversaryError::Precondition("split_min needs an unbalanced start".into()));
            }
            self.isolated = extreme(&view.counts, 0..n, false);
            return Ok(Decision::noted(
                two_cliques(f, round, &[self.isolated]),
                format!("isolate {}", self.isolated),
            ));
        }
        if local % 2 == 1 {
            let big = (0..n).filter(|&v| v != self.isolated);
            if big.clone().any(|v| view.counts[v] >= p + 2) {
                let mut d = SplitMax::rebased(round);
                let out = d.next_snapshot(round, f, view, oracle)?;
                self.delegate = Some(d);
                let note = format!("delegate to split_max; {}", out.note.unwrap_or_default());
                return Ok(Decision::noted(out.snapshot, note));
            }
            let partner = extreme(&view.counts, big, false);
            self.pair = Some((self.isolated, partner));
            Ok(Decision::noted(
                two_cliques(f, round, &[self.isolated, partner]),
                format!("pair {} {}", self.isolated, partner),
            ))
        } else {
            let (a, b) = self.pair.expect("odd round precedes even round");
            self.isolated = extreme(&view.counts, [a.min(b), a.max(b)], false);
            Ok(Decision::noted(
                two_cliques(f, round, &[self.isolated]),
                format!("isolate {}", self.isolated),
            ))
        }
    }
}
