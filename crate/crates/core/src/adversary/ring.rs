use crate::engine::is_balanced;
use crate::graph::{Footprint, NodeId, Snapshot};

use super::{oracle_predict, Adversary, AdversaryError, ConnectivityClass, Decision, ModelVariant, Oracle, SystemView};

/// One-edge ring adversary against k = pn agents.
///
/// When the full ring would let the agents balance, it deletes one edge next
/// to a node whose count the deletion is guaranteed to spoil.
#[derive(Clone, Debug)]
pub struct RingOneEdge {
    variant: ModelVariant,
    checked: bool,
}

impl RingOneEdge {
    pub fn new(variant: ModelVariant) -> Self {
        RingOneEdge { variant, checked: false }
    }

    fn check(&self, f: &Footprint, view: &SystemView<'_>) -> Result<(), AdversaryError> {
        let n = f.n();
        let min_n = match self.variant {
            ModelVariant::OneHopF2f => 4,
            ModelVariant::ZeroHopGlobal => 3,
        };
        if n < min_n || !is_cyclic_ring(f) {
            return Err(AdversaryError::Precondition(format!(
                "ring_one_edge needs the generated ring with n >= {min_n}"
            )));
        }
        if view.k % n != 0 {
            return Err(AdversaryError::Precondition(format!("ring_one_edge needs k = pn, got k = {}", view.k)));
        }
        if is_balanced(&view.counts, view.k) {
            return Err(AdversaryError::Precondition("ring_one_edge needs an unbalanced start".into()));
        }
        Ok(())
    }
}

/// Edges exactly {i, i+1 mod n}.
fn is_cyclic_ring(f: &Footprint) -> bool {
    let n = f.n();
    f.m() == n && (0..n).all(|i| f.edge_between(i, (i + 1) % n).is_some())
}

impl Adversary for RingOneEdge {
    fn name(&self) -> String {
        match self.variant {
            ModelVariant::OneHopF2f => "ring_one_edge(one_hop_f2f)".into(),
            ModelVariant::ZeroHopGlobal => "ring_one_edge(zero_hop_global)".into(),
        }
    }

    fn declared_class(&self) -> ConnectivityClass {
        ConnectivityClass::OneBounded
    }

    fn next_snapshot(
        &mut self,
        round: u64,
        f: &Footprint,
        view: &SystemView<'_>,
        oracle: &dyn Oracle,
    ) -> Result<Decision, AdversaryError> {
        if !self.checked {
            self.check(f, view)?;
            self.checked = true;
        }
        let n = f.n();
        let p = view.k / n;
        let full = Snapshot::full(f, round);
        let pred = oracle_predict(oracle, &full)?;
        if !is_balanced(&pred.counts(n), view.k) {
            return Ok(Decision::noted(full, "full ring"));
        }
        // Net flows across u's edges under the full ring: x toward u1 = u−1, y toward u2 = u+1.
        let flow = |from: NodeId, to: NodeId| -> i64 {
            view.positions
                .iter()
                .zip(&pred.positions)
                .filter(|&(&a, &b)| a == from && b == to)
                .count() as i64
        };
        let candidates: Vec<NodeId> = (0..n)
            .filter(|&u| match self.variant {
                ModelVariant::OneHopF2f => view.counts[u] < p,
                ModelVariant::ZeroHopGlobal => view.counts[u] > p,
            })
            .collect();
        for u in candidates {
            let u1 = (u + n - 1) % n;
            let u2 = (u + 1) % n;
            let net1 = flow(u1, u) - flow(u, u1);
            let net2 = flow(u2, u) - flow(u, u2);
            let wanted = |net: i64| match self.variant {
                ModelVariant::OneHopF2f => net > 0,
                ModelVariant::ZeroHopGlobal => net < 0,
            };
            let side = if wanted(net2) {
                Some(u2)
            } else if wanted(net1) {
                Some(u1)
            } else {
                None
            };
            if let Some(w) = side {
                let e = f.edge_between(u, w).expect("ring edge");
                return Ok(Decision::noted(
                    Snapshot::without(f, round, [e]),
                    format!("delete {u}-{w} (u={u}, net1={net1}, net2={net2})"),
                ));
            }
        }
        Err(AdversaryError::ProofInvariant(format!(
            "round {round}: oracle predicts balance but no node has a qualifying edge"
        )))
    }
}
