use crate::graph::{Footprint, NodeId, Snapshot};

use super::{is_clique, oracle_predict, Adversary, AdversaryError, ConnectivityClass, Decision, ModelVariant, Oracle, SystemView};

/// Path adversary on an ℓ-bounded clique.
///
/// Every round the snapshot is a Hamiltonian path through the nodes in
/// descending load order, or that path with edge w4w5 swapped for w1w5 when
/// the plain path would leave every node at ≤ p+1 agents.
#[derive(Clone, Debug)]
pub struct PathSort {
    variant: ModelVariant,
    ell: usize,
    checked: bool,
    swaps: u64,
}

impl PathSort {
    pub fn new(variant: ModelVariant, ell: usize) -> Self {
        PathSort {
            variant,
            ell,
            checked: false,
            swaps: 0,
        }
    }

    /// Number of rounds in which the swapped path was emitted.
    pub fn swaps(&self) -> u64 {
        self.swaps
    }

    fn check(&self, f: &Footprint, view: &SystemView<'_>) -> Result<(), AdversaryError> {
        let n = f.n();
        let (p, q) = (view.k / n, view.k % n);
        if !is_clique(f) || n < 6 {
            return Err(AdversaryError::Precondition(
                "path_sort needs a clique with n >= 6 (5 <= q <= n-1 is empty for n = 5)".into(),
            ));
        }
        if self.ell < 25 || n * n > self.ell {
            return Err(AdversaryError::Precondition(format!(
                "path_sort needs ell >= 25 and n <= floor(sqrt(ell)), got ell = {}, n = {n}",
                self.ell
            )));
        }
        if q < 5 || q > n - 1 {
            return Err(AdversaryError::Precondition(format!(
                "path_sort needs k = pn+q with 5 <= q <= n-1, got q = {q}"
            )));
        }
        if view.counts.iter().all(|&c| c < p + 2) {
            return Err(AdversaryError::Precondition(format!(
                "path_sort needs a node with at least p+2 = {} agents",
                p + 2
            )));
        }
        Ok(())
    }
}

/// Nodes by descending count, ties by index.
pub fn load_order(counts: &[usize]) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

impl Adversary for PathSort {
    fn name(&self) -> String {
        match self.variant {
            ModelVariant::OneHopF2f => format!("path_sort(one_hop_f2f, ell={})", self.ell),
            ModelVariant::ZeroHopGlobal => format!("path_sort(zero_hop_global, ell={})", self.ell),
        }
    }

    fn declared_class(&self) -> ConnectivityClass {
        ConnectivityClass::EllBounded(self.ell)
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
        let w = load_order(&view.counts);
        let path_pairs: Vec<(NodeId, NodeId)> = w.windows(2).map(|x| (x[0], x[1])).collect();
        let plain = Snapshot::from_pairs(f, round, path_pairs.iter().copied()).expect("clique has every pair");
        let pred = oracle_predict(oracle, &plain)?;
        if pred.counts(n).iter().any(|&c| c >= p + 2) {
            return Ok(Decision::noted(plain, "P_r"));
        }
        let swapped = path_pairs
            .iter()
            .copied()
            .filter(|&pair| pair != (w[3], w[4]))
            .chain(std::iter::once((w[0], w[4])));
        let s = Snapshot::from_pairs(f, round, swapped).expect("clique has every pair");
        self.swaps += 1;
        Ok(Decision::noted(s, format!("P_r' (w1={}, w4={}, w5={})", w[0], w[3], w[4])))
    }
}
