use crate::engine::MoveIntent;
use crate::graph::{is_removable, EdgeId, Footprint, NodeId, Port, Snapshot};

use super::{oracle_predict, Adversary, AdversaryError, ConnectivityClass, Decision, Oracle, SystemView};

/// Adaptive 1-bounded adversary: deletes the edge the largest group of
/// unsettled movers is about to use, whenever that keeps the graph connected.
///
/// Groups are agents sharing a node and an intended port; ties go to the
/// smallest node, then the smallest port. When the largest group's edge is a
/// bridge the next group is tried.
#[derive(Clone, Debug, Default)]
pub struct LargestGroupBlocker {
    removable: Option<Vec<bool>>,
}

impl LargestGroupBlocker {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Adversary for LargestGroupBlocker {
    fn name(&self) -> String {
        "block_largest_group".into()
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
        let removable = self
            .removable
            .get_or_insert_with(|| (0..f.m()).map(|e| is_removable(f, e)).collect());
        let full = Snapshot::full(f, round);
        let pred = oracle_predict(oracle, &full)?;
        let mut groups: Vec<(usize, NodeId, Port)> = Vec::new();
        for (i, intent) in pred.intents.iter().enumerate() {
            let Some(MoveIntent::Move(p)) = *intent else {
                continue;
            };
            if view.settled[i] {
                continue;
            }
            let v = view.positions[i];
            match groups.iter_mut().find(|g| g.1 == v && g.2 == p) {
                Some(g) => g.0 += 1,
                None => groups.push((1, v, p)),
            }
        }
        groups.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for (size, v, p) in groups {
            let e: EdgeId = f.edge_at(v, p);
            if removable[e] {
                return Ok(Decision::noted(
                    Snapshot::without(f, round, [e]),
                    format!("block node {v} port {p} ({size} agents)"),
                ));
            }
        }
        Ok(Decision::plain(full))
    }
}
