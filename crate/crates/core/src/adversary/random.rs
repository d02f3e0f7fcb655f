use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{is_removable, is_snapshot_connected, EdgeId, Footprint, Snapshot};

use super::{Adversary, AdversaryError, ConnectivityClass, Decision, Oracle, SystemView};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomClass {
    OneBounded,
    EllBounded(usize),
    AlwaysFull,
}

/// Seeded random deletions that keep every snapshot connected.
///
/// `OneBounded` draws uniformly among the empty set and the single non-bridge
/// edges. `EllBounded(ℓ)` draws a target size uniformly from 0..=ℓ, then removes
/// edges in random order, skipping any whose removal would disconnect.
#[derive(Clone, Debug)]
pub struct RandomSchedule {
    class: RandomClass,
    seed: u64,
    rng: ChaCha8Rng,
    removable: Option<Vec<EdgeId>>,
}

impl RandomSchedule {
    pub fn new(class: RandomClass, seed: u64) -> Self {
        RandomSchedule {
            class,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            removable: None,
        }
    }

    pub fn draw(&mut self, f: &Footprint, round: u64) -> Snapshot {
        match self.class {
            RandomClass::AlwaysFull => Snapshot::full(f, round),
            RandomClass::OneBounded => {
                let removable = self
                    .removable
                    .get_or_insert_with(|| (0..f.m()).filter(|&e| is_removable(f, e)).collect());
                let pick = self.rng.random_range(0..=removable.len());
                if pick == removable.len() {
                    Snapshot::full(f, round)
                } else {
                    Snapshot::without(f, round, [removable[pick]])
                }
            }
            RandomClass::EllBounded(ell) => {
                let target = self.rng.random_range(0..=ell);
                let mut s = Snapshot::full(f, round);
                if target == 0 {
                    return s;
                }
                let mut order: Vec<EdgeId> = (0..f.m()).collect();
                order.shuffle(&mut self.rng);
                let mut removed = 0;
                for e in order {
                    if removed == target {
                        break;
                    }
                    s.set(e, false);
                    if is_snapshot_connected(f, &s) {
                        removed += 1;
                    } else {
                        s.set(e, true);
                    }
                }
                s
            }
        }
    }

}

impl Adversary for RandomSchedule {
    fn name(&self) -> String {
        match self.class {
            RandomClass::OneBounded => format!("random(one_bounded, seed={})", self.seed),
            RandomClass::EllBounded(l) => format!("random(ell_bounded({l}), seed={})", self.seed),
            RandomClass::AlwaysFull => "static".into(),
        }
    }

    fn declared_class(&self) -> ConnectivityClass {
        match self.class {
            RandomClass::OneBounded => ConnectivityClass::OneBounded,
            RandomClass::EllBounded(l) => ConnectivityClass::EllBounded(l),
            RandomClass::AlwaysFull => ConnectivityClass::EllBounded(0),
        }
    }

    fn next_snapshot(
        &mut self,
        round: u64,
        f: &Footprint,
        _view: &SystemView<'_>,
        _oracle: &dyn Oracle,
    ) -> Result<Decision, AdversaryError> {
        Ok(Decision::plain(self.draw(f, round)))
    }
}
