use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{EdgeId, Footprint, GraphError, NodeId};

/// Edges present in one round.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Snapshot {
    pub round: u64,
    present: FixedBitSet,
}

impl Snapshot {
    /// Every footprint edge present.
    pub fn full(f: &Footprint, round: u64) -> Self {
        let mut present = FixedBitSet::with_capacity(f.m());
        present.insert_range(..);
        Snapshot { round, present }
    }

    pub fn empty(f: &Footprint, round: u64) -> Self {
        Snapshot {
            round,
            present: FixedBitSet::with_capacity(f.m()),
        }
    }

    pub fn from_edges<I>(f: &Footprint, round: u64, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut s = Self::empty(f, round);
        for e in edges {
            if e >= f.m() {
                return Err(GraphError::EdgeOutOfRange { edge: e, m: f.m() });
            }
            s.present.insert(e);
        }
        Ok(s)
    }

    /// Full footprint minus the listed edges.
    pub fn without<I>(f: &Footprint, round: u64, removed: I) -> Self
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut s = Self::full(f, round);
        for e in removed {
            s.present.set(e, false);
        }
        s
    }

    /// Snapshot holding exactly the edges among the given node pairs.
    pub fn from_pairs<I>(f: &Footprint, round: u64, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut s = Self::empty(f, round);
        for (u, v) in pairs {
            let e = f
                .edge_between(u, v)
                .ok_or_else(|| GraphError::InvalidFootprint(format!("no footprint edge ({u},{v})")))?;
            s.present.insert(e);
        }
        Ok(s)
    }

    pub fn is_present(&self, e: EdgeId) -> bool {
        self.present.contains(e)
    }

    pub fn set(&mut self, e: EdgeId, present: bool) {
        self.present.set(e, present);
    }

    pub fn present_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.present.ones()
    }

    pub fn present_count(&self) -> usize {
        self.present.count_ones(..)
    }

    pub fn edge_capacity(&self) -> usize {
        self.present.len()
    }

    pub fn with_round(mut self, round: u64) -> Self {
        self.round = round;
        self
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    round: u64,
    m: usize,
    present: Vec<EdgeId>,
}

impl Serialize for Snapshot {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SnapshotDoc {
            round: self.round,
            m: self.present.len(),
            present: self.present.ones().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Snapshot {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = SnapshotDoc::deserialize(deserializer)?;
        let mut present = FixedBitSet::with_capacity(doc.m);
        for e in doc.present {
            if e >= doc.m {
                return Err(serde::de::Error::custom(format!("edge {e} outside 0..{}", doc.m)));
            }
            present.insert(e);
        }
        Ok(Snapshot {
            round: doc.round,
            present,
        })
    }
}

/// Connected components of `(V, present)`; `comp[v]` is a dense component index.
pub fn components(f: &Footprint, s: &Snapshot) -> (usize, Vec<usize>) {
    let mut comp = vec![usize::MAX; f.n()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..f.n() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for p in 0..f.degree(u) {
                let e = f.edge_at(u, p);
                if !s.is_present(e) {
                    continue;
                }
                let w = f.other_end(e, u);
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    (count, comp)
}

pub fn is_snapshot_connected(f: &Footprint, s: &Snapshot) -> bool {
    f.n() <= 1 || components(f, s).0 == 1
}

pub fn missing_edge_count(f: &Footprint, s: &Snapshot) -> usize {
    f.m() - s.present_count()
}

/// Hop distances from `src` inside the snapshot; unreachable nodes get `usize::MAX`.
pub fn hop_distances(f: &Footprint, s: &Snapshot, src: NodeId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; f.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for p in 0..f.degree(u) {
            let e = f.edge_at(u, p);
            if s.is_present(e) {
                let w = f.other_end(e, u);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}

/// True when removing `e` from the full footprint keeps it connected.
pub fn is_removable(f: &Footprint, e: EdgeId) -> bool {
    is_snapshot_connected(f, &Snapshot::without(f, 0, [e]))
}
