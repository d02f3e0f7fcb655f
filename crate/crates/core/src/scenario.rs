//! Scenario files: a TOML description of one run, validated before anything executes.
//!
//! ```toml
//! id = "rooted-ring-5"
//! seed = 7
//! k = 6
//! max_rounds = 2000000
//! stop = "all_terminated"
//!
//! [footprint]
//! kind = "ring"
//! n = 5
//!
//! [placement]
//! kind = "rooted"
//! node = 0
//!
//! [algorithm]
//! name = "rooted_n_plus_1"
//!
//! [model]
//! visibility = "zero_hop"
//! communication = "f2f"
//!
//! [schedule]
//! kind = "random_one_bounded"
//! ```

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{
    ConnectivityClass, LargestGroupBlocker, ModelVariant, PathSort, RandomClass, RandomSchedule, RingOneEdge,
    SplitMax, SplitMin,
};
use crate::algorithms::rooted::split_pq;
use crate::engine::{
    AgentId, Communication, Configuration, ConfigurationError, ModelSpec, ScheduleSource, StopCondition, Visibility,
};
use crate::graph::{Footprint, FootprintKind, GraphError, NodeId, Snapshot};

// Independent streams derived from the scenario seed.
const PORT_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
const PLACEMENT_STREAM: u64 = 0xc2b2_ae3d_27d4_eb4f;
const ID_STREAM: u64 = 0x1656_67b1_9e37_79f9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub k: usize,
    pub max_rounds: u64,
    #[serde(default = "default_stop")]
    pub stop: StopCondition,
    #[serde(default, skip_serializing_if = "IdSpec::is_sequential")]
    pub ids: IdSpec,
    pub footprint: FootprintSpec,
    pub placement: PlacementSpec,
    pub algorithm: AlgorithmSpec,
    pub model: ModelSpec,
    pub schedule: ScheduleSpec,
}

fn default_stop() -> StopCondition {
    StopCondition::AllTerminated
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FootprintSpec {
    Clique {
        n: usize,
        #[serde(default, skip_serializing_if = "is_false")]
        shuffle_ports: bool,
    },
    Ring {
        n: usize,
        #[serde(default, skip_serializing_if = "is_false")]
        shuffle_ports: bool,
    },
    Path {
        n: usize,
        #[serde(default, skip_serializing_if = "is_false")]
        shuffle_ports: bool,
    },
    /// `ports[v][p]` is the neighbor of `v` behind port `p`.
    Explicit { ports: Vec<Vec<NodeId>> },
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl FootprintSpec {
    pub fn n(&self) -> usize {
        match self {
            FootprintSpec::Clique { n, .. } | FootprintSpec::Ring { n, .. } | FootprintSpec::Path { n, .. } => *n,
            FootprintSpec::Explicit { ports } => ports.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FootprintSpec::Clique { .. } => "clique",
            FootprintSpec::Ring { .. } => "ring",
            FootprintSpec::Path { .. } => "path",
            FootprintSpec::Explicit { .. } => "explicit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlacementSpec {
    /// Every agent on one node.
    Rooted { node: NodeId },
    /// Agent count per node; IDs follow `ids`.
    Counts { counts: Vec<usize> },
    /// Agent IDs per node; `ids` is ignored.
    Explicit { agents: Vec<Vec<AgentId>> },
    /// Each agent on a uniformly random node.
    Random,
}

/// How IDs are assigned when the placement gives only counts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IdSpec {
    /// 1..=k in node order.
    #[default]
    Sequential,
    /// A random permutation of 1..=k.
    Shuffled,
    /// k distinct values drawn from 1..=bound.
    Sparse { bound: AgentId },
}

impl IdSpec {
    fn is_sequential(&self) -> bool {
        *self == IdSpec::Sequential
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    WeakDisp {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id_bound: Option<u64>,
    },
    BalancedGlobal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id_bound: Option<u64>,
    },
    #[serde(rename = "rooted_n_plus_1")]
    RootedNPlusOne,
    Pnq,
    RandomWalker {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Greedy {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        id_bound: Option<u64>,
    },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::WeakDisp { .. } => "weak_disp",
            AlgorithmSpec::BalancedGlobal { .. } => "balanced_global",
            AlgorithmSpec::RootedNPlusOne => "rooted_n_plus_1",
            AlgorithmSpec::Pnq => "pnq",
            AlgorithmSpec::RandomWalker { .. } => "random_walker",
            AlgorithmSpec::Greedy { .. } => "greedy",
        }
    }

    pub fn requirements(&self) -> ModelSpec {
        match self {
            AlgorithmSpec::WeakDisp { .. } | AlgorithmSpec::BalancedGlobal { .. } => {
                ModelSpec::new(Visibility::OneHop, Communication::Global)
            }
            AlgorithmSpec::Greedy { .. } => ModelSpec::new(Visibility::OneHop, Communication::F2f),
            AlgorithmSpec::RootedNPlusOne | AlgorithmSpec::Pnq | AlgorithmSpec::RandomWalker { .. } => {
                ModelSpec::new(Visibility::ZeroHop, Communication::F2f)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    /// Full footprint every round.
    Static,
    /// Present edges per round as node pairs; the last entry repeats.
    Fixed {
        rounds: Vec<Vec<(NodeId, NodeId)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<ConnectivityClass>,
    },
    RandomOneBounded {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    RandomEllBounded {
        ell: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// Blocks the intended edge of the largest moving group whenever legal.
    Blocker,
    TemporalSplitMax,
    TemporalSplitMin,
    RingOneEdge { variant: ModelVariant },
    PathSort { variant: ModelVariant, ell: usize },
}

impl ScheduleSpec {
    /// Short label used in summaries.
    pub fn label(&self) -> String {
        match self {
            ScheduleSpec::Static => "static".into(),
            ScheduleSpec::Fixed { .. } => "fixed".into(),
            ScheduleSpec::RandomOneBounded { .. } => "random_one_bounded".into(),
            ScheduleSpec::RandomEllBounded { ell, .. } => format!("random_ell_bounded({ell})"),
            ScheduleSpec::Blocker => "blocker".into(),
            ScheduleSpec::TemporalSplitMax => "temporal_split_max".into(),
            ScheduleSpec::TemporalSplitMin => "temporal_split_min".into(),
            ScheduleSpec::RingOneEdge { variant } => format!("ring_one_edge({})", variant_name(*variant)),
            ScheduleSpec::PathSort { variant, ell } => format!("path_sort({},{ell})", variant_name(*variant)),
        }
    }

    /// Class every snapshot is checked against; `None` for unconstrained fixed schedules.
    pub fn class(&self) -> Option<ConnectivityClass> {
        match self {
            ScheduleSpec::Static | ScheduleSpec::RandomOneBounded { .. } | ScheduleSpec::Blocker => {
                Some(ConnectivityClass::OneBounded)
            }
            ScheduleSpec::Fixed { class, .. } => *class,
            ScheduleSpec::RandomEllBounded { ell, .. } | ScheduleSpec::PathSort { ell, .. } => {
                Some(ConnectivityClass::EllBounded(*ell))
            }
            ScheduleSpec::TemporalSplitMax | ScheduleSpec::TemporalSplitMin => Some(ConnectivityClass::Temporal),
            ScheduleSpec::RingOneEdge { .. } => Some(ConnectivityClass::OneBounded),
        }
    }
}

fn variant_name(v: ModelVariant) -> &'static str {
    match v {
        ModelVariant::OneHopF2f => "one_hop_f2f",
        ModelVariant::ZeroHopGlobal => "zero_hop_global",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Configuration(#[from] ConfigurationError),
    #[error("{algorithm} needs at least {required} but the scenario gives {given}: {reason}")]
    ModelTooWeak {
        algorithm: &'static str,
        required: ModelSpec,
        given: ModelSpec,
        reason: String,
    },
    #[error(
        "k = {k} = {p}·{n} + {q}: rooted pn+q dispersion is implemented for q ∈ {{1, 2}} only; \
         for 3 ≤ q ≤ n−1 on 1-bounded 1-interval connected graphs it is an open problem"
    )]
    OpenCase { k: usize, n: usize, p: usize, q: usize },
}

impl Scenario {
    /// Parse and validate a TOML document.
    pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
        let sc: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn n(&self) -> usize {
        self.footprint.n()
    }

    /// `id` when given, otherwise a name derived from the contents.
    pub fn scenario_id(&self) -> String {
        match &self.id {
            Some(id) => id.clone(),
            None => format!(
                "{}-{}{}-k{}-{}-s{}",
                self.algorithm.name(),
                self.footprint.kind_name(),
                self.n(),
                self.k,
                self.schedule.label(),
                self.seed
            ),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let f = self.build_footprint()?;
        let n = f.n();
        if self.k == 0 {
            return Err(ScenarioError::Invalid("k must be positive".into()));
        }
        self.build_configuration()?;
        self.check_model()?;
        match self.algorithm {
            AlgorithmSpec::RootedNPlusOne => {
                if !matches!(self.placement, PlacementSpec::Rooted { .. }) {
                    return Err(ScenarioError::Invalid("rooted_n_plus_1 needs a rooted placement".into()));
                }
                if self.k != n + 1 {
                    return Err(ScenarioError::Invalid(format!(
                        "rooted_n_plus_1 needs k = n + 1 = {}, got k = {}",
                        n + 1,
                        self.k
                    )));
                }
            }
            AlgorithmSpec::Pnq => {
                if !matches!(self.placement, PlacementSpec::Rooted { .. }) {
                    return Err(ScenarioError::Invalid("pnq needs a rooted placement".into()));
                }
                if split_pq(n, self.k).is_none() {
                    let (p, q) = (self.k / n, self.k % n);
                    return Err(ScenarioError::OpenCase { k: self.k, n, p, q });
                }
            }
            _ => {}
        }
        match &self.schedule {
            ScheduleSpec::Fixed { rounds, .. } => {
                if rounds.is_empty() {
                    return Err(ScenarioError::Invalid("fixed schedule needs at least one round".into()));
                }
                for (i, pairs) in rounds.iter().enumerate() {
                    Snapshot::from_pairs(&f, i as u64 + 1, pairs.iter().copied()).map_err(|e| {
                        ScenarioError::Invalid(format!("fixed schedule entry {}: {e}", i + 1))
                    })?;
                }
            }
            ScheduleSpec::RandomEllBounded { ell, .. } if *ell == 0 => {
                return Err(ScenarioError::Invalid("random_ell_bounded needs ell ≥ 1".into()));
            }
            ScheduleSpec::TemporalSplitMax | ScheduleSpec::TemporalSplitMin | ScheduleSpec::PathSort { .. }
                if !matches!(self.footprint, FootprintSpec::Clique { .. }) =>
            {
                return Err(ScenarioError::Invalid(format!("{} needs a clique footprint", self.schedule.label())));
            }
            ScheduleSpec::RingOneEdge { .. } if !matches!(self.footprint, FootprintSpec::Ring { .. }) => {
                return Err(ScenarioError::Invalid("ring_one_edge needs a ring footprint".into()));
            }
            _ => {}
        }
        Ok(())
    }

    fn check_model(&self) -> Result<(), ScenarioError> {
        let required = self.algorithm.requirements();
        if self.model.satisfies(&required) {
            return Ok(());
        }
        let reason = match (&self.algorithm, self.model.visibility) {
            (AlgorithmSpec::WeakDisp { .. } | AlgorithmSpec::BalancedGlobal { .. }, Visibility::ZeroHop) => {
                "with zero_hop visibility even global communication cannot reach k-balanced dispersion on \
                 1-bounded 1-interval connected rings, so one_hop visibility is necessary"
            }
            (AlgorithmSpec::WeakDisp { .. } | AlgorithmSpec::BalancedGlobal { .. }, _) => {
                "one_hop visibility with f2f communication cannot reach k-balanced dispersion on 1-bounded \
                 1-interval connected rings, so global communication is necessary"
            }
            _ => "the algorithm reads neighbor occupancy, which zero_hop visibility does not provide",
        };
        Err(ScenarioError::ModelTooWeak {
            algorithm: self.algorithm.name(),
            required,
            given: self.model,
            reason: reason.into(),
        })
    }

    pub fn build_footprint(&self) -> Result<Footprint, ScenarioError> {
        let (kind, n, shuffle) = match &self.footprint {
            FootprintSpec::Clique { n, shuffle_ports } => (FootprintKind::Clique, *n, *shuffle_ports),
            FootprintSpec::Ring { n, shuffle_ports } => (FootprintKind::Ring, *n, *shuffle_ports),
            FootprintSpec::Path { n, shuffle_ports } => (FootprintKind::Path, *n, *shuffle_ports),
            FootprintSpec::Explicit { ports } => return Ok(Footprint::with_port_order(ports.len(), ports)?),
        };
        let f = Footprint::make(kind, n)?;
        if shuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ PORT_STREAM);
            Ok(f.with_shuffled_ports(&mut rng))
        } else {
            Ok(f)
        }
    }

    fn assign_ids(&self) -> Result<Vec<AgentId>, ScenarioError> {
        let k = self.k as AgentId;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ID_STREAM);
        match self.ids {
            IdSpec::Sequential => Ok((1..=k).collect()),
            IdSpec::Shuffled => {
                let mut ids: Vec<AgentId> = (1..=k).collect();
                ids.shuffle(&mut rng);
                Ok(ids)
            }
            IdSpec::Sparse { bound } => {
                if bound < k {
                    return Err(ScenarioError::Invalid(format!(
                        "id bound {bound} is smaller than k = {k}"
                    )));
                }
                let mut picked = rand::seq::index::sample(&mut rng, bound as usize, self.k).into_vec();
                picked.sort_unstable();
                let mut ids: Vec<AgentId> = picked.into_iter().map(|x| x as AgentId + 1).collect();
                ids.shuffle(&mut rng);
                Ok(ids)
            }
        }
    }

    pub fn build_configuration(&self) -> Result<Configuration, ScenarioError> {
        let n = self.n();
        let k = self.k;
        let nodes: Vec<NodeId> = match &self.placement {
            PlacementSpec::Explicit { agents } => {
                if agents.len() != n {
                    return Err(ScenarioError::Invalid(format!(
                        "explicit placement lists {} nodes, footprint has {n}",
                        agents.len()
                    )));
                }
                let total: usize = agents.iter().map(Vec::len).sum();
                if total != k {
                    return Err(ScenarioError::Invalid(format!("placement holds {total} agents, k = {k}")));
                }
                return Ok(Configuration::from_placement(agents)?);
            }
            PlacementSpec::Rooted { node } => {
                if *node >= n {
                    return Err(ScenarioError::Invalid(format!("root node {node} out of range (n = {n})")));
                }
                vec![*node; k]
            }
            PlacementSpec::Counts { counts } => {
                if counts.len() != n {
                    return Err(ScenarioError::Invalid(format!(
                        "placement lists {} counts, footprint has {n} nodes",
                        counts.len()
                    )));
                }
                let total: usize = counts.iter().sum();
                if total != k {
                    return Err(ScenarioError::Invalid(format!("placement holds {total} agents, k = {k}")));
                }
                counts.iter().enumerate().flat_map(|(v, &c)| std::iter::repeat(v).take(c)).collect()
            }
            PlacementSpec::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ PLACEMENT_STREAM);
                let mut nodes: Vec<NodeId> = (0..k).map(|_| rng.random_range(0..n)).collect();
                nodes.sort_unstable();
                nodes
            }
        };
        let ids = self.assign_ids()?;
        Ok(Configuration::new(n, ids.into_iter().zip(nodes))?)
    }

    /// Largest agent ID, the default ID bound for algorithms that need one.
    pub fn max_id(&self) -> Result<AgentId, ScenarioError> {
        Ok(self.build_configuration()?.ids().iter().copied().max().unwrap_or(0))
    }

    /// Fresh snapshot source for one run.
    pub fn schedule_source(&self, f: &Footprint) -> Result<ScheduleSource, ScenarioError> {
        let seed_or = |s: &Option<u64>| s.unwrap_or(self.seed);
        Ok(match &self.schedule {
            ScheduleSpec::Static => ScheduleSource::Fixed(Vec::new()),
            ScheduleSpec::Fixed { rounds, class } => {
                let mut list = Vec::with_capacity(rounds.len());
                for (i, pairs) in rounds.iter().enumerate() {
                    let s = Snapshot::from_pairs(f, i as u64 + 1, pairs.iter().copied())?;
                    list.push(s);
                }
                match class {
                    Some(c) => ScheduleSource::Declared(list, *c),
                    None => ScheduleSource::Fixed(list),
                }
            }
            ScheduleSpec::RandomOneBounded { seed } => {
                ScheduleSource::Adaptive(Box::new(RandomSchedule::new(RandomClass::OneBounded, seed_or(seed))))
            }
            ScheduleSpec::RandomEllBounded { ell, seed } => ScheduleSource::Adaptive(Box::new(RandomSchedule::new(
                RandomClass::EllBounded(*ell),
                seed_or(seed),
            ))),
            ScheduleSpec::Blocker => ScheduleSource::Adaptive(Box::new(LargestGroupBlocker::new())),
            ScheduleSpec::TemporalSplitMax => ScheduleSource::Adaptive(Box::new(SplitMax::new())),
            ScheduleSpec::TemporalSplitMin => ScheduleSource::Adaptive(Box::new(SplitMin::new())),
            ScheduleSpec::RingOneEdge { variant } => ScheduleSource::Adaptive(Box::new(RingOneEdge::new(*variant))),
            ScheduleSpec::PathSort { variant, ell } => {
                ScheduleSource::Adaptive(Box::new(PathSort::new(*variant, *ell)))
            }
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml())
    }
}
