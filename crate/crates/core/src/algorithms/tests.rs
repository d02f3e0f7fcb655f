use std::sync::Arc;

use super::balanced_global::balancing_route;
use super::rooted::{split_pq, Book, DfsMode, GroupLabel, Machine, MachineParams, Member, NodeView, Records, StoredTriple};
use super::*;
use crate::engine::{
    is_balanced, AgentId, Algorithm, Communication, Configuration, ModelSpec, MoveIntent, Observation, Transition,
    Visibility,
};
use crate::graph::{Footprint, FootprintKind, Snapshot};
use crate::runner::run_summary;
use crate::scenario::Scenario;

const ONE_GLOBAL: ModelSpec = ModelSpec::new(Visibility::OneHop, Communication::Global);
const ZERO_F2F: ModelSpec = ModelSpec::new(Visibility::ZeroHop, Communication::F2f);

fn label(s: &str) -> GroupLabel {
    s.parse().unwrap()
}

fn counts_cfg(counts: &[usize]) -> Configuration {
    let mut next = 1;
    let placement: Vec<Vec<AgentId>> = counts
        .iter()
        .map(|&c| {
            let ids = (next..next + c as AgentId).collect();
            next += c as AgentId;
            ids
        })
        .collect();
    Configuration::from_placement(&placement).unwrap()
}

// ---- group labels

#[test]
fn initial_label_is_one_zero() {
    let l = GroupLabel::initial();
    assert_eq!(l.to_string(), "10");
    assert_eq!(l.len(), 2);
    assert!(!l.is_g2());
    assert!(l.with(true).is_g2());
    assert!(l.is_prefix_of(&l.with(false).with(true)));
    assert!(!label("101").is_prefix_of(&label("100")));
    assert!("12".parse::<GroupLabel>().is_err());
}

#[test]
fn labels_longer_than_a_word_round_trip() {
    let s: String = (0..150).map(|i| if i % 3 == 0 { '1' } else { '0' }).collect();
    let l = label(&s);
    assert_eq!(l.len(), 150);
    assert_eq!(l.to_string(), s);
    let json = serde_json::to_string(&l).unwrap();
    assert_eq!(serde_json::from_str::<GroupLabel>(&json).unwrap(), l);
}

// ---- the group DFS machine, driven directly

fn machine(n: usize) -> Machine {
    Machine::new(MachineParams::new(n, 1))
}

/// A settled keeper (ID 0) and the given unsettled agents at a node of degree `deg`.
struct Node {
    deg: usize,
    keeper: RootedState,
    agents: Vec<(AgentId, RootedState)>,
}

impl Node {
    fn new(deg: usize, records: Records, agents: Vec<(AgentId, RootedState)>) -> Self {
        let keeper = RootedState {
            settled: true,
            stored: records,
            ..Default::default()
        };
        Node { deg, keeper, agents }
    }

    fn view(&self) -> NodeView<'_> {
        let mut members = vec![Member {
            id: 0,
            state: &self.keeper,
            records: Some(&self.keeper.stored),
        }];
        members.extend(self.agents.iter().map(|(id, s)| Member {
            id: *id,
            state: s,
            records: None,
        }));
        NodeView { degree: self.deg, members }
    }
}

/// State about to take an odd round after a blocked move.
fn blocked(l: &str) -> RootedState {
    let mut s = RootedState::with_label(label(l));
    s.r = 2;
    s.success = false;
    s.prt_in = Some(1);
    s.prt_out = Some(2);
    s
}

fn step_all(m: &Machine, node: &Node) -> Vec<super::rooted::Step> {
    let view = node.view();
    node.agents
        .iter()
        .map(|(id, s)| m.step(*id, s, &view, false, None))
        .collect()
}

#[test]
fn group_divide_three_agents() {
    let m = machine(5);
    let node = Node::new(3, Records::default(), (1..=3).map(|id| (id, blocked("10"))).collect());
    let steps = step_all(&m, &node);
    let labels: Vec<String> = steps.iter().map(|s| s.state.grp_label.to_string()).collect();
    assert_eq!(labels, ["100", "100", "101"]);
    for s in &steps {
        assert!(s.state.divide);
        assert_eq!(s.intent, MoveIntent::Move(0));
        assert_eq!(s.state.mode, DfsMode::Explore);
        assert_eq!(s.state.skip, None);
        assert_eq!(s.state.prt_out, Some(0));
        assert_eq!(s.state.dfs_label, 2);
        assert_eq!(s.book, Book::Divide { label: label("10"), dfs: 2 });
    }
}

#[test]
fn group_divide_halves_by_id_rank() {
    let m = machine(5);
    let node = Node::new(3, Records::default(), [4, 7, 8, 9].iter().map(|&id| (id, blocked("10"))).collect());
    let g2: Vec<bool> = step_all(&m, &node).iter().map(|s| s.state.in_g2()).collect();
    assert_eq!(g2, [false, false, true, true]);
}

#[test]
fn group_divide_single_agent_stays_in_g1() {
    let m = machine(5);
    let node = Node::new(3, Records::default(), vec![(6, blocked("10"))]);
    let s = &step_all(&m, &node)[0];
    assert_eq!(s.state.grp_label.to_string(), "100");
    assert_eq!(s.intent, MoveIntent::Move(0));
}

#[test]
fn g1_retries_then_divides_at_the_limit() {
    let m = machine(3);
    let limit = m.params.limit1;
    assert_eq!(limit, 16 * 9);
    let mut s = blocked("100");
    s.divide = true;
    s.count_1 = limit - 2;
    let node = Node::new(3, Records::default(), vec![(1, s.clone()), (2, s.clone())]);
    let steps = step_all(&m, &node);
    assert_eq!(steps[0].state.count_1, limit - 1);
    assert_eq!(steps[0].intent, MoveIntent::Move(2));
    assert_eq!(steps[0].book, Book::None);

    s.count_1 = limit - 1;
    let node = Node::new(3, Records::default(), vec![(1, s.clone()), (2, s)]);
    let steps = step_all(&m, &node);
    assert_eq!(steps[0].state.grp_label.to_string(), "1000");
    assert_eq!(steps[1].state.grp_label.to_string(), "1001");
    assert_eq!(steps[0].state.count_1, 0);
}

#[test]
fn g1_counter_resets_on_success() {
    let m = machine(3);
    let mut s = blocked("10");
    s.divide = true;
    s.count_1 = 17;
    s.success = true;
    s.prt_in = Some(1);
    let node = Node::new(3, Records::default(), vec![(1, s)]);
    let st = &step_all(&m, &node)[0];
    assert_eq!(st.state.count_1, 0);
    // a node unseen by this DFS: leave through prt_in + 1
    assert_eq!(st.intent, MoveIntent::Move(2));
}

#[test]
fn g2_restarts_with_skip_after_count_2() {
    let m = machine(3);
    let mut s = blocked("101");
    s.count_2 = m.params.limit2 - 1;
    let node = Node::new(3, Records::default(), vec![(5, s)]);
    let st = &step_all(&m, &node)[0];
    assert_eq!(st.state.count_2, 0);
    assert_eq!(st.state.count_3, 1);
    assert_eq!(st.state.skip, Some(2));
    assert_eq!(st.state.dfs_label, 2);
    assert_eq!(st.intent, MoveIntent::Move(0));
    assert_eq!(st.book, Book::Root { label: label("101"), dfs: 2 });
}

#[test]
fn g2_divides_when_count_3_runs_out() {
    let m = machine(3);
    let mut s = blocked("101");
    s.count_2 = m.params.limit2 - 1;
    s.count_3 = m.params.limit3 - 1;
    let node = Node::new(3, Records::default(), vec![(5, s.clone()), (6, s)]);
    let steps = step_all(&m, &node);
    assert_eq!(steps[0].state.grp_label.to_string(), "1010");
    assert_eq!(steps[1].state.grp_label.to_string(), "1011");
}

#[test]
fn g2_reroutes_around_a_blocked_g1_edge() {
    let m = machine(4);
    let mut g1 = blocked("100");
    g1.divide = true;
    let mut g2 = blocked("101");
    g2.count_2 = 3;
    let rec = Records {
        g1: StoredTriple::default(),
        g2: StoredTriple {
            parent: Some(0),
            label: Some(label("101")),
            dfs_label: 1,
        },
    };
    let node = Node::new(4, rec, vec![(1, g1), (2, g2)]);
    let steps = step_all(&m, &node);
    // G1 retries port 2; G2 shares it and moves on to port 3 at once
    assert_eq!(steps[0].intent, MoveIntent::Move(2));
    assert_eq!(steps[1].intent, MoveIntent::Move(3));
    assert_eq!(steps[1].state.count_2, 0);
}

#[test]
fn g2_fresh_dfs_at_the_root_after_the_last_port() {
    let m = machine(4);
    let mut s = RootedState::with_label(label("101"));
    s.r = 2;
    s.mode = DfsMode::Backtrack;
    s.prt_in = Some(2);
    s.skip = Some(3);
    let rec = Records {
        g1: StoredTriple::default(),
        g2: StoredTriple {
            parent: None,
            label: Some(label("101")),
            dfs_label: 1,
        },
    };
    let node = Node::new(4, rec, vec![(3, s)]);
    let st = &step_all(&m, &node)[0];
    assert_eq!(st.state.skip, None);
    assert_eq!(st.state.prt_out, Some(0));
    assert_eq!(st.state.dfs_label, 2);
    assert_eq!(st.book, Book::Root { label: label("101"), dfs: 2 });
}

#[test]
fn even_round_reads_the_move_outcome() {
    let m = machine(3);
    let s = RootedState { r: 1, ..Default::default() };
    let node = Node::new(2, Records::default(), vec![]);
    let st = m.step(1, &s, &node.view(), false, None);
    assert!(!st.state.success);
    assert_eq!(st.intent, MoveIntent::Stay);
    let st = m.step(1, &s, &node.view(), true, Some(1));
    assert!(st.state.success);
    assert_eq!(st.state.prt_in, Some(1));
}

#[test]
fn minimum_id_settles_at_an_empty_node() {
    let m = machine(3);
    let s = RootedState { r: 2, ..Default::default() };
    let agents = [(3, s.clone()), (8, s.clone())];
    let view = NodeView {
        degree: 2,
        members: agents
            .iter()
            .map(|(id, s)| Member {
                id: *id,
                state: s,
                records: None,
            })
            .collect(),
    };
    let a = m.step(3, &s, &view, true, None);
    let b = m.step(8, &s, &view, true, None);
    assert!(a.state.settled && a.intent == MoveIntent::Stay);
    assert!(!b.state.settled);
    assert_eq!(b.intent, MoveIntent::Move(0));
    // the settler records the other agent's fresh visit
    assert_eq!(a.state.stored.g1.label, Some(label("10")));
    assert_eq!(a.state.stored.g1.parent, None);
}

#[test]
fn keeper_ignores_a_visitor_with_a_known_label() {
    let m = machine(3);
    let rec = Records {
        g1: StoredTriple {
            parent: Some(1),
            label: Some(label("10")),
            dfs_label: 1,
        },
        g2: StoredTriple::default(),
    };
    let v = RootedState {
        r: 4,
        prt_in: Some(0),
        ..Default::default()
    };
    let node = Node::new(3, rec.clone(), vec![(2, v)]);
    assert_eq!(m.keeper(&rec, &node.view()), rec);
}

#[test]
fn keeper_records_a_fresh_explore_arrival() {
    let m = machine(3);
    let rec = Records {
        g1: StoredTriple {
            parent: Some(1),
            label: Some(label("10")),
            dfs_label: 1,
        },
        g2: StoredTriple::default(),
    };
    let mut v = RootedState::with_label(label("100"));
    v.r = 4;
    v.dfs_label = 2;
    v.prt_in = Some(2);
    let node = Node::new(3, rec.clone(), vec![(2, v)]);
    let out = m.keeper(&rec, &node.view());
    assert_eq!(
        out.g1,
        StoredTriple {
            parent: Some(2),
            label: Some(label("100")),
            dfs_label: 2
        }
    );
    assert_eq!(out.g2, rec.g2);
}

#[test]
fn keeper_prerecords_division_roots() {
    let m = machine(3);
    let rec = Records::default();
    let mut v = blocked("10");
    v.divide = true;
    v.count_1 = m.params.limit1 - 2;
    let node = Node::new(3, rec.clone(), vec![(1, v.clone()), (2, v.clone())]);
    assert_eq!(m.keeper(&rec, &node.view()), rec);

    v.count_1 = m.params.limit1 - 1;
    let node = Node::new(3, rec.clone(), vec![(1, v.clone()), (2, v)]);
    let out = m.keeper(&rec, &node.view());
    assert_eq!(out.g1.label, Some(label("100")));
    assert_eq!(out.g2.label, Some(label("101")));
    assert_eq!((out.g1.parent, out.g2.parent), (None, None));
    assert_eq!((out.g1.dfs_label, out.g2.dfs_label), (2, 2));
}

#[test]
fn keeper_records_a_g2_restart_root() {
    let m = machine(3);
    let rec = Records::default();
    let mut v = blocked("101");
    v.count_2 = m.params.limit2 - 1;
    let node = Node::new(3, rec.clone(), vec![(4, v)]);
    let out = m.keeper(&rec, &node.view());
    assert_eq!(
        out.g2,
        StoredTriple {
            parent: None,
            label: Some(label("101")),
            dfs_label: 2
        }
    );
}

// ---- node summaries

/// Stores the node summary its agent would broadcast.
struct SvProbe;

impl Algorithm for SvProbe {
    type State = Option<Vec<SvTuple>>;
    type Message = ();

    fn name(&self) -> &'static str {
        "sv_probe"
    }

    fn requirements(&self) -> ModelSpec {
        ONE_GLOBAL
    }

    fn initial_state(&self, _id: AgentId) -> Self::State {
        None
    }

    fn transition(&self, obs: &Observation<'_, Self::State, ()>) -> Transition<Self::State> {
        Transition::stay(build_sv(obs))
    }

    fn memory_bits(&self, _state: &Self::State) -> u64 {
        0
    }
}

fn summaries(f: Footprint, placement: &[Vec<AgentId>]) -> Vec<Vec<SvTuple>> {
    let cfg = Configuration::from_placement(placement).unwrap();
    let snap = Snapshot::full(&f, 1);
    let mut sim = crate::engine::Simulation::new(SvProbe, Arc::new(f), ONE_GLOBAL, &cfg).unwrap();
    sim.step_with(&snap).unwrap();
    sim.states().iter().map(|s| s.clone().unwrap()).collect()
}

#[test]
fn sv_all_hole_neighbors_carry_no_id() {
    let f = Footprint::make(FootprintKind::Ring, 5).unwrap();
    let sv = &summaries(f, &[vec![3], vec![], vec![], vec![], vec![]])[0];
    assert_eq!(sv.len(), 2);
    assert!(sv.iter().all(|t| t.id_u.is_none() && t.alpha == 1 && t.id_v == 3));
}

#[test]
fn sv_neighbor_id_is_the_minimum_there() {
    let f = Footprint::make(FootprintKind::Path, 2).unwrap();
    let sv = summaries(f, &[vec![2], vec![9, 5]]);
    assert_eq!(sv[0][0].id_u, Some(5));
    assert_eq!(sv[1][0].id_v, 5);
    assert_eq!(sv[1][0].alpha, 2);
}

#[test]
fn sv_fig1_layout_has_one_hole_tuple_per_node() {
    let f = Footprint::make(FootprintKind::Clique, 4).unwrap();
    let sv = summaries(f, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9], vec![]]);
    for node in sv.iter().step_by(3) {
        assert_eq!(node.len(), 3);
        assert_eq!(node.iter().filter(|t| t.id_u.is_none()).count(), 1);
        assert_eq!(node[0].alpha, 3);
    }
}

fn tuples(id: AgentId, alpha: u32, nbrs: &[Option<AgentId>]) -> (AgentId, Vec<SvTuple>) {
    let t = nbrs
        .iter()
        .enumerate()
        .map(|(port, &id_u)| SvTuple {
            alpha,
            id_v: id,
            port,
            edge_present: true,
            id_u,
        })
        .collect();
    (id, t)
}

#[test]
fn slide_plan_fills_the_adjacent_hole() {
    // path a(1,2) - b(3) - hole
    let map = OccupiedMap::from_messages(&[tuples(1, 2, &[Some(3)]), tuples(3, 1, &[Some(1), None])]);
    assert!(map.any_hole() && map.any_multinode());
    assert_eq!(map.slide_plan(), vec![(1, 0), (3, 1)]);
}

#[test]
fn slide_plan_is_empty_without_multinodes() {
    let map = OccupiedMap::from_messages(&[tuples(1, 1, &[None, Some(4)]), tuples(4, 1, &[Some(1), None])]);
    assert!(map.slide_plan().is_empty());
}

#[test]
fn balancing_route_picks_smallest_names() {
    // clique of three: counts 3, 1, 1 with k = 5 -> ceil 2, move one from 1 to 4
    let map = OccupiedMap::from_messages(&[
        tuples(1, 3, &[Some(4), Some(5)]),
        tuples(4, 1, &[Some(1), Some(5)]),
        tuples(5, 1, &[Some(1), Some(4)]),
    ]);
    assert_eq!(balancing_route(&map), Some(vec![(1, 0)]));
    let even = OccupiedMap::from_messages(&[tuples(1, 2, &[Some(3)]), tuples(3, 1, &[Some(1)])]);
    assert_eq!(balancing_route(&even), None);
}

// ---- whole algorithms

fn run_static<A: Algorithm>(
    algo: A,
    f: Footprint,
    model: ModelSpec,
    cfg: &Configuration,
    rounds: u64,
) -> crate::engine::Simulation<A> {
    let snap = Snapshot::full(&f, 1);
    let mut sim = crate::engine::Simulation::new(algo, Arc::new(f), model, cfg).unwrap();
    for _ in 0..rounds {
        if sim.all_terminated() {
            break;
        }
        sim.step_with(&snap).unwrap();
    }
    sim
}

#[test]
fn weak_disp_without_multinode_terminates_in_place() {
    let f = Footprint::make(FootprintKind::Ring, 5).unwrap();
    let cfg = counts_cfg(&[1, 0, 1, 1, 0]);
    let sim = run_static(WeakDisp::new(8), f, ONE_GLOBAL, &cfg, 1);
    assert!(sim.all_terminated());
    assert_eq!(sim.counts(), vec![1, 0, 1, 1, 0]);
}

#[test]
fn weak_disp_moves_one_agent_into_an_adjacent_hole() {
    let f = Footprint::make(FootprintKind::Path, 3).unwrap();
    let cfg = counts_cfg(&[2, 0, 0]);
    let sim = run_static(WeakDisp::new(8), f, ONE_GLOBAL, &cfg, 1);
    assert_eq!(sim.counts(), vec![1, 1, 0]);
}

#[test]
fn weak_disp_disperses_k_at_most_n() {
    let f = Footprint::make(FootprintKind::Ring, 7).unwrap();
    let cfg = counts_cfg(&[4, 0, 0, 2, 0, 0, 0]);
    let sim = run_static(WeakDisp::new(8), f, ONE_GLOBAL, &cfg, 20);
    assert!(sim.counts().iter().all(|&c| c <= 1));
}

#[test]
fn balanced_global_one_per_node_terminates_on_round_two() {
    let f = Footprint::make(FootprintKind::Ring, 4).unwrap();
    let cfg = counts_cfg(&[1, 1, 1, 1]);
    let mut sim = crate::engine::Simulation::new(BalancedGlobal::new(4), Arc::new(f.clone()), ONE_GLOBAL, &cfg).unwrap();
    let snap = Snapshot::full(&f, 1);
    sim.step_with(&snap).unwrap();
    assert!(sim.states().iter().all(|s| s.balancing));
    assert!(!sim.all_terminated());
    sim.step_with(&snap).unwrap();
    assert!(sim.all_terminated());
}

#[test]
fn balanced_global_fig1_balances() {
    let f = Footprint::make(FootprintKind::Clique, 4).unwrap();
    let cfg = counts_cfg(&[3, 3, 3, 0]);
    let sim = run_static(BalancedGlobal::new(9), f, ONE_GLOBAL, &cfg, 4 * (4 + 9));
    assert!(sim.all_terminated());
    let mut c = sim.counts();
    c.sort_unstable();
    assert_eq!(c, vec![2, 2, 2, 3]);
}

#[test]
fn balanced_global_hole_without_multinode_terminates() {
    let f = Footprint::make(FootprintKind::Ring, 6).unwrap();
    let cfg = counts_cfg(&[1, 0, 1, 0, 1, 0]);
    let sim = run_static(BalancedGlobal::new(6), f, ONE_GLOBAL, &cfg, 1);
    assert!(sim.all_terminated());
    assert!(is_balanced(&sim.counts(), 3));
}

#[test]
fn pnq_phase_one_grouping() {
    assert_eq!(split_pq(4, 10), Some((2, 2)));
    assert_eq!(split_pq(4, 5), Some((1, 1)));
    assert_eq!(split_pq(4, 2), Some((0, 2)));
    assert_eq!(split_pq(4, 4), None);
    assert_eq!(split_pq(5, 13), None);
    assert_eq!(split_pq(2, 4), Some((1, 2)));

    let f = Footprint::make(FootprintKind::Ring, 4).unwrap();
    let cfg = Configuration::rooted(4, 10, 0).unwrap();
    let sim = run_static(Pnq::new(4), f, ZERO_F2F, &cfg, 1);
    let mut sizes = [0usize; 5];
    for s in sim.states() {
        sizes[s.id1.unwrap() as usize] += 1;
    }
    assert_eq!(&sizes[1..], &[2, 2, 2, 4]);
    let reserve: Vec<bool> = sim.states().iter().map(|s| s.reserve).collect();
    assert_eq!(reserve.iter().filter(|&&r| r).count(), 2);
}

#[test]
fn pnq_two_agents_split_through_ports_zero_and_one() {
    let f = Footprint::make(FootprintKind::Clique, 4).unwrap();
    let cfg = Configuration::rooted(4, 2, 0).unwrap();
    let snap = Snapshot::full(&f, 1);
    let mut sim = crate::engine::Simulation::new(Pnq::new(4), Arc::new(f.clone()), ZERO_F2F, &cfg).unwrap();
    let rec = sim.step_with(&snap).unwrap();
    let ports: Vec<_> = rec.intents.iter().map(|i| i.and_then(|i| i.port())).collect();
    assert_eq!(ports, vec![Some(0), Some(1)]);
    sim.step_with(&snap).unwrap();
    assert!(sim.all_terminated());
    assert_eq!(sim.counts().iter().filter(|&&c| c == 1).count(), 2);
}

#[test]
fn pnq_two_agents_on_a_leaf() {
    let f = Footprint::make(FootprintKind::Path, 3).unwrap();
    let cfg = Configuration::rooted(3, 2, 0).unwrap();
    let sim = run_static(Pnq::new(3), f, ZERO_F2F, &cfg, 3);
    assert!(sim.all_terminated());
    assert_eq!(sim.counts(), vec![1, 1, 0]);
}

#[test]
fn pnq_n_plus_one_matches_the_rooted_algorithm_outcome() {
    let f = Footprint::make(FootprintKind::Ring, 4).unwrap();
    let cfg = Configuration::rooted(4, 5, 0).unwrap();
    let sim = run_static(Pnq::new(4), f, ZERO_F2F, &cfg, 200);
    let mut c = sim.counts();
    c.sort_unstable();
    assert_eq!(c, vec![1, 1, 1, 2]);
}

#[test]
fn rooted_ring4_static_disperses_early_and_terminates_at_the_bound() {
    let sc = Scenario::parse(include_str!("../../../../scenarios/rooted_ring4_static.toml")).unwrap();
    let s = run_summary(&sc).unwrap();
    assert_eq!(termination_round(4), 8 * 16 + 128 * 256 * 2);
    assert_eq!(s.rounds, termination_round(4));
    assert!(s.outcome.is_balanced());
    let first = s.first_balanced.unwrap();
    // a static ring has m = 4 edges, so 8m = 32 rounds of DFS
    assert!(first <= 64, "first balanced round {first}");
}

#[test]
fn rooted_settled_agents_never_move() {
    let f = Footprint::make(FootprintKind::Clique, 5).unwrap();
    let cfg = Configuration::rooted(5, 6, 0).unwrap();
    let snap = Snapshot::full(&f, 1);
    let mut sim = crate::engine::Simulation::new(RootedNPlusOne::new(5), Arc::new(f), ZERO_F2F, &cfg).unwrap();
    let mut pinned: Vec<Option<usize>> = vec![None; 6];
    for _ in 0..200 {
        sim.step_with(&snap).unwrap();
        for (i, s) in sim.states().iter().enumerate() {
            let at = sim.positions()[i];
            match pinned[i] {
                Some(p) => assert_eq!(p, at),
                None if s.settled => pinned[i] = Some(at),
                None => {}
            }
        }
    }
    assert_eq!(pinned.iter().filter(|p| p.is_some()).count(), 5);
}

#[test]
fn memory_widths_grow_logarithmically() {
    let bg = BalancedGlobal::new(1000);
    assert_eq!(bg.memory_bits(&bg.initial_state(1)), 11);
    let wd = WeakDisp::new(1000);
    assert_eq!(wd.memory_bits(&wd.initial_state(1)), 10);
    let small = RootedNPlusOne::new(4);
    let large = RootedNPlusOne::new(64);
    let a = small.memory_bits(&RootedState::default());
    let b = large.memory_bits(&RootedState::default());
    assert!(b > a && b < 3 * a, "{a} -> {b}");
}
