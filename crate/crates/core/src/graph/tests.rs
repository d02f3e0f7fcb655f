use super::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn clique4() -> Footprint {
    Footprint::make(FootprintKind::Clique, 4).unwrap()
}

#[test]
fn generated_footprints_have_expected_shape() {
    let c = clique4();
    assert_eq!(c.m(), 6);
    assert!((0..4).all(|v| c.degree(v) == 3));
    let r = Footprint::make(FootprintKind::Ring, 3).unwrap();
    assert_eq!(r.m(), 3);
    assert!((0..3).all(|v| r.degree(v) == 2));
    let p = Footprint::make(FootprintKind::Path, 5).unwrap();
    assert_eq!(p.m(), 4);
    assert_eq!(p.degree(0), 1);
    assert_eq!(p.degree(4), 1);
}

#[test]
fn invalid_kind_size_combinations_are_rejected() {
    assert!(Footprint::make(FootprintKind::Ring, 2).is_err());
    assert!(Footprint::make(FootprintKind::Clique, 1).is_err());
    assert!(Footprint::make(FootprintKind::Path, 1).is_err());
}

#[test]
fn canonical_ports_follow_neighbor_index() {
    assert_eq!(clique4().neighbor_via_port(0, 0).unwrap(), 1);
    let ring3 = Footprint::make(FootprintKind::Ring, 3).unwrap();
    // node 2 of ring3 has neighbors {0, 1}; port 1 is the higher index
    assert_eq!(ring3.neighbor_via_port(2, 1).unwrap(), 1);
    let path5 = Footprint::make(FootprintKind::Path, 5).unwrap();
    assert_eq!(path5.neighbor_via_port(0, 0).unwrap(), 1);
    assert!(matches!(
        path5.neighbor_via_port(0, 1),
        Err(GraphError::PortOutOfRange { node: 0, port: 1, degree: 1 })
    ));
}

#[test]
fn explicit_labelings_are_validated() {
    assert!(Footprint::with_port_order(2, &[vec![1], vec![0]]).is_ok());
    assert!(Footprint::with_port_order(2, &[vec![1], vec![]]).is_err());
    assert!(Footprint::with_port_order(2, &[vec![0], vec![]]).is_err());
    assert!(Footprint::with_port_order(3, &[vec![1, 1], vec![0, 0], vec![]]).is_err());
}

#[test]
fn port_of_inverts_edge_at() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = Footprint::make(FootprintKind::Clique, 6).unwrap().with_shuffled_ports(&mut rng);
    for v in 0..f.n() {
        for p in 0..f.degree(v) {
            assert_eq!(f.port_of(f.edge_at(v, p), v), p);
        }
    }
}

#[test]
fn connectivity_examples() {
    let f = clique4();
    assert!(is_snapshot_connected(&f, &Snapshot::full(&f, 0)));
    // round-0 split: node 0 isolated from the triangle on {1,2,3}
    let split = Snapshot::from_pairs(&f, 0, [(1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(!is_snapshot_connected(&f, &split));
    assert_eq!(missing_edge_count(&f, &split), 3);
    let ring4 = Footprint::make(FootprintKind::Ring, 4).unwrap();
    let s = Snapshot::without(&ring4, 0, [0]);
    assert!(is_snapshot_connected(&ring4, &s));
    assert_eq!(missing_edge_count(&ring4, &s), 1);
}

#[test]
fn path_snapshot_on_clique_missing_count() {
    for n in 6..=10usize {
        let f = Footprint::make(FootprintKind::Clique, n).unwrap();
        let s = Snapshot::from_pairs(&f, 0, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        let direct = missing_edge_count(&f, &s);
        assert_eq!(direct, (n - 1) * (n - 2) / 2);
        assert_eq!(direct, n * (n - 1) / 2 - (n - 1));
        assert!(direct <= (n * (n - 2) + 2) / 2);
        assert!(direct <= n * n);
    }
}

#[test]
fn journey_to_self_is_empty() {
    let f = clique4();
    let prefix = vec![Snapshot::empty(&f, 0)];
    assert_eq!(find_journey(&f, &prefix, 2, 2, 0), Some(Journey::default()));
}

#[test]
fn static_clique_journey_is_direct() {
    let f = clique4();
    let prefix: Vec<_> = (5..10).map(|r| Snapshot::full(&f, r)).collect();
    let j = find_journey(&f, &prefix, 0, 3, 5).unwrap();
    assert_eq!(j.steps, vec![(f.edge_between(0, 3).unwrap(), 5)]);
    assert!(j.is_valid(&f, &prefix, 0, 3));
}

#[test]
fn journey_waits_for_edges() {
    let f = Footprint::make(FootprintKind::Path, 3).unwrap();
    let e01 = f.edge_between(0, 1).unwrap();
    let e12 = f.edge_between(1, 2).unwrap();
    let prefix = vec![
        Snapshot::from_edges(&f, 0, [e12]).unwrap(),
        Snapshot::from_edges(&f, 1, [e01]).unwrap(),
        Snapshot::empty(&f, 2),
        Snapshot::from_edges(&f, 3, [e12]).unwrap(),
    ];
    let j = find_journey(&f, &prefix, 0, 2, 0).unwrap();
    assert_eq!(j.steps, vec![(e01, 1), (e12, 3)]);
    assert!(j.is_valid(&f, &prefix, 0, 2));
    assert!(find_journey_within(&f, &prefix, 0, 2, 0, 3).is_none());
    let back = find_journey(&f, &prefix, 2, 0, 0).unwrap();
    assert_eq!(back.steps, vec![(e12, 0), (e01, 1)]);
}

#[test]
fn journey_rejects_same_round_two_hops() {
    let f = Footprint::make(FootprintKind::Path, 3).unwrap();
    let prefix = vec![Snapshot::full(&f, 0)];
    assert!(find_journey(&f, &prefix, 0, 2, 0).is_none());
    let bad = Journey {
        steps: vec![(0, 0), (1, 0)],
    };
    assert!(!bad.is_valid(&f, &prefix, 0, 2));
}

#[test]
fn temporal_checker_examples() {
    let f = clique4();
    let stat: Vec<_> = (0..10).map(|r| Snapshot::full(&f, r)).collect();
    assert!(check_temporal_connectivity(&f, &stat, 0..5, 1));
    let isolating: Vec<_> = (0..10)
        .map(|r| Snapshot::from_pairs(&f, r, [(1, 2), (1, 3), (2, 3)]).unwrap())
        .collect();
    assert!(!check_temporal_connectivity(&f, &isolating, 0..5, 5));
    // prefix too short for the horizon
    let path = Footprint::make(FootprintKind::Path, 3).unwrap();
    let short: Vec<_> = (0..2).map(|r| Snapshot::full(&path, r)).collect();
    assert!(check_temporal_connectivity(&path, &short, 0..1, 2));
    assert!(!check_temporal_connectivity(&path, &short, 0..2, 2));
}

#[test]
fn ell_bounded_examples() {
    let f = Footprint::make(FootprintKind::Ring, 5).unwrap();
    let stat: Vec<_> = (0..4).map(|r| Snapshot::full(&f, r)).collect();
    assert!(check_ell_bounded(&f, &stat, 0));
    let one: Vec<_> = (0..5).map(|r| Snapshot::without(&f, r as u64, [r])).collect();
    assert!(check_ell_bounded(&f, &one, 1));
    assert!(!check_ell_bounded(&f, &one, 0));
    let c = clique4();
    let split: Vec<_> = (0..3)
        .map(|r| Snapshot::from_pairs(&c, r, [(1, 2), (1, 3), (2, 3)]).unwrap())
        .collect();
    assert!(!check_ell_bounded(&c, &split, 6));
    assert_eq!(first_ell_violation(&c, &split, 6), Some(0));
}

#[test]
fn snapshot_round_trips_through_json() {
    let f = clique4();
    let s = Snapshot::without(&f, 7, [1, 4]);
    let text = serde_json::to_string(&s).unwrap();
    let back: Snapshot = serde_json::from_str(&text).unwrap();
    assert_eq!(s, back);
    let ftext = serde_json::to_string(&f).unwrap();
    let fback: Footprint = serde_json::from_str(&ftext).unwrap();
    assert_eq!(f, fback);
}
