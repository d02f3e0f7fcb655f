use std::fs;

use proptest::prelude::*;
use tvgdisp::engine::{is_balanced, trace_hash, Trace};
use tvgdisp::runner::{
    emit_summary_csv, emit_trace, run_experiment, run_summary, verify_schedule, Outcome, CSV_COLUMNS,
};
use tvgdisp::scenario::{
    AlgorithmSpec, FootprintSpec, IdSpec, PlacementSpec, Scenario, ScenarioError, ScheduleSpec,
};

const ROOTED_RING: &str = r#"
k = 6
max_rounds = 5000

[footprint]
kind = "ring"
n = 5

[placement]
kind = "rooted"
node = 0

[algorithm]
name = "rooted_n_plus_1"

[model]
visibility = "zero_hop"
communication = "f2f"

[schedule]
kind = "random_one_bounded"
"#;

fn scenario(name: &str) -> Scenario {
    let path = format!("{}/../../scenarios/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    Scenario::parse(&fs::read_to_string(path).unwrap()).unwrap()
}

fn edit(text: &str, from: &str, to: &str) -> String {
    assert!(text.contains(from), "{from:?} not in scenario");
    text.replacen(from, to, 1)
}

#[test]
fn minimal_rooted_scenario_parses() {
    let sc = Scenario::parse(ROOTED_RING).unwrap();
    assert_eq!(sc.n(), 5);
    assert_eq!(sc.seed, 0);
    assert_eq!(sc.scenario_id(), "rooted_n_plus_1-ring5-k6-random_one_bounded-s0");
}

#[test]
fn placement_short_of_k_is_rejected() {
    let text = r#"
k = 5
max_rounds = 10
[footprint]
kind = "ring"
n = 4
[placement]
kind = "counts"
counts = [1, 1, 1, 1]
[algorithm]
name = "balanced_global"
[model]
visibility = "one_hop"
communication = "global"
[schedule]
kind = "static"
"#;
    let err = Scenario::parse(text).unwrap_err();
    assert!(matches!(err, ScenarioError::Configuration(_) | ScenarioError::Invalid(_)), "{err:?}");
}

#[test]
fn balanced_global_with_zero_hop_is_rejected_as_necessary() {
    let text = edit(
        &fs::read_to_string(format!("{}/../../scenarios/balanced_global_fig1.toml", env!("CARGO_MANIFEST_DIR")))
            .unwrap(),
        "visibility = \"one_hop\"",
        "visibility = \"zero_hop\"",
    );
    let err = Scenario::parse(&text).unwrap_err();
    assert!(matches!(err, ScenarioError::ModelTooWeak { .. }));
    assert!(err.to_string().contains("one_hop visibility is necessary"), "{err}");
}

#[test]
fn pnq_with_q_three_is_an_open_case() {
    let text = edit(&edit(ROOTED_RING, "rooted_n_plus_1", "pnq"), "k = 6", "k = 13");
    let err = Scenario::parse(&text).unwrap_err();
    assert_eq!(err, ScenarioError::OpenCase { k: 13, n: 5, p: 2, q: 3 });
    assert!(err.to_string().contains("open problem"));
}

#[test]
fn rooted_needs_n_plus_one() {
    let err = Scenario::parse(&edit(ROOTED_RING, "k = 6", "k = 7")).unwrap_err();
    assert!(matches!(err, ScenarioError::Invalid(_)), "{err}");
}

#[test]
fn unknown_fields_are_rejected() {
    let err = Scenario::parse(&format!("colour = 1\n{ROOTED_RING}")).unwrap_err();
    assert!(matches!(err, ScenarioError::Parse(_)));
}

#[test]
fn split_schedule_needs_a_clique() {
    let err = Scenario::parse(&edit(ROOTED_RING, "random_one_bounded", "temporal_split_max")).unwrap_err();
    assert!(err.to_string().contains("clique"), "{err}");
}

#[test]
fn fig1_terminates_balanced() {
    let s = run_summary(&scenario("balanced_global_fig1")).unwrap();
    assert_eq!(s.outcome, Outcome::TerminatedBalanced);
    assert!(is_balanced(&s.final_counts, 9));
    assert_eq!((s.p, s.q), (2, 1));
}

#[test]
fn split_max_times_out_with_an_overfull_node_every_round() {
    let s = run_summary(&scenario("split_max")).unwrap();
    assert_eq!(s.outcome, Outcome::Timeout);
    assert_eq!(s.rounds, 1000);
    assert_eq!(s.balanced_rounds, 0);
    let p = (s.k / s.n) as u32;
    assert!(s.max_counts.iter().all(|&c| c >= p + 2));
}

#[test]
fn summary_matches_its_trace() {
    let (trace, s) = run_experiment(&Scenario::parse(ROOTED_RING).unwrap()).unwrap();
    assert_eq!(s.rounds, trace.records.len() as u64);
    assert_eq!(s.trace_digest, trace_hash(&trace));
    assert_eq!(s.trace_digest, trace.digest());
    assert_eq!(s.holes.len() as u64, s.rounds);
    let peak = trace.records.iter().flat_map(|r| r.memory_bits.iter().copied()).max().unwrap();
    assert_eq!(s.max_memory_bits, peak);
}

#[test]
fn same_scenario_writes_identical_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let sc = Scenario::parse(ROOTED_RING).unwrap();
    let mut files = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("t{i}.jsonl"));
        let (trace, _) = run_experiment(&sc).unwrap();
        emit_trace(&trace, fs::File::create(&path).unwrap()).unwrap();
        files.push(fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let back = Trace::read_jsonl(std::str::from_utf8(&files[0]).unwrap()).unwrap();
    assert_eq!(back.digest(), run_summary(&sc).unwrap().trace_digest);
}

#[test]
fn seed_changes_the_digest() {
    let mut sc = Scenario::parse(ROOTED_RING).unwrap();
    let a = run_summary(&sc).unwrap().trace_digest;
    sc.seed = 1;
    let b = run_summary(&sc).unwrap().trace_digest;
    assert_ne!(a, b);
}

#[test]
fn explicit_placement_order_does_not_matter() {
    let mk = |agents: Vec<Vec<u64>>| {
        let mut sc = scenario("balanced_global_fig1");
        sc.placement = PlacementSpec::Explicit { agents };
        run_summary(&sc).unwrap().trace_digest
    };
    let a = mk(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9], vec![]]);
    let b = mk(vec![vec![3, 1, 2], vec![6, 4, 5], vec![9, 8, 7], vec![]]);
    assert_eq!(a, b);
}

#[test]
fn empty_csv_is_header_only() {
    let mut out = Vec::new();
    emit_summary_csv(&[], &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));
}

#[test]
fn csv_has_one_row_per_run() {
    let runs: Vec<_> = (4..=8)
        .map(|n| {
            let sc = Scenario::parse(&edit(
                &edit(ROOTED_RING, "n = 5", &format!("n = {n}")),
                "k = 6",
                &format!("k = {}", n + 1),
            ))
            .unwrap();
            run_summary(&sc).unwrap()
        })
        .collect();
    let mut out = Vec::new();
    emit_summary_csv(&runs, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("rooted_n_plus_1-ring4-k5-random_one_bounded-s0,4,5,1,1,rooted_n_plus_1,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == CSV_COLUMNS.len()));
}

#[test]
fn verify_split_prefix_is_temporal() {
    let r = verify_schedule(&scenario("split_max"), 50).unwrap();
    assert!(r.class.starts_with("temporal"), "{}", r.class);
    assert!(r.passed());
    assert!(!r.rounds.is_empty());
}

#[test]
fn verify_ring_prefix_is_one_bounded() {
    let r = verify_schedule(&scenario("ring_one_edge"), 50).unwrap();
    assert_eq!(r.class, "one_bounded");
    assert_eq!(r.rounds.len(), 50);
    assert!(r.passed());
}

#[test]
fn verify_reports_the_disconnected_round() {
    let r = verify_schedule(&scenario("fixed_disconnected"), 6).unwrap();
    assert_eq!(r.first_failure(), Some(3));
    assert!(r.rounds[..2].iter().all(|v| v.pass));
}

#[test]
fn disconnected_fixed_run_is_a_class_violation() {
    let s = run_summary(&scenario("fixed_disconnected")).unwrap();
    assert_eq!(s.outcome, Outcome::AdversaryClassViolation);
    assert_eq!(s.outcome.exit_code(), 4);
    assert!(s.violation.is_some());
}

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    let footprint = (0..3usize, 3..8usize, any::<bool>()).prop_map(|(kind, n, shuffle_ports)| match kind {
        0 => FootprintSpec::Clique { n, shuffle_ports },
        1 => FootprintSpec::Ring { n, shuffle_ports },
        _ => FootprintSpec::Path { n, shuffle_ports },
    });
    let algorithm = prop_oneof![
        proptest::option::of(1..100u64).prop_map(|id_bound| AlgorithmSpec::BalancedGlobal { id_bound }),
        proptest::option::of(1..100u64).prop_map(|id_bound| AlgorithmSpec::WeakDisp { id_bound }),
        proptest::option::of(any::<u64>()).prop_map(|seed| AlgorithmSpec::RandomWalker { seed }),
    ];
    let schedule = prop_oneof![
        Just(ScheduleSpec::Static),
        Just(ScheduleSpec::Blocker),
        proptest::option::of(any::<u64>()).prop_map(|seed| ScheduleSpec::RandomOneBounded { seed }),
        (1..4usize, proptest::option::of(any::<u64>()))
            .prop_map(|(ell, seed)| ScheduleSpec::RandomEllBounded { ell, seed }),
    ];
    (
        footprint,
        algorithm,
        schedule,
        proptest::option::of("[a-z][a-z0-9-]{0,12}"),
        any::<u64>(),
        1..20usize,
        0..3usize,
        any::<bool>(),
    )
        .prop_map(|(footprint, algorithm, schedule, id, seed, k, ids, random)| {
            let n = footprint.n();
            let placement = if random {
                PlacementSpec::Random
            } else {
                let mut counts = vec![k / n; n];
                for c in counts.iter_mut().take(k % n) {
                    *c += 1;
                }
                PlacementSpec::Counts { counts }
            };
            let ids = match ids {
                0 => IdSpec::Sequential,
                1 => IdSpec::Shuffled,
                _ => IdSpec::Sparse { bound: 4 * k as u64 },
            };
            let model = algorithm.requirements();
            Scenario {
                id,
                seed,
                k,
                max_rounds: 100,
                stop: tvgdisp::engine::StopCondition::AllTerminated,
                ids,
                footprint,
                placement,
                algorithm,
                model,
                schedule,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scenario_round_trips_through_toml(sc in scenario_strategy()) {
        let text = sc.to_toml();
        let back = Scenario::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, sc);
    }
}
