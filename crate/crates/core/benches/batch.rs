use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tvgdisp::batch::run_batch_sequential;
use tvgdisp::engine::{Communication, ModelSpec, StopCondition, Visibility};
use tvgdisp::scenario::{AlgorithmSpec, FootprintSpec, IdSpec, PlacementSpec, Scenario, ScheduleSpec};

fn scenarios(count: usize) -> Vec<Scenario> {
    (0..count)
        .map(|i| {
            let n = 8 + i % 9;
            let k = 3 * n + i % 5;
            Scenario {
                id: None,
                seed: i as u64,
                k,
                max_rounds: 4 * (n + k) as u64,
                stop: StopCondition::AllTerminated,
                ids: IdSpec::Shuffled,
                footprint: FootprintSpec::Ring { n, shuffle_ports: true },
                placement: PlacementSpec::Random,
                algorithm: AlgorithmSpec::BalancedGlobal { id_bound: None },
                model: ModelSpec::new(Visibility::OneHop, Communication::Global),
                schedule: ScheduleSpec::RandomEllBounded { ell: 1, seed: None },
            }
        })
        .collect()
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    for count in [16, 64] {
        let set = scenarios(count);
        group.bench_with_input(BenchmarkId::new("sequential", count), &set, |b, s| {
            b.iter(|| run_batch_sequential(s))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", count), &set, |b, s| {
            b.iter(|| tvgdisp::batch::run_batch_parallel(s))
        });
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
