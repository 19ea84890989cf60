use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use netph_bench::random_network;
use netph_core::{
    bottleneck_at, compute_persistence, network_distance_maps, FiltrationKind, SearchBudget,
};

fn persistence(c: &mut Criterion) {
    let mut group = c.benchmark_group("persistence_h1");
    for n in [8, 16, 24] {
        let x = random_network(n, 1);
        for kind in [FiltrationKind::Rips, FiltrationKind::DowkerSink] {
            group.bench_with_input(BenchmarkId::new(kind.name(), n), &x, |b, x| {
                b.iter(|| {
                    let f = kind.build(black_box(x), 2);
                    compute_persistence(&f, 1).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn bottleneck(c: &mut Criterion) {
    let mut group = c.benchmark_group("bottleneck_h0");
    for n in [20, 40, 80] {
        let da = compute_persistence(&FiltrationKind::Rips.build(&random_network(n, 2), 1), 0)
            .unwrap();
        let db = compute_persistence(&FiltrationKind::Rips.build(&random_network(n, 3), 1), 0)
            .unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| bottleneck_at(black_box(&da), black_box(&db), 0))
        });
    }
    group.finish();
}

fn network_distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("network_distance_maps");
    group.sample_size(10);
    let budget = SearchBudget::default();
    for n in [3, 4] {
        let x = random_network(n, 4);
        let y = random_network(n, 5);
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| network_distance_maps(black_box(&x), black_box(&y), &budget).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, persistence, bottleneck, network_distance);
criterion_main!(benches);
