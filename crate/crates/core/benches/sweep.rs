use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use krev_core::enumerate::enumerate_free_trees;
use krev_core::extremal::search_trees;
use std::hint::black_box;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("tree_sweep");
    group.sample_size(10);
    for n in [10usize, 11] {
        let trees: Vec<_> = enumerate_free_trees(n).collect();
        group.bench_with_input(BenchmarkId::new("sequential", n), &trees, |b, trees| {
            b.iter(|| search_trees(black_box(trees), 2, 16, 1).unwrap())
        });
        // with the feature off, workers > 1 falls back to the sequential path
        #[cfg(feature = "parallel")]
        {
            let workers = std::thread::available_parallelism().map_or(4, |p| p.get()).max(2);
            group.bench_with_input(BenchmarkId::new(format!("rayon_{workers}"), n), &trees, |b, trees| {
                b.iter(|| search_trees(black_box(trees), 2, 16, workers).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
