use std::hint::black_box;

use bppdist::metrics::{MetricConfig, PathLoss};
use bppdist::montecarlo::{sample_bpp_distances, simulate_interference, SimConfig};
use bppdist::NetworkSpec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn worker_counts() -> Vec<usize> {
    let max = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut counts = vec![1, max];
    counts.dedup();
    counts
}

fn distances(c: &mut Criterion) {
    let spec = NetworkSpec::new(2, 1.0, 50).unwrap();
    let mut group = c.benchmark_group("sample_bpp_distances");
    group.sample_size(10);
    for workers in worker_counts() {
        let sim = SimConfig::new(1, 100_000, workers).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(workers), &sim, |b, sim| {
            b.iter(|| black_box(sample_bpp_distances(&spec, sim).unwrap()))
        });
    }
    group.finish();
}

fn interference(c: &mut Criterion) {
    let spec = NetworkSpec::new(3, 1.0, 10).unwrap();
    let cfg = MetricConfig::new(0.5, 2.0, 0.0, 1.0, PathLoss::Singular).unwrap();
    let mut group = c.benchmark_group("simulate_interference");
    group.sample_size(10);
    for workers in worker_counts() {
        let sim = SimConfig::new(1, 200_000, workers).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(workers), &sim, |b, sim| {
            b.iter(|| black_box(simulate_interference(&spec, &cfg, sim).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, distances, interference);
criterion_main!(benches);
