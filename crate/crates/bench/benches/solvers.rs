use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use chromlab_core::graphcore::{
    chromatic_number_with, count_independent_ksets, max_clique, sample_gnp_half, SolveBudget,
};

fn kset_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("kset_count");
    for (n, k) in [(60, 8), (120, 10), (200, 11)] {
        let g = sample_gnp_half(n, 1, 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_k{k}")), &g, |b, g| {
            b.iter(|| count_independent_ksets(black_box(g), k, false, 0).unwrap().count)
        });
    }
    group.finish();
}

fn chromatic(c: &mut Criterion) {
    let mut group = c.benchmark_group("chromatic");
    group.sample_size(10);
    for n in [20, 30, 40] {
        let g = sample_gnp_half(n, 2, 0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| chromatic_number_with(black_box(g), SolveBudget::unlimited()).upper)
        });
    }
    group.finish();
}

fn clique(c: &mut Criterion) {
    let g = sample_gnp_half(150, 3, 0).unwrap();
    c.bench_function("max_clique/150", |b| b.iter(|| max_clique(black_box(&g), u64::MAX).clique.len()));
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_gnp_half");
    for n in [100, 400, 1000] {
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| sample_gnp_half(black_box(n), 7, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, kset_count, chromatic, clique, sampling);
criterion_main!(benches);
