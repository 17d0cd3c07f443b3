use citesuccess_bench::corpus;
use citesuccess_core::{
    estimate_matrix_residuals, success_index_brute, success_index_exact, success_matrix, Estimator,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn exact_vs_brute(c: &mut Criterion) {
    let mut group = c.benchmark_group("pair");
    for articles in [100u64, 1000] {
        let journals = corpus(2, articles, 1);
        group.bench_with_input(BenchmarkId::new("exact", articles), &journals, |b, j| {
            b.iter(|| success_index_exact(black_box(&j[0]), black_box(&j[1])).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("brute", articles), &journals, |b, j| {
            b.iter(|| success_index_brute(black_box(&j[0]), black_box(&j[1])).unwrap())
        });
    }
    group.finish();
}

fn matrix(c: &mut Criterion) {
    let journals = corpus(100, 1000, 2);
    c.bench_function("matrix_100", |b| {
        b.iter(|| success_matrix(black_box(&journals)).unwrap())
    });
    c.bench_function("residuals_100", |b| {
        b.iter(|| {
            estimate_matrix_residuals(black_box(&journals), 1.0, &Estimator::default(), 0.01)
                .unwrap()
        })
    });
}

criterion_group!(benches, exact_vs_brute, matrix);
criterion_main!(benches);
