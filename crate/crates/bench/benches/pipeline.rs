use std::hint::black_box;

use bnsl_bench::{dataset, encoded};
use bnsl_core::decomposition::{divide_et_impera, DivideConfig};
use bnsl_core::encoder::{build_qubo, EncoderConfig};
use bnsl_core::solvers::{exhaustive_search, simulated_annealing, SimulatedAnnealing, SolverParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn encoding(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_qubo");
    for rows in [10_000, 100_000] {
        let ds = dataset("lung_cancer", rows);
        group.bench_with_input(BenchmarkId::new("lung_cancer", rows), &ds, |b, ds| {
            b.iter(|| build_qubo(black_box(ds), &EncoderConfig::default()).unwrap())
        });
    }
    let ds = dataset("waste", 10_000);
    group.bench_function("waste/10000", |b| {
        b.iter(|| build_qubo(black_box(&ds), &EncoderConfig::default()).unwrap())
    });
    group.finish();
}

fn annealing(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulated_annealing");
    group.sample_size(10);
    for net in ["monty_hall", "lung_cancer"] {
        let q = encoded(net, 10_000);
        group.bench_function(format!("{net}/100x1000"), |b| {
            b.iter(|| simulated_annealing(&q.qubo, &SolverParams::new(100, 1000, 0)).unwrap())
        });
    }
    group.finish();
}

fn exhaustive(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_search");
    group.sample_size(10);
    for net in ["monty_hall", "lung_cancer_4vars", "lung_cancer"] {
        let q = encoded(net, 10_000);
        group.bench_function(net, |b| b.iter(|| exhaustive_search(black_box(&q), 24).unwrap()));
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("divide_et_impera");
    group.sample_size(10);
    let ds = dataset("lung_cancer", 10_000);
    for k in [3, 4] {
        group.bench_function(format!("lung_cancer/k{k}"), |b| {
            b.iter(|| {
                divide_et_impera(
                    &ds,
                    &DivideConfig::new(k),
                    &SimulatedAnnealing,
                    &SolverParams::new(100, 1000, 0),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, encoding, annealing, exhaustive, decomposition);
criterion_main!(benches);
