use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use ctsearch_core::efficiency::{random_scenario_suite, SuiteMode};
use ctsearch_core::full_sim::{cross_check, time_grid};
use ctsearch_core::phase::{inverse_qft, measurement_distribution, sample_phase_register};
use ctsearch_core::reduced;
use ctsearch_core::rng::stream;
use ctsearch_core::weighted_superposition;
use num_complex::Complex64;

fn distribution(c: &mut Criterion) {
    let mut group = c.benchmark_group("measurement_distribution");
    for m in [8usize, 64, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| measurement_distribution(black_box(0.37), m).unwrap())
        });
    }
    group.finish();
}

fn qft(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse_qft");
    for m in [64usize, 256, 1024] {
        let input: Vec<Complex64> = (0..m).map(|k| Complex64::new(k as f64, 1.0)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(m), &input, |b, v| {
            b.iter(|| inverse_qft(black_box(v)).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    c.bench_function("sample_phase_register_1000", |b| {
        let mut rng = stream(1, "bench");
        b.iter(|| sample_phase_register(0.37, 64, 1000, &mut rng).unwrap())
    });
}

fn trajectory(c: &mut Criterion) {
    c.bench_function("reduced_trajectory_256", |b| {
        b.iter(|| reduced::default_trajectory(black_box(0.2), 1.0).unwrap())
    });
}

fn full_simulation(c: &mut Criterion) {
    let scenarios = random_scenario_suite(5, 4, SuiteMode::Basic).unwrap();
    let mut group = c.benchmark_group("full_cross_check");
    group.sample_size(10);
    for (i, s) in scenarios.iter().enumerate() {
        let prep = weighted_superposition(s).unwrap();
        let t = reduced::optimal_time(prep.y, s.energy()).unwrap();
        let grid = time_grid(2.0 * t, 64);
        group.bench_with_input(BenchmarkId::new("scenario", i), &(s, prep), |b, (s, p)| {
            b.iter(|| cross_check(s, p, &grid).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    distribution,
    qft,
    sampling,
    trajectory,
    full_simulation
);
criterion_main!(benches);
