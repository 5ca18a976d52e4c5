//! Benchmarks for the hot paths: special functions, plan generation,
//! cross-validated evaluation, and the multi-model tests.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use modeval::algo_tests::{paired_t_5x2cv, SeedMode};
use modeval::estimators::evaluate_kfold;
use modeval::learners::{iris, make_circles};
use modeval::metrics::correctness_matrix;
use modeval::model_tests::{cochrans_q, looney_f_test};
use modeval::numerics::{chi2_sf, normal_quantile, t_quantile};
use modeval::resampling::{bootstrap_plan, kfold_plan};
use modeval::types::LearnerSpec;
use modeval::SeedSpec;

fn bench_numerics(c: &mut Criterion) {
    let mut group = c.benchmark_group("numerics");
    group.bench_function("chi2_sf", |b| {
        b.iter(|| chi2_sf(black_box(7.5294), black_box(2.0)).unwrap())
    });
    group.bench_function("t_quantile", |b| {
        b.iter(|| t_quantile(black_box(0.975), black_box(99.0)).unwrap())
    });
    group.bench_function("normal_quantile", |b| {
        b.iter(|| normal_quantile(black_box(0.975)).unwrap())
    });
    group.finish();
}

fn bench_plans(c: &mut Criterion) {
    let labels: Vec<usize> = (0..10_000).map(|i| i % 3).collect();
    let mut group = c.benchmark_group("plans");
    group.bench_function("kfold_10k_stratified", |b| {
        b.iter(|| kfold_plan(10_000, black_box(&labels), 10, true, SeedSpec::new(1, 0)).unwrap())
    });
    group.bench_function("bootstrap_1k_x20", |b| {
        b.iter(|| bootstrap_plan(1_000, 20, SeedSpec::new(1, 0)).unwrap())
    });
    group.finish();
}

fn bench_evaluation(c: &mut Criterion) {
    let data = iris();
    let folds = kfold_plan(150, data.labels(), 10, true, SeedSpec::new(1, 0)).unwrap();
    let spec = LearnerSpec::knn(3);
    let mut group = c.benchmark_group("evaluation");
    group.bench_function("iris_10fold_3nn", |b| {
        b.iter(|| evaluate_kfold(black_box(&spec), black_box(&data), black_box(&folds)).unwrap())
    });
    group.finish();
}

fn bench_model_tests(c: &mut Criterion) {
    let y_true = vec![0usize; 100];
    let mut c1 = vec![0usize; 100];
    c1[..16].fill(1);
    let mut c2 = vec![0usize; 100];
    for p in [0, 1, 2, 3, 4, 5, 20, 21] {
        c2[p] = 1;
    }
    let mut c3 = vec![0usize; 100];
    for p in [0, 1, 2, 6, 20, 21, 98, 99] {
        c3[p] = 1;
    }
    let matrix = correctness_matrix(&y_true, &[c1, c2, c3]).unwrap();
    let mut group = c.benchmark_group("model_tests");
    group.bench_function("cochrans_q", |b| {
        b.iter(|| cochrans_q(black_box(&matrix), 0.05).unwrap())
    });
    group.bench_function("looney_f", |b| {
        b.iter(|| looney_f_test(black_box(&matrix), 0.05).unwrap())
    });
    group.finish();
}

fn bench_algo_tests(c: &mut Criterion) {
    let data = make_circles(200, 0.12, SeedSpec::new(1, 0)).unwrap();
    let spec1 = LearnerSpec::knn(1);
    let spec2 = LearnerSpec::knn(15);
    let mut group = c.benchmark_group("algo_tests");
    group.sample_size(20);
    group.bench_function("paired_t_5x2cv_knn", |b| {
        b.iter(|| {
            paired_t_5x2cv(
                black_box(&spec1),
                black_box(&spec2),
                black_box(&data),
                SeedSpec::new(7, 0),
                0.05,
                SeedMode::Shared,
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_numerics,
    bench_plans,
    bench_evaluation,
    bench_model_tests,
    bench_algo_tests
);
criterion_main!(benches);
