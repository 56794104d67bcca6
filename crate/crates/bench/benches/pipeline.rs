use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fuzzsel_bench::pima;
use fuzzsel_core::dataset::project;
use fuzzsel_core::selector::{fitness, reporting_split, run_selection, train_classifier, ClassifierOptions};
use fuzzsel_core::{FeatureMask, FitnessConfig, GaParams, InductionConfig};

fn inference(c: &mut Criterion) {
    let (data, _) = pima();
    let fcfg = FitnessConfig::from_seed(42);
    let (train, test) = reporting_split(&data, &fcfg).unwrap();
    let mask = FeatureMask::from_indices(8, &[1, 5, 7]);
    let train = project(&train, &mask).unwrap();
    let test = project(&test, &mask).unwrap();
    let fis = train_classifier(&train, &InductionConfig::default(), &ClassifierOptions::default()).unwrap();
    let rows: Vec<Vec<f64>> = test.rows().map(<[f64]>::to_vec).collect();
    c.bench_function("infer 3 inputs x holdout", |b| {
        b.iter(|| {
            for r in &rows {
                black_box(fis.infer(black_box(r)).unwrap());
            }
        })
    });
}

fn fitness_eval(c: &mut Criterion) {
    let (data, costs) = pima();
    let fcfg = FitnessConfig::from_seed(42);
    let icfg = InductionConfig::default();
    let (train, _) = reporting_split(&data, &fcfg).unwrap();
    let mut group = c.benchmark_group("fitness 5-fold");
    for (name, mask) in [("3 features", FeatureMask::from_indices(8, &[1, 5, 7])), ("8 features", FeatureMask::full(8))] {
        group.bench_function(name, |b| b.iter(|| fitness(black_box(&mask), &train, &costs, &fcfg, &icfg).unwrap()));
    }
    group.finish();
}

fn selection(c: &mut Criterion) {
    let (data, costs) = pima();
    let fcfg = FitnessConfig::from_seed(42);
    let icfg = InductionConfig::default();
    let params = GaParams { seed: 42, max_generations: 10, ..GaParams::default() };
    let mut group = c.benchmark_group("selection");
    group.sample_size(10);
    group.bench_function("GA 10 generations", |b| {
        b.iter(|| run_selection(&data, &costs, &params, &fcfg, &icfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, inference, fitness_eval, selection);
criterion_main!(benches);
