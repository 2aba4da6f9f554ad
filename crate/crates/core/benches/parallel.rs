use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use oscent::oracle::QuadratureConfig;
use oscent::sweep::{sweep, Family};
use oscent::verify::verify_grid;
use oscent::{Evaluator, Execution, Precision, StateSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn oracle_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_grid");
    group.sample_size(10);
    let cfg = QuadratureConfig::default();
    let ev = Evaluator::shared();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "n<=20 x 3 alpha"), |b| {
            b.iter(|| verify_grid(ev, 20, black_box(&[0.25, 1.0, 4.0]), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn random_batch(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let states: Vec<StateSpec> = (0..256)
        .map(|_| {
            let d = rng.random_range(1..=6);
            let ns = (0..d).map(|_| rng.random_range(0..=24)).collect();
            StateSpec::new(ns, rng.random_range(0.1..10.0)).unwrap()
        })
        .collect();
    let mut group = c.benchmark_group("report_batch");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, states.len()), |b| {
            b.iter(|| {
                // a fresh evaluator so that no one-dimensional value is cached
                let ev = Evaluator::new(Precision::Extended).with_execution(exec);
                exec.try_map(&states, |s| ev.report(s)).unwrap()
            })
        });
    }
    group.finish();
}

fn family_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "all-ones D<=64"), |b| {
            b.iter(|| {
                let ev = Evaluator::new(Precision::Extended).with_execution(exec);
                sweep(&ev, Family::AllOnes, black_box(64), 1.0, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, oracle_grid, random_batch, family_sweep);
criterion_main!(benches);
