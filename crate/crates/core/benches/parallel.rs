//! One worker against the default rayon pool on the two hot loops: slice
//! evaluation of `M_p(r, f)` and sampled moduli.
//!
//! `cargo bench -p holoball --no-default-features` runs the same bodies with
//! the sequential fallback compiled in.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holoball::harness::TestFamily;
use holoball::moduli::{ModulusEstimator, ModulusKind, ModulusOptions};
use holoball::par::with_jobs;
use holoball::quad::{rule_for_degree, MeanEvaluator};
use std::hint::black_box;

fn pools() -> [(&'static str, Option<usize>); 2] {
    [("one-worker", Some(1)), ("default-pool", None)]
}

fn sphere_means(c: &mut Criterion) {
    let f = TestFamily::random_decay(1.5, 1, 7, 2, 32).generate().unwrap().remove(0);
    let rule = rule_for_degree(2, 32).unwrap();
    let mut group = c.benchmark_group("sphere-mean-p3-N2-D32");
    for (name, jobs) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                with_jobs(jobs, || {
                    let eval = MeanEvaluator::holo(&f, &rule);
                    black_box(eval.mean(0.9, 3.0))
                })
            })
        });
    }
    group.finish();
}

fn sampled_moduli(c: &mut Criterion) {
    let f = TestFamily::random_decay(1.5, 1, 11, 2, 16).generate().unwrap().remove(0);
    let rule = rule_for_degree(2, 16).unwrap();
    let opts = ModulusOptions { budget: 16, ..Default::default() };
    let mut group = c.benchmark_group("contraction-modulus-p3-N2-D16");
    group.sample_size(10);
    for (name, jobs) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                with_jobs(jobs, || {
                    let est = ModulusEstimator::new(&f, 1, 3.0, &rule, &opts).unwrap();
                    black_box(est.estimate(0.5, ModulusKind::Plus).unwrap().value)
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, sphere_means, sampled_moduli);
criterion_main!(benches);
