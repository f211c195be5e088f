//! Kernels behind the `parallel` feature.
//!
//! With the feature on, each kernel runs on a one-thread rayon pool and on
//! the default pool. The sequential fallback is a separate build:
//!
//! ```text
//! cargo bench -p qfw-core --bench kernels -- --save-baseline par
//! cargo bench -p qfw-core --bench kernels --no-default-features -- --baseline par
//! ```

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};

use qfw_core::algebra::{matrix_algebra, tensor_algebra, upper_triangular};
use qfw_core::decomp::{decompose, WorkRng};
use qfw_core::fixtures::{battery, corpus, Task};
use qfw_core::modrep::{hom_space, regular_left};
use qfw_core::{Mat, PrimeField};

fn random_mat(f: PrimeField, rows: usize, cols: usize, seed: u64) -> Mat {
    let mut rng = WorkRng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| rng.gen_range(0..f.p())).collect();
    Mat::from_vec(f, rows, cols, data).unwrap()
}

/// Runs `f` once per available pool: one thread, then the default.
fn pools() -> Vec<(&'static str, Option<rayon::ThreadPool>)> {
    if cfg!(feature = "parallel") {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        vec![("one-thread", Some(one)), ("default-pool", None)]
    } else {
        vec![("sequential", None)]
    }
}

fn run<R>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R
where
    R: Send,
{
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn linear_algebra(c: &mut Criterion) {
    let f = PrimeField::new(2_147_483_647).unwrap();
    let a = random_mat(f, 256, 256, 1);
    let b = random_mat(f, 256, 256, 2);
    let tall = random_mat(f, 400, 300, 3);
    let mut g = c.benchmark_group("linear-algebra");
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new("mul-256", name), |bn| {
            bn.iter(|| run(&pool, || black_box(a.mul(&b))))
        });
        g.bench_function(BenchmarkId::new("rref-400x300", name), |bn| {
            bn.iter(|| run(&pool, || black_box(tall.rref())))
        });
    }
    g.finish();
}

fn modules(c: &mut Criterion) {
    let f = PrimeField::new(7).unwrap();
    let big = tensor_algebra(&matrix_algebra(f, 2), &upper_triangular(f, 2)).unwrap();
    let reg = regular_left(&big);
    let m = reg.power(2);
    let mut g = c.benchmark_group("modules");
    g.sample_size(20);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new("hom-space-24", name), |bn| {
            bn.iter(|| run(&pool, || black_box(hom_space(&m, &reg).unwrap())))
        });
        g.bench_function(BenchmarkId::new("decompose-24", name), |bn| {
            bn.iter(|| run(&pool, || black_box(decompose(&m, &mut WorkRng::seed_from_u64(0)).unwrap())))
        });
    }
    g.finish();
}

fn fixture_battery(c: &mut Criterion) {
    let fixtures: Vec<_> = corpus()
        .into_iter()
        .filter(|f| f.name.starts_with("f5_") && f.task != Task::CheckCoring)
        .collect();
    let mut g = c.benchmark_group("battery");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::new("f5-non-coring", name), |bn| {
            bn.iter(|| run(&pool, || black_box(battery(&fixtures, 0))))
        });
    }
    g.finish();
}

criterion_group!(benches, linear_algebra, modules, fixture_battery);
criterion_main!(benches);
