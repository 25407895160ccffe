//! Parallel vs sequential throughput on the two data-parallel hot spots:
//! batches of independent simulations and sampled trace-distance trials.
//!
//! With the default `parallel` feature the `run_all`/`indexed_map` paths go
//! through rayon; `--no-default-features` makes both arms sequential, which
//! is the baseline the comparison is against.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use lcuwalk::batch::{self, SimJob};
use lcuwalk::hamiltonian::make_random_sparse;
use lcuwalk::linalg;
use lcuwalk::simulator::Strategy;
use lcuwalk::walk::{spectral_check, WalkSystem};

fn simulation_jobs() -> Vec<SimJob> {
    (0..8u64)
        .map(|seed| SimJob {
            label: format!("seed{seed}"),
            h: make_random_sparse(2, 2, 1.0, seed).unwrap(),
            t: 1.0,
            epsilon: 1e-6,
            strategy: Strategy::FixedZ,
            x_scale: None,
        })
        .collect()
}

fn bench_simulation_batch(c: &mut Criterion) {
    let jobs = simulation_jobs();
    let mut group = c.benchmark_group("simulation_batch");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(batch::run_all(black_box(&jobs))))
    });
    group.bench_function("serial", |b| {
        b.iter(|| black_box(batch::run_all_seq(black_box(&jobs))))
    });
    group.finish();
}

fn bench_walk_verification(c: &mut Criterion) {
    let instances: Vec<_> = (0..12u64)
        .map(|seed| make_random_sparse(2, 2, 1.0, seed).unwrap())
        .collect();
    let check = |i: usize| {
        let ws = WalkSystem::build(&instances[i], None).unwrap();
        spectral_check(&ws).unwrap().max_eig_mismatch
    };
    let mut group = c.benchmark_group("walk_verification");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(batch::indexed_map(instances.len(), check)))
    });
    group.bench_function("serial", |b| {
        b.iter(|| black_box(batch::indexed_map_seq(instances.len(), check)))
    });
    group.finish();
}

fn bench_state_sampling(c: &mut Criterion) {
    let trial = |i: usize| {
        let mut rng = linalg::seeded_rng(i as u64);
        let psi = linalg::random_state(&mut rng, 256);
        psi.iter().map(|x| x.norm_sqr()).sum::<f64>()
    };
    let mut group = c.benchmark_group("state_sampling");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(batch::indexed_map(512, trial)))
    });
    group.bench_function("serial", |b| {
        b.iter(|| black_box(batch::indexed_map_seq(512, trial)))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_simulation_batch,
    bench_walk_verification,
    bench_state_sampling
);
criterion_main!(benches);
