use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pae_core::experiments::{degree_tail_diagnostic, martingale_diagnostic, DegreeTailConfig, MartingaleConfig, Normalizer};
use pae_core::observables::count_triangles_in;
use pae_core::oracle::{self, Statistic};
use pae_core::{generate, Execution, ModelParams};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn triangles(c: &mut Criterion) {
    let mut group = c.benchmark_group("triangles");
    group.sample_size(10);
    for t in [100_000u64, 1_000_000] {
        let (g, _) = generate(&ModelParams::new(0.5, t, 1).unwrap()).unwrap();
        let simple = g.simple_view();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, t), &simple, |b, s| b.iter(|| count_triangles_in(s, exec)));
        }
    }
    group.finish();
}

fn oracle_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_t7");
    group.sample_size(10);
    let p = oracle::parse_probability("1/2").unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| oracle::exact_expectations_with(7, &p, &Statistic::ALL, exec).unwrap())
        });
    }
    group.finish();
}

fn replica_ensembles(c: &mut Criterion) {
    let mut group = c.benchmark_group("replicas");
    group.sample_size(10);
    let martingale = MartingaleConfig {
        p: 0.5,
        t0: 1,
        t1: 1_000,
        replicas: 2_000,
        master_seed: 1,
        normalizer: Normalizer::Phi,
    };
    let tail = DegreeTailConfig {
        p: 0.5,
        vertex: 1,
        t: 2_000,
        lambdas: vec![3.0, 4.0, 5.0],
        replicas: 1_000,
        master_seed: 1,
    };
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("martingale", name), |b| {
            b.iter(|| martingale_diagnostic(&martingale, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("degree_tail", name), |b| {
            b.iter(|| degree_tail_diagnostic(&tail, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, triangles, oracle_enumeration, replica_ensembles);
criterion_main!(benches);
