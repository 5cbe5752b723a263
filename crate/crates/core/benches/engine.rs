//! Parallel against sequential on the data-parallel sweeps.
//!
//! "sequential" runs the same code inside a one-thread rayon pool; building
//! with `--no-default-features` removes rayon entirely and gives the same
//! numbers as that variant.

use std::hint::black_box;

use cluster_atomic::atomic::{all_local_expansions, check_proper_lemma, enumerate_cluster_monomials};
use cluster_atomic::cluster::{enumerate_exchange_graph, ExchangeGraph, DEFAULT_CAP};
use cluster_atomic::grassmannian::{euler_characteristics, DEFAULT_PRIME_BUDGET};
use cluster_atomic::qp::build_cluster_rep;
use cluster_atomic::Quiver;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn graph(n: usize, arrows: &[(usize, usize)]) -> ExchangeGraph {
    enumerate_exchange_graph(&Quiver::new(n, arrows.to_vec()).unwrap().to_matrix(), DEFAULT_CAP).unwrap()
}

fn modes(c: &mut Criterion, group: &str, input: &str, f: impl Fn() + Sync) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", input), |b| b.iter(&f));
    g.bench_function(BenchmarkId::new("sequential", input), |b| b.iter(|| single.install(&f)));
    g.finish();
}

fn local_expansions(c: &mut Criterion) {
    let d4 = graph(4, &[(1, 0), (2, 0), (3, 0)]);
    modes(c, "local_expansions", "D4", || {
        black_box(all_local_expansions(&d4).unwrap());
    });
}

fn lemma_sweep(c: &mut Criterion) {
    let a4 = graph(4, &[(0, 1), (1, 2), (2, 3)]);
    let locals = all_local_expansions(&a4).unwrap();
    let monomials = enumerate_cluster_monomials(&a4, 2);
    modes(c, "lemma_sweep", "A4/deg2", || {
        black_box(check_proper_lemma(&a4, &monomials, &locals));
    });
}

fn grassmannians(c: &mut Criterion) {
    let q = Quiver::new(4, vec![(1, 0), (2, 0), (3, 0)]).unwrap();
    let b = q.to_matrix();
    let d4 = graph(4, q.arrows());
    let reps: Vec<_> = d4
        .clusters
        .iter()
        .flat_map(|cl| (0..4).map(|k| build_cluster_rep(&b, &cl.seed.walk, k).unwrap().positive_part().clone()))
        .collect();
    modes(c, "euler_characteristics", "D4 cluster variables", || {
        for m in &reps {
            black_box(euler_characteristics(m, DEFAULT_PRIME_BUDGET).unwrap());
        }
    });
}

criterion_group!(benches, local_expansions, lemma_sweep, grassmannians);
criterion_main!(benches);
