//! Assembly of differential matrices and dense evaluation of the
//! differentials on random cochains.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use omega_nij_bench::fixtures;
use omega_nij_core::cochain::{Complexes, ComplexKind};
use omega_nij_core::cohomology::differential_matrix;
use omega_nij_core::rng::Rng;
use omega_nij_core::scalar::Rational;

fn bench_assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    group.sample_size(10);
    for (name, ctx) in fixtures() {
        let cx = Complexes::new(ctx).unwrap();
        group.bench_function(format!("{name}_nfa_d3"), |b| {
            b.iter(|| black_box(differential_matrix(&cx, ComplexKind::Nfa, 3).unwrap().rows()))
        });
    }
    group.finish();
}

fn bench_evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate");
    for (name, ctx) in fixtures() {
        let cx = Complexes::new(ctx).unwrap();
        let mut rng = Rng::new(1);
        let f: omega_nij_core::cochain::Cochain<Rational> = rng.cochain(2, cx.dims(), 3);
        group.bench_function(format!("{name}_partial_deg2"), |b| {
            b.iter(|| black_box(cx.nf_partial(&f).unwrap().len()))
        });
        group.bench_function(format!("{name}_phi_deg2"), |b| {
            b.iter(|| black_box(cx.phi(&f).unwrap().len()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_assembly, bench_evaluation);
criterion_main!(benches);
