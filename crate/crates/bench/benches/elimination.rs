//! Exact Gaussian elimination on differential matrices: rank and kernel.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use omega_nij_bench::fixtures;
use omega_nij_core::cochain::{Complexes, ComplexKind};
use omega_nij_core::cohomology::differential_matrix;

fn bench_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    for (name, ctx) in fixtures() {
        let cx = Complexes::new(ctx).unwrap();
        let d2 = differential_matrix(&cx, ComplexKind::Nfa, 2).unwrap();
        group.bench_function(format!("{name}_nfa_d2"), |b| {
            b.iter(|| black_box(d2.clone().rank()))
        });
        let d2k = d2.clone();
        group.bench_function(format!("{name}_nfa_kernel2"), |b| {
            b.iter(|| black_box(d2k.kernel_basis().len()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_rank);
criterion_main!(benches);
