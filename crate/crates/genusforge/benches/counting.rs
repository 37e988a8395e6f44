//! Counting-kernel benchmarks: the chunked data-parallel reduction against
//! its sequential twin on identical workloads, plus the integrated
//! certificate counter at a few field sizes.
//!
//! With `--no-default-features` the chunked reduction itself degrades to the
//! sequential loop, so the two series coincide; under the default `parallel`
//! feature the gap is the rayon speedup.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use genusforge::abelian::construct_abelian;
use genusforge::field::{FieldCtx, PackedCtx};
use genusforge::par::{chunked_sum_u64, chunked_sum_u64_seq};
use genusforge::verify::count_points_abelian;

fn trace_kernel(c: &mut Criterion) {
    let mut group = c.benchmark_group("trace_kernel");
    group.sample_size(10);
    for w in [16u32, 20] {
        let ctx = PackedCtx::new(w);
        let order = ctx.order();
        let body = |x: u64| u64::from(ctx.trace(ctx.pow(x, 5)) == 0);
        let expected = chunked_sum_u64_seq(1, order, body);
        assert_eq!(chunked_sum_u64(1, order, (order / 64).max(64), body), expected);
        group.bench_with_input(BenchmarkId::new("chunked", w), &w, |b, _| {
            b.iter(|| chunked_sum_u64(1, order, (order / 64).max(64), body))
        });
        group.bench_with_input(BenchmarkId::new("sequential", w), &w, |b, _| {
            b.iter(|| chunked_sum_u64_seq(1, order, body))
        });
    }
    group.finish();
}

fn certificate_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_points_abelian");
    group.sample_size(10);

    let f2 = FieldCtx::new(2, 1).unwrap();
    let even = construct_abelian(&f2, 2).unwrap();
    for m in [16u64, 20] {
        group.bench_with_input(BenchmarkId::new("f2_packed", m), &m, |b, &m| {
            b.iter(|| count_points_abelian(&even, m, 1 << 28).unwrap())
        });
    }

    let f3 = FieldCtx::new(3, 1).unwrap();
    let odd = construct_abelian(&f3, 19).unwrap();
    for m in [7u64, 9] {
        group.bench_with_input(BenchmarkId::new("f3_twisted", m), &m, |b, &m| {
            b.iter(|| count_points_abelian(&odd, m, 1 << 28).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, trace_kernel, certificate_counts);
criterion_main!(benches);
