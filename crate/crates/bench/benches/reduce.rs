use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hurwitz_core::{enumerate_valid, reduce, GroupContext, OracleConfig};

fn bench_reduce(c: &mut Criterion) {
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("reduce");
    for (n, d) in [(5u32, 4usize), (6, 5), (7, 5)] {
        let ctx = GroupContext::new(n);
        let valid = enumerate_valid(&ctx, d, &cfg).unwrap();
        // Spread the sample across the whole enumeration.
        let sample: Vec<_> = valid.iter().step_by(valid.len().div_ceil(32).max(1)).collect();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}_d{d}")),
            &sample,
            |b, sample| {
                b.iter(|| {
                    for v in sample.iter() {
                        let (out, _) = reduce(v).unwrap();
                        criterion::black_box(out);
                    }
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_reduce);
criterion_main!(benches);
