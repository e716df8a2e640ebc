use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hurwitz_core::{compute_orbits, enumerate_valid, GroupContext, OracleConfig, OrbitFlavor};

fn bench_enumerate(c: &mut Criterion) {
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("enumerate_valid");
    for (n, d) in [(5u32, 4usize), (6, 5), (7, 5)] {
        let ctx = GroupContext::new(n);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("n{n}_d{d}")),
            &(ctx, d),
            |b, (ctx, d)| b.iter(|| enumerate_valid(ctx, *d, &cfg).unwrap().len()),
        );
    }
    group.finish();
}

fn bench_orbits(c: &mut Criterion) {
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("compute_orbits");
    for (n, d) in [(5u32, 4usize), (6, 5)] {
        let ctx = GroupContext::new(n);
        for flavor in [OrbitFlavor::Braid, OrbitFlavor::BraidAuto] {
            group.bench_with_input(
                BenchmarkId::from_parameter(format!("n{n}_d{d}_{flavor}")),
                &(ctx, d, flavor),
                |b, (ctx, d, flavor)| {
                    b.iter(|| compute_orbits(ctx, *d, *flavor, &cfg).unwrap().orbits.len())
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_enumerate, bench_orbits);
criterion_main!(benches);
