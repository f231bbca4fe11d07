use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use legquad::batch::{map_indexed, map_indexed_seq};
use legquad::testlib::{lk_draw, LkFamily};
use legquad::{int_naive, int_refined, NaiveConfig, RefinedConfig};

const RUNS: usize = 100;

fn lk_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("lk_batch");
    group.sample_size(20);
    for family in [LkFamily::Singular, LkFamily::FourPeaks] {
        let problems: Vec<_> = (0..RUNS).map(|i| lk_draw(family, 0, i as u64)).collect();
        let refined = |i: usize| {
            let p = &problems[i];
            let (a, b) = family.domain();
            int_refined(p, a, b, 1e-6 * p.exact().abs(), &RefinedConfig::default())
                .map(|r| r.neval)
                .unwrap_or(0)
        };
        let naive = |i: usize| {
            let p = &problems[i];
            let (a, b) = family.domain();
            int_naive(p, a, b, 1e-6 * p.exact().abs(), &NaiveConfig::default())
                .map(|r| r.neval)
                .unwrap_or(0)
        };
        let label = family.label();
        group.bench_function(BenchmarkId::new("refined_seq", &label), |bench| {
            bench.iter(|| map_indexed_seq(RUNS, refined))
        });
        group.bench_function(BenchmarkId::new("refined_par", &label), |bench| {
            bench.iter(|| map_indexed(RUNS, refined))
        });
        group.bench_function(BenchmarkId::new("naive_seq", &label), |bench| {
            bench.iter(|| map_indexed_seq(RUNS, naive))
        });
        group.bench_function(BenchmarkId::new("naive_par", &label), |bench| {
            bench.iter(|| map_indexed(RUNS, naive))
        });
    }
    group.finish();
}

criterion_group!(benches, lk_batch);
criterion_main!(benches);
