use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use exuberance::bootstrap::{wild_bootstrap_pvalue, MultiplierKind};
use exuberance::datestamp::search_model;
use exuberance::datestamp::BubbleModel;
use exuberance::recursive::{gsadf, sadf, sbz, sign_statistics, SignMode};
use exuberance::{default_min_window, AdfConfig, StatConfig, StatKind};
use exuberance_bench::{bubble, walk};

fn sup_scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("sup");
    for t in [100, 200, 400] {
        let y = walk(t, 1);
        let tau0 = default_min_window(t).unwrap();
        g.bench_with_input(BenchmarkId::new("sadf", t), &y, |b, y| {
            b.iter(|| sadf(black_box(y), tau0, AdfConfig::default()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gsadf", t), &y, |b, y| {
            b.iter(|| gsadf(black_box(y), tau0, AdfConfig::default()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gsadf_k2", t), &y, |b, y| {
            b.iter(|| gsadf(black_box(y), tau0, AdfConfig::new(Default::default(), 2)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sign", t), &y, |b, y| {
            b.iter(|| sign_statistics(black_box(y), tau0, SignMode::Raw, 0).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sbz", t), &y, |b, y| {
            b.iter(|| sbz(black_box(y), tau0, None).unwrap())
        });
    }
    g.finish();
}

fn dating(c: &mut Criterion) {
    let mut g = c.benchmark_group("dating");
    for t in [100, 200] {
        let y = bubble(t, 2);
        g.bench_with_input(BenchmarkId::new("ssr_m4", t), &y, |b, y| {
            b.iter(|| search_model(black_box(y), BubbleModel::M4, 3))
        });
    }
    g.finish();
}

fn bootstrap(c: &mut Criterion) {
    let mut g = c.benchmark_group("bootstrap");
    g.sample_size(10);
    let y = walk(100, 3);
    let cfg = StatConfig::default();
    g.bench_function("gsadf_B99_T100", |b| {
        b.iter(|| wild_bootstrap_pvalue(black_box(&y), StatKind::Gsadf, &cfg, 99, MultiplierKind::Gaussian, 4).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sup_scans, dating, bootstrap);
criterion_main!(benches);
