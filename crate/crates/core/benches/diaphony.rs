use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use padic_diaphony::{halton_prefix, validate_bases, Engine, Strategy, TruncationBox};

fn strategies() -> Vec<(&'static str, Strategy)> {
    #[allow(unused_mut)]
    let mut out = vec![("sequential", Strategy::Sequential)];
    #[cfg(feature = "parallel")]
    out.push(("rayon", Strategy::Parallel));
    out
}

fn kernel(c: &mut Criterion) {
    let bases = validate_bases(&[2, 3, 5]).unwrap();
    let mut group = c.benchmark_group("kernel_fast");
    group.sample_size(10);
    for n in [256usize, 1024, 4096] {
        let pts = halton_prefix(n, &bases);
        for (name, strategy) in strategies() {
            let engine = Engine::new().with_strategy(strategy);
            group.bench_with_input(BenchmarkId::new(name, n), &pts, |b, pts| {
                b.iter(|| engine.kernel_raw(pts, &bases))
            });
        }
    }
    group.finish();
}

fn kernel_exact(c: &mut Criterion) {
    let bases = validate_bases(&[2, 3]).unwrap();
    let pts = halton_prefix(128, &bases);
    let mut group = c.benchmark_group("kernel_exact");
    group.sample_size(10);
    for (name, strategy) in strategies() {
        let engine = Engine::new().with_strategy(strategy);
        group.bench_function(name, |b| b.iter(|| engine.kernel_exact(&pts, &bases).unwrap()));
    }
    group.finish();
}

fn spectral(c: &mut Criterion) {
    let bases = validate_bases(&[2, 3]).unwrap();
    let pts = halton_prefix(256, &bases);
    let g = TruncationBox::new(vec![6, 4]).unwrap();
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    for (name, strategy) in strategies() {
        let engine = Engine::new().with_strategy(strategy);
        group.bench_function(name, |b| b.iter(|| engine.spectral(&pts, &bases, &g).unwrap()));
    }
    group.finish();
}

fn lemma(c: &mut Criterion) {
    let bases = validate_bases(&[2, 3]).unwrap();
    let g = TruncationBox::new(vec![4, 3]).unwrap();
    let mut group = c.benchmark_group("verify_lemma");
    group.sample_size(10);
    for (name, strategy) in strategies() {
        let engine = Engine::new().with_strategy(strategy);
        group.bench_function(name, |b| b.iter(|| engine.verify_lemma(128, &bases, &g).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, kernel, kernel_exact, spectral, lemma);
criterion_main!(benches);
