use bipforest::generate::{cube, grid};
use bipforest::{a_exact, audit, build_forest, detect, parse_graph6_file};
use bipforest_bench::{graph6_batch, quadrangulations};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.bench_function("cube", |b| b.iter(|| a_exact(black_box(cube().graph())).unwrap()));
    let g44 = grid(4, 4);
    g.bench_function("grid4x4", |b| b.iter(|| a_exact(black_box(g44.graph())).unwrap()));
    for n in [20, 30, 40] {
        let qs = quadrangulations(n, 4, 7);
        g.bench_with_input(BenchmarkId::new("quadrangulation", n), &qs, |b, qs| {
            b.iter(|| qs.iter().map(|q| a_exact(q.graph()).unwrap().size).sum::<usize>())
        });
    }
    g.finish();
}

fn builder(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_forest");
    for n in [30, 60] {
        let qs = quadrangulations(n, 4, 8);
        g.bench_with_input(BenchmarkId::from_parameter(n), &qs, |b, qs| {
            b.iter(|| qs.iter().map(|q| build_forest(q).unwrap().certificate.size).sum::<usize>())
        });
    }
    g.finish();
}

fn analysis(c: &mut Criterion) {
    let qs = quadrangulations(60, 4, 9);
    c.bench_function("detect/60", |b| b.iter(|| qs.iter().map(|q| detect(q).len()).sum::<usize>()));
    c.bench_function("audit/60", |b| b.iter(|| qs.iter().map(|q| audit(q).transfers).sum::<usize>()));
    let text = graph6_batch(200);
    c.bench_function("parse_graph6/200x40", |b| b.iter(|| parse_graph6_file(black_box(&text)).unwrap().len()));
}

criterion_group!(benches, exact, builder, analysis);
criterion_main!(benches);
