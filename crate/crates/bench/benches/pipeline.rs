use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vguard::io::{generate_polygon, Style};
use vguard::oracle::optimal_vertex_guards;
use vguard::partition::window_partition;
use vguard::pipeline::{guard_polygon, PipelineOptions};
use vguard::Mode;

fn partition(c: &mut Criterion) {
    let mut g = c.benchmark_group("partition");
    for n in [12, 24, 48] {
        let p = generate_polygon(n, 3, Style::Random).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| window_partition(black_box(p), 0))
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    for (style, n) in [(Style::Random, 16), (Style::Spiral, 20), (Style::Staircase, 16)] {
        let p = generate_polygon(n, 3, style).unwrap();
        for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
            let id = BenchmarkId::new(format!("{style:?}-{n}"), mode.name());
            g.bench_with_input(id, &p, |b, p| {
                b.iter(|| guard_polygon(black_box(p), mode, PipelineOptions::default()).unwrap())
            });
        }
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let p = generate_polygon(12, 3, Style::Random).unwrap();
    for mode in [Mode::Vertices, Mode::Boundary, Mode::Interior] {
        g.bench_function(mode.name(), |b| {
            b.iter(|| optimal_vertex_guards(black_box(&p), mode, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, partition, pipeline, oracle);
criterion_main!(benches);
