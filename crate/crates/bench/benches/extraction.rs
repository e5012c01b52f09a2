use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use figdata_bench::figure;
use figdata_core::pipeline::{extract_svg, PipelineConfig};
use figdata_core::svg::parse_svg;

fn parsing(c: &mut Criterion) {
    let mut group = c.benchmark_group("parse_svg");
    for n in [10, 100, 1000, 10_000] {
        let svg = figure(n);
        group.throughput(Throughput::Bytes(svg.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &svg, |b, svg| {
            b.iter(|| parse_svg(black_box(svg)).unwrap())
        });
    }
    group.finish();
}

fn extraction(c: &mut Criterion) {
    let config = PipelineConfig::default();
    let mut group = c.benchmark_group("extract_svg");
    for n in [10, 100, 1000, 10_000] {
        let svg = figure(n);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &svg, |b, svg| {
            b.iter(|| extract_svg(black_box(svg), &config))
        });
    }
    group.finish();
}

criterion_group!(benches, parsing, extraction);
criterion_main!(benches);
