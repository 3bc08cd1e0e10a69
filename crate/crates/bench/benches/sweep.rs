use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rankforge_core::deck::classify_masks;
use rankforge_core::{freq_closed, Enumerator, HandClass, RankingEngine};

fn bench_classify(c: &mut Criterion) {
    let masks = [0b1_0110_0011u32, 0b0_0110_0000, 0b0_0000_0011, 0];
    c.bench_function("classify_masks", |b| {
        b.iter(|| classify_masks(black_box(masks), black_box(13)))
    });
}

fn bench_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for r in [7u32, 9] {
        group.bench_with_input(BenchmarkId::new("plain", r), &r, |b, &r| {
            let e = Enumerator::new().threads(1);
            b.iter(|| e.profile_histogram(r).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("suit_canonical", r), &r, |b, &r| {
            let e = Enumerator::new().threads(1).suit_canonical(true);
            b.iter(|| e.profile_histogram(r).unwrap())
        });
    }
    group.finish();
}

fn bench_closed_forms(c: &mut Criterion) {
    c.bench_function("freq_closed_flush_1000", |b| {
        b.iter(|| freq_closed(HandClass::Flush, black_box(1000)).unwrap())
    });
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("breakpoints_8_1000", |b| {
        let engine = RankingEngine::default();
        b.iter(|| engine.scan_breakpoints(8, 1000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_classify, bench_sweeps, bench_closed_forms);
criterion_main!(benches);
