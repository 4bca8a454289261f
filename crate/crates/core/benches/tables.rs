use std::hint::black_box;

use auction_cube::orderstats::{OrderStatEngine, QuadratureConfig};
use auction_cube::thresholds::{order_stat_table, REFERENCE_SIGMAS};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_tables(c: &mut Criterion) {
    c.bench_function("order_stat_table/cached", |b| {
        b.iter(|| order_stat_table(black_box(&[2, 3, 4, 5, 6]), &REFERENCE_SIGMAS).unwrap())
    });

    let sizes: Vec<u32> = (2..=100).collect();
    let mut group = c.benchmark_group("prefill_cold");
    group.sample_size(10);
    for max_rank in [3u32, 100] {
        group.bench_function(format!("ranks<={max_rank}"), |b| {
            b.iter(|| {
                let engine = OrderStatEngine::new(QuadratureConfig::default()).unwrap();
                engine
                    .prefill(black_box(&sizes).iter().copied(), max_rank)
                    .unwrap();
                engine
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_tables);
criterion_main!(benches);
