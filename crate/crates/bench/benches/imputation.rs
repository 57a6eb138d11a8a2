use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hmit_bench::{masked_car, params};
use hmit_core::{impute_dataset, impute_dataset_knn, HmitModel};

fn impute(c: &mut Criterion) {
    let mut group = c.benchmark_group("impute");
    group.sample_size(10);
    for rate in [0.05, 0.2] {
        let masked = masked_car(rate, 1);
        let label = format!("{}%", (rate * 100.0) as u32);
        for (count, confidence) in [(40, 0.6), (40, 0.2)] {
            let p = params(count, confidence);
            let model = HmitModel::fit(&masked, &p).unwrap();
            let id = format!("{label}/conf-{}", (confidence * 100.0) as u32);
            group.bench_function(BenchmarkId::new("hmit", id), |b| {
                b.iter(|| impute_dataset(black_box(&masked), &model, &p).unwrap())
            });
        }
        let p = params(40, 0.6);
        group.bench_function(BenchmarkId::new("knn", &label), |b| {
            b.iter(|| impute_dataset_knn(black_box(&masked), &p).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, impute);
criterion_main!(benches);
