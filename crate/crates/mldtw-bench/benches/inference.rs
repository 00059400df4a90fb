//! Inference-side benchmarks: feature extraction and the five-classifier
//! waypoint prediction that precedes every learned-region fill.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mldtw_bench::{sine_pair, small_model_set};
use mldtw_core::{extract_features, ml_dtw, predict};

fn bench_inference(c: &mut Criterion) {
    let models = small_model_set(200);
    let (a, b) = sine_pair(200, 4);
    let features = extract_features(&a, &b, &models.config).unwrap();

    c.bench_function("extract_features_raw60", |bench| {
        bench.iter(|| extract_features(black_box(&a), black_box(&b), &models.config).unwrap())
    });

    c.bench_function("predict_single_waypoint", |bench| {
        let (net, scaler) = models.model(0);
        bench.iter(|| predict(net, scaler, black_box(&features)).unwrap())
    });

    c.bench_function("ml_dtw_end_to_end_200", |bench| {
        bench.iter(|| {
            ml_dtw(black_box(&a), black_box(&b), &models)
                .unwrap()
                .0
                .distance
        })
    });
}

criterion_group!(benches, bench_inference);
criterion_main!(benches);
