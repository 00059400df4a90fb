//! Shared fixtures for the criterion benchmarks.

use mldtw_core::{
    build_training_set, gen_synth, train_waypoint_models, PipelineConfig, TimeSeries, TrainConfig,
    WaypointModelSet,
};

/// A deterministic pair of sine waves of the given length.
pub fn sine_pair(length: usize, seed: u64) -> (TimeSeries, TimeSeries) {
    let corpus = gen_synth(2, length, 0.075, seed).expect("valid parameters");
    let mut it = corpus.series.into_iter();
    (it.next().unwrap(), it.next().unwrap())
}

/// A small trained model set for inference benchmarks (seeded, so every
/// run measures the same weights).
pub fn small_model_set(length: usize) -> WaypointModelSet {
    let corpus = gen_synth(10, length, 0.075, 99).expect("valid parameters");
    let cfg = PipelineConfig::default();
    let rows = build_training_set(&corpus.series, &cfg)
        .expect("labeling succeeds")
        .rows;
    let mut train = TrainConfig::with_seed(7);
    train.hidden_width = 64;
    train.max_epochs = 15;
    train_waypoint_models(&rows, &cfg, &train)
        .expect("training succeeds")
        .0
}
