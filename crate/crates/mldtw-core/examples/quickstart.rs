//! Generate a small corpus, train the waypoint models, and compare the
//! three alignment variants on one pair.
//!
//! Run with: cargo run --release -p mldtw-core --example quickstart

use mldtw_core::*;

fn main() -> Result<()> {
    // A corpus of noisy phase-shifted sine waves.
    let corpus = gen_synth(60, 200, 0.075, 7)?;

    // Label ordered pairs with waypoints taken from exact warp paths, then
    // train one classifier per waypoint position.
    let cfg = PipelineConfig {
        dataset_id: "quickstart".into(),
        ..PipelineConfig::default()
    };
    let rows = build_training_set_sampled(&corpus.series, &cfg, 1500, 1)?.rows;
    let mut train = TrainConfig::with_seed(7);
    train.hidden_width = 100;
    let (models, _) = train_waypoint_models(&rows, &cfg, &train)?;

    // Compare the variants on a held-out pair.
    let extra = gen_synth(2, 200, 0.075, 999)?;
    let (a, b) = (&extra.series[0], &extra.series[1]);
    let exact = full_dtw(a, b)?;
    let banded = banded_dtw(a, b, 14)?;
    let (learned, stats) = ml_dtw(a, b, &models)?;

    println!(
        "full: distance {:.3} ({} cells, {:.4}s)",
        exact.distance,
        exact.cells_computed,
        exact.fill_time.as_secs_f64()
    );
    println!(
        "band: distance {:.3}, error {:.2}% ({} cells, {:.4}s)",
        banded.distance,
        percent_error(banded.distance, exact.distance),
        banded.cells_computed,
        banded.fill_time.as_secs_f64()
    );
    println!(
        "ml:   distance {:.3}, error {:.2}% ({} cells, fill {:.4}s, inference {:.4}s)",
        learned.distance,
        percent_error(learned.distance, exact.distance),
        learned.cells_computed,
        learned.fill_time.as_secs_f64(),
        stats.inference_time.as_secs_f64()
    );
    Ok(())
}
