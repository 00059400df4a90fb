//! Scaling shape of the full fill. Kept in its own binary so no sibling
//! test competes for the cores while timing.

use std::time::Instant;

use mldtw_core::*;

fn median_fill_seconds(len: usize, trials: usize, seed: u64) -> f64 {
    let corpus = gen_synth(2 * trials, len, 0.075, seed).unwrap();
    let mut times: Vec<f64> = (0..trials)
        .map(|t| {
            let (a, b) = (&corpus.series[2 * t], &corpus.series[2 * t + 1]);
            let start = Instant::now();
            let alignment = full_dtw(a, b).unwrap();
            let elapsed = start.elapsed().as_secs_f64();
            assert!(alignment.distance >= 0.0);
            elapsed
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}

#[test]
fn doubling_length_roughly_quadruples_fill_time() {
    // Warm up allocator and caches.
    let _ = median_fill_seconds(512, 2, 1);
    let short = median_fill_seconds(512, 9, 2);
    let long = median_fill_seconds(1024, 9, 3);
    let ratio = long / short;
    assert!(
        (3.0..=5.5).contains(&ratio),
        "time ratio {ratio:.2} outside [3.0, 5.5] (short {short:.4}s, long {long:.4}s)"
    );
}
