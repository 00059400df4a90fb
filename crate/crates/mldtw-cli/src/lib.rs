//! Library half of the command-line front end: the benchmark harness and
//! the cost-matrix heatmap exporter, kept out of `main` so they can be
//! tested directly.

pub mod bench;
pub mod heatmap;

pub use bench::{
    records_to_csv, render_table, run_bench, sample_pairs, BenchConfig, BenchSummary, TrialRecord,
    Variant, VariantOutcome, VariantSummary,
};
pub use heatmap::heatmap_export;
