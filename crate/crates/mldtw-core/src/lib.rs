//! Time-series alignment toolkit: exact dynamic time warping, the fixed
//! Sakoe-Chiba band baseline, and a learned variant that predicts warp-path
//! waypoints from signal prefixes and fills only a confidence-sized region
//! of the cost matrix.
//!
//! The crate is organized bottom-up:
//!
//! - [`series`], [`matrix`], [`path`] — sample storage, the accumulated-cost
//!   grid, and warp paths.
//! - [`dtw`] — exact fill and backtracking.
//! - [`band`] — search regions and the fixed diagonal band.
//! - [`region`] — waypoints + confidences to per-row search intervals.
//! - [`nn`] — the classifier stack (standardize, dense/ReLU/softmax,
//!   Adam, early stopping, serialization).
//! - [`pipeline`] — corpus labeling, five-model training, and the
//!   end-to-end learned alignment.
//! - [`datasets`] — synthetic corpus generation and CSV ingestion.

pub mod band;
pub mod datasets;
pub mod dtw;
pub mod error;
pub mod matrix;
pub mod nn;
pub mod path;
pub mod pipeline;
pub mod region;
pub mod series;

pub use band::{banded_dtw, constrained_cost_matrix, sakoe_chiba_region, SearchRegion};
pub use datasets::{
    acc_magnitude, gen_synth, load_series_csv, write_corpus_csv, Corpus, CsvSchema,
};
pub use dtw::{backtrack, full_cost_matrix, full_dtw, path_cost};
pub use error::{Error, Result};
pub use matrix::CostMatrix;
pub use nn::{
    load_model, predict, relu, save_model, softmax, train_classifier, DenseNet, Scaler,
    TrainConfig, TrainHistory,
};
pub use path::{Alignment, WarpPath};
pub use pipeline::{
    build_training_set, build_training_set_sampled, extract_features, extract_waypoints, ml_dtw,
    ml_dtw_with_waypoints, percent_error, read_training_csv, region_dtw, region_for_waypoints,
    train_waypoint_models, write_training_csv, FeatureMode, LabeledRow, PipelineConfig,
    RegionStats, WaypointModelSet,
};
pub use region::{center_path, quantize, region_from_path, width_profile, Waypoint};
pub use series::{point_distance, TimeSeries};
