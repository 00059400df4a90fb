//! End-to-end learned-region alignment: labeling a corpus with exact warp
//! paths, training the five waypoint classifiers, and running the
//! predict-region-fill pipeline on new pairs.

use std::collections::HashSet;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::band::{constrained_cost_matrix, SearchRegion};
use crate::dtw::{backtrack, check_dims, full_dtw};
use crate::error::{Error, Result};
use crate::matrix::CostMatrix;
use crate::nn::{
    model_from_bytes, model_to_bytes, predict, train_classifier, DenseNet, Scaler, TrainConfig,
    TrainHistory,
};
use crate::path::{Alignment, WarpPath};
use crate::region::{
    center_path, quantize, region_from_path, width_profile, Waypoint, ENDPOINT_WIDTH,
};
use crate::series::{point_distance_unchecked, TimeSeries};

/// Number of interior waypoints predicted along a warp path.
pub const WAYPOINT_COUNT: usize = 5;

/// Default number of leading samples taken from each series as features.
pub const DEFAULT_PREFIX: usize = 30;

const SET_MAGIC: &[u8; 8] = b"MLDTWMS1";

/// What the feature vector for a pair contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureMode {
    /// The first `L` points of A then the first `W` points of B, flattened
    /// in point order. The default.
    RawPrefix,
    /// The `L x W` top-left block of the pair's cost matrix, flattened
    /// column-major. Requires `L == W`.
    MatrixBlock,
}

/// Labeling / inference configuration shared across the pipeline.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Samples taken from the first series (`L`).
    pub prefix_a: usize,
    /// Samples taken from the second series (`W`).
    pub prefix_b: usize,
    /// Waypoint quantization base (`Q`).
    pub quant: usize,
    pub feature_mode: FeatureMode,
    /// Free-form tag recorded in the model file.
    pub dataset_id: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            prefix_a: DEFAULT_PREFIX,
            prefix_b: DEFAULT_PREFIX,
            quant: crate::region::DEFAULT_QUANT,
            feature_mode: FeatureMode::RawPrefix,
            dataset_id: String::new(),
        }
    }
}

impl PipelineConfig {
    fn validate(&self) -> Result<()> {
        if self.prefix_a < 1 || self.prefix_b < 1 {
            return Err(Error::InvalidParameter {
                name: "prefix",
                reason: "must be at least 1".into(),
            });
        }
        if self.quant < 1 {
            return Err(Error::InvalidParameter {
                name: "quant",
                reason: "must be at least 1".into(),
            });
        }
        if self.feature_mode == FeatureMode::MatrixBlock && self.prefix_a != self.prefix_b {
            return Err(Error::InvalidParameter {
                name: "prefix",
                reason: "matrix-block features require equal prefixes".into(),
            });
        }
        Ok(())
    }
}

/// One labeled training example.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub features: Vec<f64>,
    pub waypoints: [Waypoint; WAYPOINT_COUNT],
}

/// Result of labeling a corpus.
#[derive(Debug)]
pub struct LabelOutcome {
    pub rows: Vec<LabeledRow>,
    /// Ordered pairs skipped because a series was shorter than its prefix.
    pub skipped: usize,
}

/// Concatenate the leading samples of both series into one feature vector.
///
/// No scaling happens here; standardization lives inside the trained models.
pub fn extract_features(a: &TimeSeries, b: &TimeSeries, cfg: &PipelineConfig) -> Result<Vec<f64>> {
    check_dims(a, b)?;
    cfg.validate()?;
    let (l, w) = (cfg.prefix_a, cfg.prefix_b);
    if a.len() < l {
        return Err(Error::SeriesTooShort {
            len: a.len(),
            min: l,
        });
    }
    if b.len() < w {
        return Err(Error::SeriesTooShort {
            len: b.len(),
            min: w,
        });
    }
    match cfg.feature_mode {
        FeatureMode::RawPrefix => {
            let dim = a.dim();
            let mut out = Vec::with_capacity((l + w) * dim);
            out.extend_from_slice(&a.values()[..l * dim]);
            out.extend_from_slice(&b.values()[..w * dim]);
            Ok(out)
        }
        FeatureMode::MatrixBlock => {
            // Partial fill of the pair's own cost matrix over the top-left
            // block; every block cell has in-block (or border) predecessors.
            let mut matrix = CostMatrix::new_infinite(a.len(), b.len());
            for i in 1..=l {
                let pa = a.point(i - 1);
                for j in 1..=w {
                    let cost = point_distance_unchecked(pa, b.point(j - 1));
                    let last_min = matrix
                        .get(i - 1, j)
                        .min(matrix.get(i, j - 1))
                        .min(matrix.get(i - 1, j - 1));
                    matrix.set(i, j, cost + last_min);
                }
            }
            let mut out = Vec::with_capacity(l * w);
            for col in 1..=l {
                for row in 1..=w {
                    out.push(matrix.get(row, col));
                }
            }
            Ok(out)
        }
    }
}

/// Reduce an exact warp path to five quantized waypoints at the interior
/// sixth columns.
///
/// For each column `c_k = round(k * m / 6)`, the waypoint row is the integer
/// mean of the path rows crossing that column, and both coordinates are
/// quantized to the base `q` (clamped to stay on the grid).
pub fn extract_waypoints(
    path: &WarpPath,
    n: usize,
    m: usize,
    q: usize,
) -> Result<[Waypoint; WAYPOINT_COUNT]> {
    if q < 1 {
        return Err(Error::InvalidParameter {
            name: "quant",
            reason: "must be at least 1".into(),
        });
    }
    path.validate(n, m)?;
    let mut out = [Waypoint { row: 0, col: 0 }; WAYPOINT_COUNT];
    for (k, slot) in out.iter_mut().enumerate() {
        let col = ((k + 1) as f64 * m as f64 / 6.0)
            .round_ties_even()
            .min((m - 1) as f64) as usize;
        let mut sum = 0usize;
        let mut count = 0usize;
        for &(pr, pc) in path.pairs() {
            if pc - 1 == col {
                sum += pr - 1;
                count += 1;
            }
        }
        debug_assert!(count > 0, "warp path covers every column");
        let mean_row = sum / count.max(1);
        // Rounding may push a boundary-hugging waypoint one base past the
        // last cell; region construction clamps it back, and pre-clamping
        // here would lose the "path hugs the last row" signal.
        *slot = Waypoint {
            row: quantize(mean_row, q),
            col: quantize(col, q),
        };
    }
    Ok(out)
}

/// Label every ordered pair of the corpus with exact-path waypoints.
///
/// Produces `k * (k - 1)` rows for `k` usable series; pairs involving a
/// series shorter than its prefix are skipped and counted.
pub fn build_training_set(series: &[TimeSeries], cfg: &PipelineConfig) -> Result<LabelOutcome> {
    label_pairs(series, cfg, None, 0)
}

/// Like [`build_training_set`] but over at most `max_pairs` ordered pairs,
/// sampled uniformly without replacement with the given seed.
pub fn build_training_set_sampled(
    series: &[TimeSeries],
    cfg: &PipelineConfig,
    max_pairs: usize,
    seed: u64,
) -> Result<LabelOutcome> {
    label_pairs(series, cfg, Some(max_pairs), seed)
}

fn label_pairs(
    series: &[TimeSeries],
    cfg: &PipelineConfig,
    max_pairs: Option<usize>,
    seed: u64,
) -> Result<LabelOutcome> {
    cfg.validate()?;
    if series.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "corpus",
            reason: "need at least 2 series".into(),
        });
    }
    let dim = series[0].dim();
    if let Some(bad) = series.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: bad.dim(),
        });
    }

    let pairs = sample_ordered_pairs(series.len(), max_pairs, seed);
    let mut skipped = 0usize;
    let mut usable = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        if series[i].len() < cfg.prefix_a || series[j].len() < cfg.prefix_b {
            skipped += 1;
        } else {
            usable.push((i, j));
        }
    }

    let rows: Result<Vec<LabeledRow>> = usable
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&series[i], &series[j]);
            let alignment = full_dtw(a, b)?;
            let features = extract_features(a, b, cfg)?;
            let waypoints = extract_waypoints(&alignment.path, a.len(), b.len(), cfg.quant)?;
            Ok(LabeledRow {
                features,
                waypoints,
            })
        })
        .collect();
    Ok(LabelOutcome {
        rows: rows?,
        skipped,
    })
}

/// All ordered pairs `(i, j), i != j`, or a seeded uniform sample of them
/// without replacement, in ascending pair order either way.
fn sample_ordered_pairs(count: usize, max_pairs: Option<usize>, seed: u64) -> Vec<(usize, usize)> {
    let total = count * (count - 1);
    let unflatten = |idx: usize| {
        let i = idx / (count - 1);
        let r = idx % (count - 1);
        let j = if r < i { r } else { r + 1 };
        (i, j)
    };
    match max_pairs {
        Some(limit) if limit < total => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut chosen = HashSet::with_capacity(limit);
            while chosen.len() < limit {
                chosen.insert(rng.random_range(0..total));
            }
            let mut indices: Vec<usize> = chosen.into_iter().collect();
            indices.sort_unstable();
            indices.into_iter().map(unflatten).collect()
        }
        _ => (0..total).map(unflatten).collect(),
    }
}

/// The five trained classifiers plus everything inference needs.
#[derive(Debug, Clone)]
pub struct WaypointModelSet {
    models: Vec<(DenseNet, Scaler)>,
    pub config: PipelineConfig,
}

impl WaypointModelSet {
    /// The classifier and scaler for waypoint position `k`.
    #[must_use]
    pub fn model(&self, k: usize) -> (&DenseNet, &Scaler) {
        let (net, scaler) = &self.models[k];
        (net, scaler)
    }

    /// Feature vector length all five classifiers expect.
    #[must_use]
    pub fn feature_dim(&self) -> usize {
        self.models[0].0.feature_dim()
    }

    /// Serialize the whole set (five embedded model blocks plus the
    /// pipeline configuration) into one file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(SET_MAGIC);
        buf.extend_from_slice(
            &(match self.config.feature_mode {
                FeatureMode::RawPrefix => 0u32,
                FeatureMode::MatrixBlock => 1u32,
            })
            .to_le_bytes(),
        );
        buf.extend_from_slice(&(self.config.prefix_a as u32).to_le_bytes());
        buf.extend_from_slice(&(self.config.prefix_b as u32).to_le_bytes());
        buf.extend_from_slice(&(self.config.quant as u32).to_le_bytes());
        let id = self.config.dataset_id.as_bytes();
        buf.extend_from_slice(&(id.len() as u32).to_le_bytes());
        buf.extend_from_slice(id);
        buf.extend_from_slice(&(self.models.len() as u32).to_le_bytes());
        for (net, scaler) in &self.models {
            let block = model_to_bytes(net, scaler);
            buf.extend_from_slice(&(block.len() as u64).to_le_bytes());
            buf.extend_from_slice(&block);
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        let mut file = fs::File::create(path)?;
        file.write_all(&buf)?;
        Ok(())
    }

    /// Load a set written by [`save`](Self::save).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = fs::read(path)?;
        if bytes.len() < SET_MAGIC.len() + 4 {
            return Err(Error::Truncated {
                expected: SET_MAGIC.len() + 4 - bytes.len(),
            });
        }
        if &bytes[..SET_MAGIC.len()] != SET_MAGIC {
            return Err(Error::BadMagic);
        }
        let (payload, crc_bytes) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(crc_bytes.try_into().expect("4 bytes"));
        if crc32fast::hash(payload) != stored {
            return Err(Error::ChecksumMismatch);
        }
        let mut r = crate::nn::io::Reader::new(&payload[SET_MAGIC.len()..]);
        let feature_mode = match r.u32()? {
            0 => FeatureMode::RawPrefix,
            1 => FeatureMode::MatrixBlock,
            other => {
                return Err(Error::InconsistentDims {
                    reason: format!("unknown feature mode {other}"),
                })
            }
        };
        let prefix_a = r.u32()? as usize;
        let prefix_b = r.u32()? as usize;
        let quant = r.u32()? as usize;
        let id_len = r.u32()? as usize;
        let dataset_id =
            String::from_utf8(r.take(id_len)?.to_vec()).map_err(|_| Error::InconsistentDims {
                reason: "dataset id is not UTF-8".into(),
            })?;
        let model_count = r.u32()? as usize;
        if model_count != WAYPOINT_COUNT {
            return Err(Error::InconsistentDims {
                reason: format!("expected {WAYPOINT_COUNT} models, found {model_count}"),
            });
        }
        let mut models = Vec::with_capacity(model_count);
        for _ in 0..model_count {
            let len = r.u64()? as usize;
            let block = r.take(len)?;
            models.push(model_from_bytes(block)?);
        }
        if r.remaining() != 0 {
            return Err(Error::InconsistentDims {
                reason: format!("{} trailing bytes", r.remaining()),
            });
        }
        let dim = models[0].0.feature_dim();
        if models.iter().any(|(net, _)| net.feature_dim() != dim) {
            return Err(Error::InconsistentDims {
                reason: "models disagree on feature length".into(),
            });
        }
        Ok(Self {
            models,
            config: PipelineConfig {
                prefix_a,
                prefix_b,
                quant,
                feature_mode,
                dataset_id,
            },
        })
    }
}

/// Train one classifier per waypoint position on the labeled rows.
///
/// Each position gets its own label alphabet (the distinct quantized
/// waypoints observed there, sorted), its own scaler, and its own seeded
/// training run; the five runs execute in parallel and are deterministic
/// for a fixed configuration.
pub fn train_waypoint_models(
    rows: &[LabeledRow],
    pipeline: &PipelineConfig,
    cfg: &TrainConfig,
) -> Result<(WaypointModelSet, Vec<TrainHistory>)> {
    pipeline.validate()?;
    if rows.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "rows",
            reason: "need at least 2 labeled rows".into(),
        });
    }
    let features: Vec<Vec<f64>> = rows.iter().map(|r| r.features.clone()).collect();

    let outcomes: Result<Vec<(DenseNet, Scaler, TrainHistory)>> = (0..WAYPOINT_COUNT)
        .into_par_iter()
        .map(|k| {
            let mut alphabet: Vec<Waypoint> = rows.iter().map(|r| r.waypoints[k]).collect();
            alphabet.sort_unstable();
            alphabet.dedup();
            if alphabet.len() < 2 {
                return Err(Error::DegenerateLabels {
                    position: k,
                    count: alphabet.len(),
                });
            }
            let labels: Vec<usize> = rows
                .iter()
                .map(|r| {
                    alphabet
                        .binary_search(&r.waypoints[k])
                        .expect("label drawn from alphabet")
                })
                .collect();
            let mut model_cfg = cfg.clone();
            model_cfg.seed = cfg.seed.wrapping_add(k as u64);
            train_classifier(&features, &labels, alphabet, &model_cfg)
        })
        .collect();
    let outcomes = outcomes?;

    let mut models = Vec::with_capacity(WAYPOINT_COUNT);
    let mut histories = Vec::with_capacity(WAYPOINT_COUNT);
    for (net, scaler, history) in outcomes {
        models.push((net, scaler));
        histories.push(history);
    }
    Ok((
        WaypointModelSet {
            models,
            config: pipeline.clone(),
        },
        histories,
    ))
}

/// Everything the learned-region run recorded besides the alignment itself.
#[derive(Debug, Clone)]
pub struct RegionStats {
    /// Cells inside the search region (equals the fill's computed count).
    pub region_area: usize,
    /// Confidence of each predicted waypoint, in position order.
    pub confidences: [f64; WAYPOINT_COUNT],
    /// The predicted waypoints, in position order.
    pub waypoints: [Waypoint; WAYPOINT_COUNT],
    /// Feature extraction plus five model predictions plus region
    /// construction.
    pub inference_time: Duration,
    /// Constrained fill plus backtracking (same clock as the alignment).
    pub fill_time: Duration,
}

/// Build the search region for a set of waypoints and their confidences.
///
/// The `(0, 0)` anchor confidence of 1 is prepended here, so callers pass
/// exactly the five per-waypoint confidences.
pub fn region_for_waypoints(
    waypoints: &[Waypoint],
    confidences: &[f64],
    n: usize,
    m: usize,
) -> Result<SearchRegion> {
    let mut anchored = Vec::with_capacity(confidences.len() + 1);
    anchored.push(1.0);
    anchored.extend_from_slice(confidences);
    let widths = width_profile(&anchored, n, m, ENDPOINT_WIDTH)?;
    let path = center_path(waypoints, n, m);
    Ok(region_from_path(&path, &widths, n, m))
}

/// Constrained alignment over an explicit region (fill plus backtracking).
pub fn region_dtw(a: &TimeSeries, b: &TimeSeries, region: &SearchRegion) -> Result<Alignment> {
    let start = Instant::now();
    let matrix = constrained_cost_matrix(a, b, region)?;
    let path = backtrack(&matrix)?;
    let fill_time = start.elapsed();
    Ok(Alignment {
        distance: matrix.bottom_right(),
        path,
        cells_computed: matrix.computed_count(),
        fill_time,
    })
}

/// The full learned pipeline on one pair: predict five waypoints and
/// confidences, size a region, fill it, and backtrack.
pub fn ml_dtw(
    a: &TimeSeries,
    b: &TimeSeries,
    models: &WaypointModelSet,
) -> Result<(Alignment, RegionStats)> {
    let (n, m) = (a.len(), b.len());
    if n < 7 || m < 7 {
        return Err(Error::SeriesTooShort {
            len: n.min(m),
            min: 7,
        });
    }
    let inference_start = Instant::now();
    let features = extract_features(a, b, &models.config)?;
    let mut waypoints = [Waypoint { row: 0, col: 0 }; WAYPOINT_COUNT];
    let mut confidences = [0.0f64; WAYPOINT_COUNT];
    for k in 0..WAYPOINT_COUNT {
        let (net, scaler) = models.model(k);
        let (wp, confidence) = predict(net, scaler, &features)?;
        waypoints[k] = wp;
        confidences[k] = confidence;
    }
    let region = region_for_waypoints(&waypoints, &confidences, n, m)?;
    let inference_time = inference_start.elapsed();

    let alignment = region_dtw(a, b, &region)?;
    let stats = RegionStats {
        region_area: region.area(),
        confidences,
        waypoints,
        inference_time,
        fill_time: alignment.fill_time,
    };
    Ok((alignment, stats))
}

/// Learned-region alignment with the waypoints supplied directly (for
/// ground-truth injection and coverage checks), bypassing the classifiers.
pub fn ml_dtw_with_waypoints(
    a: &TimeSeries,
    b: &TimeSeries,
    waypoints: &[Waypoint],
    confidences: &[f64],
) -> Result<(Alignment, RegionStats)> {
    let (n, m) = (a.len(), b.len());
    if n < 7 || m < 7 {
        return Err(Error::SeriesTooShort {
            len: n.min(m),
            min: 7,
        });
    }
    let region = region_for_waypoints(waypoints, confidences, n, m)?;
    let alignment = region_dtw(a, b, &region)?;
    let mut wp_arr = [Waypoint { row: 0, col: 0 }; WAYPOINT_COUNT];
    let mut conf_arr = [1.0f64; WAYPOINT_COUNT];
    for (slot, wp) in wp_arr.iter_mut().zip(waypoints) {
        *slot = *wp;
    }
    for (slot, c) in conf_arr.iter_mut().zip(confidences) {
        *slot = *c;
    }
    let stats = RegionStats {
        region_area: region.area(),
        confidences: conf_arr,
        waypoints: wp_arr,
        inference_time: Duration::ZERO,
        fill_time: alignment.fill_time,
    };
    Ok((alignment, stats))
}

/// Percent error of a variant distance against the exact distance.
///
/// Returns `INFINITY` as the sentinel for `d_exact == 0` with `d > 0`;
/// aggregation excludes non-finite values. Admissible variants never
/// produce negative values.
#[must_use]
pub fn percent_error(d: f64, d_exact: f64) -> f64 {
    if d_exact == 0.0 {
        if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (d - d_exact) / d_exact
    }
}

/// Write labeled rows to the training CSV schema: feature columns
/// `f0..f{F-1}`, then `wp0_row,wp0_col,...,wp4_row,wp4_col`.
pub fn write_training_csv(path: impl AsRef<Path>, rows: &[LabeledRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter {
            name: "rows",
            reason: "nothing to write".into(),
        });
    }
    let feature_count = rows[0].features.len();
    let mut text = String::new();
    for f in 0..feature_count {
        text.push_str(&format!("f{f},"));
    }
    for k in 0..WAYPOINT_COUNT {
        if k > 0 {
            text.push(',');
        }
        text.push_str(&format!("wp{k}_row,wp{k}_col"));
    }
    text.push('\n');
    for row in rows {
        for v in &row.features {
            text.push_str(&format!("{v},"));
        }
        for (k, wp) in row.waypoints.iter().enumerate() {
            if k > 0 {
                text.push(',');
            }
            text.push_str(&format!("{},{}", wp.row, wp.col));
        }
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// Read rows written by [`write_training_csv`].
pub fn read_training_csv(path: impl AsRef<Path>) -> Result<Vec<LabeledRow>> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::EmptyFile {
        path: display.clone(),
    })?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let label_cols = 2 * WAYPOINT_COUNT;
    if columns.len() <= label_cols
        || columns[0] != "f0"
        || columns[columns.len() - label_cols] != "wp0_row"
    {
        return Err(Error::MissingHeader {
            path: display,
            expected: "f0..,wp0_row,wp0_col,..,wp4_row,wp4_col".into(),
        });
    }
    let feature_count = columns.len() - label_cols;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != columns.len() {
            return Err(Error::RaggedRow {
                path: display.clone(),
                line: line_no,
                expected: columns.len(),
                found: cells.len(),
            });
        }
        let parse = |cell: &str| -> Result<f64> {
            cell.parse().map_err(|_| Error::NonNumericCell {
                path: display.clone(),
                line: line_no,
                cell: cell.to_string(),
            })
        };
        let features: Vec<f64> = cells[..feature_count]
            .iter()
            .map(|c| parse(c))
            .collect::<Result<_>>()?;
        let mut waypoints = [Waypoint { row: 0, col: 0 }; WAYPOINT_COUNT];
        for (k, slot) in waypoints.iter_mut().enumerate() {
            let row = parse(cells[feature_count + 2 * k])?;
            let col = parse(cells[feature_count + 2 * k + 1])?;
            if row < 0.0 || col < 0.0 || row.fract() != 0.0 || col.fract() != 0.0 {
                return Err(Error::NonNumericCell {
                    path: display.clone(),
                    line: line_no,
                    cell: format!("({row}, {col})"),
                });
            }
            *slot = Waypoint {
                row: row as usize,
                col: col as usize,
            };
        }
        rows.push(LabeledRow {
            features,
            waypoints,
        });
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile { path: display });
    }
    Ok(rows)
}
