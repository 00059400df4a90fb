//! Benchmark harness: seeded pair sampling, per-trial variant runs, and
//! median summaries.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use mldtw_core::{
    banded_dtw, full_dtw, ml_dtw, percent_error, Corpus, Error, Result, WaypointModelSet,
};

/// Which algorithms a bench run executes and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Full,
    Band,
    Ml,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Band => "band",
            Variant::Ml => "ml",
        }
    }
}

/// Bench run parameters, echoed into the summary.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub trials: usize,
    pub variants: Vec<Variant>,
    pub seed: u64,
    /// Fixed band radius; `None` selects the budget-fair default.
    pub radius: Option<usize>,
    pub threads: usize,
    pub corpus_path: String,
    pub model_path: Option<String>,
}

/// One variant's result on one pair.
#[derive(Debug, Clone, Serialize)]
pub struct VariantOutcome {
    pub distance: f64,
    pub error_pct: f64,
    pub fill_seconds: f64,
    pub cells: usize,
}

/// Everything measured for one sampled pair.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    pub a_id: String,
    pub b_id: String,
    pub exact_distance: f64,
    pub full: Option<VariantOutcome>,
    pub band: Option<VariantOutcome>,
    pub ml: Option<VariantOutcome>,
    pub ml_inference_seconds: Option<f64>,
}

/// Medians for one variant over the non-excluded trials.
#[derive(Debug, Clone, Serialize)]
pub struct VariantSummary {
    pub variant: String,
    pub median_error_pct: f64,
    pub median_fill_seconds: f64,
    pub median_cells: f64,
}

/// Machine-readable run summary.
#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub trial_count: usize,
    /// Trials with a zero exact distance, excluded from error medians.
    pub excluded_error_trials: usize,
    pub seed: u64,
    pub threads: usize,
    pub corpus: String,
    pub model: Option<String>,
    pub variants: Vec<String>,
    /// The band radius actually used (explicit or budget-fair).
    pub band_radius: Option<usize>,
    pub median_ml_inference_seconds: Option<f64>,
    pub summaries: Vec<VariantSummary>,
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Sample `limit` ordered pairs `(i, j), i != j` uniformly without
/// replacement, returned in ascending flat-index order.
pub fn sample_pairs(count: usize, limit: usize, seed: u64) -> Vec<(usize, usize)> {
    let total = count * (count - 1);
    let unflatten = |idx: usize| {
        let i = idx / (count - 1);
        let r = idx % (count - 1);
        (i, if r < i { r } else { r + 1 })
    };
    if limit >= total {
        return (0..total).map(unflatten).collect();
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut chosen = HashSet::with_capacity(limit);
    while chosen.len() < limit {
        chosen.insert(rng.random_range(0..total));
    }
    let mut indices: Vec<usize> = chosen.into_iter().collect();
    indices.sort_unstable();
    indices.into_iter().map(unflatten).collect()
}

/// Run the benchmark: every trial computes the exact alignment (the error
/// reference), plus the banded and learned variants when selected.
///
/// Without an explicit radius the band is budget-fair: its radius is chosen
/// so the banded cell count per row matches the learned variant's mean
/// region area (falling back to a tenth of the mean length when the learned
/// variant is not in the run).
pub fn run_bench(
    corpus: &Corpus,
    models: Option<&WaypointModelSet>,
    cfg: &BenchConfig,
) -> Result<(Vec<TrialRecord>, BenchSummary)> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    if corpus.series.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "corpus",
            reason: "need at least 2 series".into(),
        });
    }
    let want_ml = cfg.variants.contains(&Variant::Ml);
    let want_band = cfg.variants.contains(&Variant::Band);
    let want_full = cfg.variants.contains(&Variant::Full);
    if want_ml && models.is_none() {
        return Err(Error::InvalidParameter {
            name: "model",
            reason: "the ml variant needs a trained model set".into(),
        });
    }

    let pairs = sample_pairs(corpus.series.len(), cfg.trials, cfg.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidParameter {
            name: "threads",
            reason: e.to_string(),
        })?;

    struct Partial {
        exact_distance: f64,
        full: Option<VariantOutcome>,
        ml: Option<VariantOutcome>,
        ml_inference: Option<Duration>,
    }

    // Pass 1: exact reference and (optionally) the learned variant, whose
    // mean region area fixes the budget-fair band radius.
    let partials: Result<Vec<Partial>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&corpus.series[i], &corpus.series[j]);
                let exact = full_dtw(a, b)?;
                let (ml, ml_inference) = if want_ml {
                    let (alignment, stats) = ml_dtw(a, b, models.expect("checked above"))?;
                    (
                        Some(VariantOutcome {
                            distance: alignment.distance,
                            error_pct: percent_error(alignment.distance, exact.distance),
                            fill_seconds: alignment.fill_time.as_secs_f64(),
                            cells: alignment.cells_computed,
                        }),
                        Some(stats.inference_time),
                    )
                } else {
                    (None, None)
                };
                Ok(Partial {
                    exact_distance: exact.distance,
                    full: want_full.then_some(VariantOutcome {
                        distance: exact.distance,
                        error_pct: 0.0,
                        fill_seconds: exact.fill_time.as_secs_f64(),
                        cells: exact.cells_computed,
                    }),
                    ml,
                    ml_inference,
                })
            })
            .collect()
    });
    let partials = partials?;

    let band_radius = if want_band {
        Some(cfg.radius.unwrap_or_else(|| {
            let mean_rows = pairs
                .iter()
                .map(|&(i, _)| corpus.series[i].len() as f64)
                .sum::<f64>()
                / pairs.len() as f64;
            match partials.iter().filter_map(|p| p.ml.as_ref()).count() {
                0 => ((0.1 * mean_rows).round() as usize).max(1),
                ml_count => {
                    let mean_area = partials
                        .iter()
                        .filter_map(|p| p.ml.as_ref())
                        .map(|o| o.cells as f64)
                        .sum::<f64>()
                        / ml_count as f64;
                    // area ~ rows * (2r + 1)
                    (((mean_area / mean_rows - 1.0) / 2.0).round() as usize).max(1)
                }
            }
        }))
    } else {
        None
    };

    // Pass 2: the band at the chosen radius.
    let bands: Result<Vec<Option<VariantOutcome>>> = pool.install(|| {
        pairs
            .par_iter()
            .zip(&partials)
            .map(|(&(i, j), partial)| {
                let Some(radius) = band_radius else {
                    return Ok(None);
                };
                let (a, b) = (&corpus.series[i], &corpus.series[j]);
                let alignment = banded_dtw(a, b, radius)?;
                Ok(Some(VariantOutcome {
                    distance: alignment.distance,
                    error_pct: percent_error(alignment.distance, partial.exact_distance),
                    fill_seconds: alignment.fill_time.as_secs_f64(),
                    cells: alignment.cells_computed,
                }))
            })
            .collect()
    });
    let bands = bands?;

    let records: Vec<TrialRecord> = pairs
        .iter()
        .zip(partials)
        .zip(bands)
        .enumerate()
        .map(|(trial, ((&(i, j), partial), band))| TrialRecord {
            trial,
            a_id: corpus.series[i]
                .id()
                .map_or_else(|| format!("series-{i}"), str::to_owned),
            b_id: corpus.series[j]
                .id()
                .map_or_else(|| format!("series-{j}"), str::to_owned),
            exact_distance: partial.exact_distance,
            full: partial.full,
            band,
            ml: partial.ml,
            ml_inference_seconds: partial.ml_inference.map(|d| d.as_secs_f64()),
        })
        .collect();

    let summary = summarize(&records, cfg, band_radius);
    Ok((records, summary))
}

/// Medians over the records; error medians exclude zero-exact trials.
pub fn summarize(
    records: &[TrialRecord],
    cfg: &BenchConfig,
    band_radius: Option<usize>,
) -> BenchSummary {
    let excluded = records.iter().filter(|r| r.exact_distance == 0.0).count();
    let mut summaries = Vec::new();
    for variant in &cfg.variants {
        let pick = |r: &TrialRecord| -> Option<VariantOutcome> {
            match variant {
                Variant::Full => r.full.clone(),
                Variant::Band => r.band.clone(),
                Variant::Ml => r.ml.clone(),
            }
        };
        let mut errors: Vec<f64> = records
            .iter()
            .filter(|r| r.exact_distance > 0.0)
            .filter_map(|r| pick(r).map(|o| o.error_pct))
            .filter(|e| e.is_finite())
            .collect();
        let mut fills: Vec<f64> = records
            .iter()
            .filter_map(|r| pick(r).map(|o| o.fill_seconds))
            .collect();
        let mut cells: Vec<f64> = records
            .iter()
            .filter_map(|r| pick(r).map(|o| o.cells as f64))
            .collect();
        summaries.push(VariantSummary {
            variant: variant.name().to_owned(),
            median_error_pct: median(&mut errors),
            median_fill_seconds: median(&mut fills),
            median_cells: median(&mut cells),
        });
    }
    let mut inference: Vec<f64> = records
        .iter()
        .filter_map(|r| r.ml_inference_seconds)
        .collect();
    let median_inference = if inference.is_empty() {
        None
    } else {
        Some(median(&mut inference))
    };
    BenchSummary {
        trial_count: records.len(),
        excluded_error_trials: excluded,
        seed: cfg.seed,
        threads: cfg.threads,
        corpus: cfg.corpus_path.clone(),
        model: cfg.model_path.clone(),
        variants: cfg.variants.iter().map(|v| v.name().to_owned()).collect(),
        band_radius,
        median_ml_inference_seconds: median_inference,
        summaries,
    }
}

/// Trial records as CSV, ordered by trial index.
pub fn records_to_csv(records: &[TrialRecord], cfg: &BenchConfig) -> String {
    let mut out = String::from("trial,a_id,b_id,exact_distance");
    for v in &cfg.variants {
        let name = v.name();
        let _ = write!(
            out,
            ",{name}_distance,{name}_error_pct,{name}_fill_s,{name}_cells"
        );
    }
    if cfg.variants.contains(&Variant::Ml) {
        out.push_str(",ml_infer_s");
    }
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{}",
            r.trial, r.a_id, r.b_id, r.exact_distance
        );
        for v in &cfg.variants {
            let outcome = match v {
                Variant::Full => r.full.as_ref(),
                Variant::Band => r.band.as_ref(),
                Variant::Ml => r.ml.as_ref(),
            };
            let o = outcome.expect("selected variants are recorded for every trial");
            let _ = write!(
                out,
                ",{},{},{},{}",
                o.distance, o.error_pct, o.fill_seconds, o.cells
            );
        }
        if cfg.variants.contains(&Variant::Ml) {
            let _ = write!(out, ",{}", r.ml_inference_seconds.expect("ml recorded"));
        }
        out.push('\n');
    }
    out
}

/// Human-readable table mirroring the summary.
pub fn render_table(summary: &BenchSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} trials (seed {}, {} threads){}",
        summary.trial_count,
        summary.seed,
        summary.threads,
        summary
            .band_radius
            .map_or_else(String::new, |r| format!(", band radius {r}")),
    );
    let _ = writeln!(
        out,
        "{:<8} {:>16} {:>16} {:>14}",
        "variant", "median error %", "median fill s", "median cells"
    );
    for s in &summary.summaries {
        let _ = writeln!(
            out,
            "{:<8} {:>16.3} {:>16.6} {:>14.0}",
            s.variant, s.median_error_pct, s.median_fill_seconds, s.median_cells
        );
    }
    if let Some(inference) = summary.median_ml_inference_seconds {
        let _ = writeln!(out, "median ml inference: {inference:.6} s");
    }
    if summary.excluded_error_trials > 0 {
        let _ = writeln!(
            out,
            "error medians exclude {} zero-distance trial(s)",
            summary.excluded_error_trials
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mldtw_core::gen_synth;

    fn config(trials: usize, variants: Vec<Variant>) -> BenchConfig {
        BenchConfig {
            trials,
            variants,
            seed: 9,
            radius: Some(3),
            threads: 2,
            corpus_path: "test".into(),
            model_path: None,
        }
    }

    #[test]
    fn sampling_is_deterministic_and_without_replacement() {
        let a = sample_pairs(30, 100, 7);
        let b = sample_pairs(30, 100, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        let unique: HashSet<_> = a.iter().collect();
        assert_eq!(unique.len(), 100);
        assert!(a.iter().all(|&(i, j)| i != j && i < 30 && j < 30));
        // Requesting more than exist returns all ordered pairs.
        assert_eq!(sample_pairs(5, 1000, 1).len(), 20);
    }

    #[test]
    fn summary_medians_match_recomputation_from_records() {
        let corpus = gen_synth(10, 64, 0.075, 5).unwrap();
        let cfg = config(20, vec![Variant::Full, Variant::Band]);
        let (records, summary) = run_bench(&corpus, None, &cfg).unwrap();
        assert_eq!(records.len(), 20);
        let mut band_errors: Vec<f64> = records
            .iter()
            .filter(|r| r.exact_distance > 0.0)
            .map(|r| r.band.as_ref().unwrap().error_pct)
            .collect();
        let expect = median(&mut band_errors);
        let got = summary
            .summaries
            .iter()
            .find(|s| s.variant == "band")
            .unwrap()
            .median_error_pct;
        assert_eq!(got, expect);
        // Full variant reports zero error on every trial.
        assert!(records
            .iter()
            .all(|r| r.full.as_ref().unwrap().error_pct == 0.0));
        // Band is admissible on every trial.
        assert!(records
            .iter()
            .all(|r| r.band.as_ref().unwrap().distance >= r.exact_distance - 1e-9));
    }

    #[test]
    fn deterministic_fields_reproduce_across_runs() {
        let corpus = gen_synth(8, 64, 0.075, 6).unwrap();
        let cfg = config(10, vec![Variant::Full, Variant::Band]);
        let (r1, _) = run_bench(&corpus, None, &cfg).unwrap();
        let (r2, _) = run_bench(&corpus, None, &cfg).unwrap();
        for (a, b) in r1.iter().zip(&r2) {
            assert_eq!(a.a_id, b.a_id);
            assert_eq!(a.exact_distance, b.exact_distance);
            assert_eq!(
                a.band.as_ref().unwrap().distance,
                b.band.as_ref().unwrap().distance
            );
            assert_eq!(
                a.band.as_ref().unwrap().cells,
                b.band.as_ref().unwrap().cells
            );
        }
    }

    #[test]
    fn csv_has_one_row_per_trial_and_variant_columns() {
        let corpus = gen_synth(6, 64, 0.075, 8).unwrap();
        let cfg = config(5, vec![Variant::Full, Variant::Band]);
        let (records, _) = run_bench(&corpus, None, &cfg).unwrap();
        let csv = records_to_csv(&records, &cfg);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("trial,a_id,b_id,exact_distance,full_distance"));
        assert!(lines[0].contains("band_cells"));
    }

    #[test]
    fn zero_trials_rejected() {
        let corpus = gen_synth(4, 64, 0.0, 2).unwrap();
        let cfg = config(0, vec![Variant::Full]);
        assert!(matches!(
            run_bench(&corpus, None, &cfg),
            Err(Error::InvalidParameter { name: "trials", .. })
        ));
    }
}
