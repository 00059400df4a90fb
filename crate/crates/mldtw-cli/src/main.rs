//! `mldtw` — generate data, label pairs with exact warp paths, train the
//! waypoint models, compare single pairs, and run benchmark suites.
//!
//! Exit codes: 0 success, 1 runtime/I-O failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mldtw_cli::heatmap_export;
use mldtw_cli::{records_to_csv, render_table, run_bench, BenchConfig, Variant};
use mldtw_core::{
    banded_dtw, build_training_set, build_training_set_sampled, constrained_cost_matrix,
    full_cost_matrix, full_dtw, gen_synth, load_series_csv, ml_dtw, percent_error,
    read_training_csv, region_for_waypoints, sakoe_chiba_region, train_waypoint_models,
    write_corpus_csv, write_training_csv, Corpus, CsvSchema, FeatureMode, PipelineConfig,
    TimeSeries, TrainConfig, WaypointModelSet,
};

#[derive(Parser)]
#[command(
    name = "mldtw",
    version,
    about = "Time-series alignment: exact, banded, and learned-region dynamic time warping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemaArg {
    /// One value per row.
    Univariate,
    /// x,y per row (dim-2 series).
    Xy,
    /// time,x,y,z per row, collapsed to acceleration magnitude.
    XyzMagnitude,
}

impl From<SchemaArg> for CsvSchema {
    fn from(s: SchemaArg) -> Self {
        match s {
            SchemaArg::Univariate => CsvSchema::Univariate,
            SchemaArg::Xy => CsvSchema::Xy,
            SchemaArg::XyzMagnitude => CsvSchema::XyzMagnitude,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FeaturesArg {
    /// Leading samples of both series (the default).
    Raw,
    /// Top-left cost-matrix block of the pair.
    MatrixBlock,
}

impl From<FeaturesArg> for FeatureMode {
    fn from(f: FeaturesArg) -> Self {
        match f {
            FeaturesArg::Raw => FeatureMode::RawPrefix,
            FeaturesArg::MatrixBlock => FeatureMode::MatrixBlock,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Full,
    Band,
    Ml,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Band => Variant::Band,
            VariantArg::Ml => Variant::Ml,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a corpus of noisy phase-shifted sine waves.
    GenSynth {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 200)]
        length: usize,
        /// Uniform noise bound as a fraction of the unit signal magnitude.
        #[arg(long, default_value_t = 0.075, allow_negative_numbers = true)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Label ordered pairs of a corpus with exact-path waypoints.
    Label {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Samples taken from the head of each series as features.
        #[arg(long, default_value_t = 30)]
        prefix: usize,
        /// Waypoint quantization base.
        #[arg(long, default_value_t = 5)]
        quant: usize,
        #[arg(long, value_enum, default_value_t = SchemaArg::Univariate)]
        schema: SchemaArg,
        #[arg(long, value_enum, default_value_t = FeaturesArg::Raw)]
        features: FeaturesArg,
        /// Label at most this many sampled ordered pairs.
        #[arg(long)]
        max_pairs: Option<usize>,
        /// Seed for pair sampling (only used with --max-pairs).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Train the five waypoint classifiers from a labeled CSV.
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_model: PathBuf,
        #[arg(long, default_value_t = 300)]
        hidden: usize,
        #[arg(long, default_value_t = 200)]
        epochs: usize,
        #[arg(long, default_value_t = 10)]
        patience: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        prefix: usize,
        #[arg(long, default_value_t = 5)]
        quant: usize,
        #[arg(long, value_enum, default_value_t = FeaturesArg::Raw)]
        features: FeaturesArg,
        #[arg(long, default_value_t = 32)]
        batch_size: usize,
        #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
        learning_rate: f64,
        /// Tag stored in the model file (defaults to the input file stem).
        #[arg(long)]
        dataset_id: Option<String>,
    },
    /// Align one pair of series and report distance, error, and timing.
    Compare {
        /// Corpus file providing the first series.
        #[arg(long)]
        a: PathBuf,
        /// Corpus file providing the second series.
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Band half-width (required for the band variant).
        #[arg(long)]
        radius: Option<usize>,
        /// Trained model set (required for the ml variant).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Write the variant's cost matrix as a PGM heatmap.
        #[arg(long)]
        heatmap: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SchemaArg::Univariate)]
        schema: SchemaArg,
        /// Index of the series within --a (default first).
        #[arg(long, default_value_t = 0)]
        a_index: usize,
        /// Index of the series within --b (default first).
        #[arg(long, default_value_t = 0)]
        b_index: usize,
    },
    /// Cut long recordings into fixed-length windows for pairwise comparison.
    Window {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Window length in samples.
        #[arg(long)]
        len: usize,
        /// Offset between consecutive window starts (default: the length,
        /// i.e. non-overlapping windows).
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long, value_enum, default_value_t = SchemaArg::Univariate)]
        schema: SchemaArg,
    },
    /// Benchmark variants over sampled pairs of a corpus.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        trials: usize,
        /// Comma-separated subset of full,band,ml.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [VariantArg::Full, VariantArg::Band, VariantArg::Ml])]
        variants: Vec<VariantArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Summary JSON path.
        #[arg(long, default_value = "bench_summary.json")]
        json: PathBuf,
        /// Trial-record CSV path.
        #[arg(long, default_value = "bench_trials.csv")]
        csv: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        /// Fixed band radius (default: budget-fair against the ml region).
        #[arg(long)]
        radius: Option<usize>,
        /// Worker threads (default: logical cores; MLDTW_THREADS overrides).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = SchemaArg::Univariate)]
        schema: SchemaArg,
    },
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<mldtw_core::Error> for CliError {
    fn from(e: mldtw_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::GenSynth {
            count,
            length,
            noise,
            seed,
            out,
        } => cmd_gen_synth(count, length, noise, seed, &out),
        Command::Label {
            input,
            out,
            prefix,
            quant,
            schema,
            features,
            max_pairs,
            seed,
        } => cmd_label(
            &input, &out, prefix, quant, schema, features, max_pairs, seed,
        ),
        Command::Train {
            input,
            out_model,
            hidden,
            epochs,
            patience,
            seed,
            prefix,
            quant,
            features,
            batch_size,
            learning_rate,
            dataset_id,
        } => cmd_train(
            &input,
            &out_model,
            hidden,
            epochs,
            patience,
            seed,
            prefix,
            quant,
            features,
            batch_size,
            learning_rate,
            dataset_id,
        ),
        Command::Compare {
            a,
            b,
            variant,
            radius,
            model,
            heatmap,
            schema,
            a_index,
            b_index,
        } => cmd_compare(
            &a, &b, variant, radius, model, heatmap, schema, a_index, b_index,
        ),
        Command::Window {
            input,
            out,
            len,
            stride,
            schema,
        } => cmd_window(&input, &out, len, stride, schema),
        Command::Bench {
            corpus,
            trials,
            variants,
            seed,
            json,
            csv,
            model,
            radius,
            threads,
            schema,
        } => cmd_bench(
            &corpus, trials, &variants, seed, &json, &csv, model, radius, threads, schema,
        ),
    }
}

fn cmd_window(
    input: &Path,
    out: &Path,
    len: usize,
    stride: Option<usize>,
    schema: SchemaArg,
) -> Result<(), CliError> {
    if len < 2 {
        return Err(usage("--len must be at least 2"));
    }
    let stride = stride.unwrap_or(len);
    if stride < 1 {
        return Err(usage("--stride must be at least 1"));
    }
    let corpus = load_series_csv(input, schema.into())?;
    let dim = corpus.dim;
    let mut windows = Vec::new();
    for (s, series) in corpus.series.iter().enumerate() {
        let mut start = 0;
        let mut w = 0;
        while start + len <= series.len() {
            let values = series.values()[start * dim..(start + len) * dim].to_vec();
            windows.push(
                TimeSeries::new(values, dim)
                    .expect("windows inherit validity from the source series")
                    .with_id(format!("{}#w{w}", series.id().unwrap_or(&format!("s{s}")))),
            );
            start += stride;
            w += 1;
        }
    }
    if windows.is_empty() {
        return Err(CliError::Runtime(format!(
            "no series in {} is at least {len} samples long",
            input.display()
        )));
    }
    let count = windows.len();
    let windowed = Corpus {
        series: windows,
        dim,
        source: corpus.source,
        seed: corpus.seed,
    };
    write_corpus_csv(out, &windowed)?;
    println!(
        "cut {} series into {count} windows of {len} samples (stride {stride}) -> {}",
        corpus.series.len(),
        out.display()
    );
    Ok(())
}

fn cmd_gen_synth(
    count: usize,
    length: usize,
    noise: f64,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    if count < 1 {
        return Err(usage("--count must be at least 1"));
    }
    if length < 8 {
        return Err(usage("--length must be at least 8"));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(usage("--noise must be finite and non-negative"));
    }
    let corpus = gen_synth(count, length, noise, seed)?;
    write_corpus_csv(out, &corpus)?;
    println!(
        "wrote {} series of length {length} to {}",
        corpus.series.len(),
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_label(
    input: &Path,
    out: &Path,
    prefix: usize,
    quant: usize,
    schema: SchemaArg,
    features: FeaturesArg,
    max_pairs: Option<usize>,
    seed: u64,
) -> Result<(), CliError> {
    if prefix < 1 {
        return Err(usage("--prefix must be at least 1"));
    }
    if quant < 1 {
        return Err(usage("--quant must be at least 1"));
    }
    if max_pairs == Some(0) {
        return Err(usage("--max-pairs must be at least 1"));
    }
    let corpus = load_series_csv(input, schema.into())?;
    let cfg = PipelineConfig {
        prefix_a: prefix,
        prefix_b: prefix,
        quant,
        feature_mode: features.into(),
        dataset_id: file_stem(input),
    };
    let outcome = match max_pairs {
        Some(limit) => build_training_set_sampled(&corpus.series, &cfg, limit, seed)?,
        None => build_training_set(&corpus.series, &cfg)?,
    };
    write_training_csv(out, &outcome.rows)?;
    println!(
        "labeled {} pairs ({} skipped as shorter than the prefix) -> {}",
        outcome.rows.len(),
        outcome.skipped,
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    input: &Path,
    out_model: &Path,
    hidden: usize,
    epochs: usize,
    patience: usize,
    seed: u64,
    prefix: usize,
    quant: usize,
    features: FeaturesArg,
    batch_size: usize,
    learning_rate: f64,
    dataset_id: Option<String>,
) -> Result<(), CliError> {
    if hidden < 1 {
        return Err(usage("--hidden must be at least 1"));
    }
    if epochs < 1 {
        return Err(usage("--epochs must be at least 1"));
    }
    if patience < 1 {
        return Err(usage("--patience must be at least 1"));
    }
    if batch_size < 1 {
        return Err(usage("--batch-size must be at least 1"));
    }
    if !(learning_rate > 0.0 && learning_rate.is_finite()) {
        return Err(usage("--learning-rate must be positive"));
    }
    if prefix < 1 {
        return Err(usage("--prefix must be at least 1"));
    }
    let rows = read_training_csv(input)?;
    let feature_count = rows[0].features.len();
    let mode: FeatureMode = features.into();
    match mode {
        FeatureMode::RawPrefix => {
            if feature_count % (2 * prefix) != 0 {
                return Err(usage(format!(
                    "--prefix {prefix} does not divide the {feature_count} feature columns \
                     (expected a multiple of {})",
                    2 * prefix
                )));
            }
        }
        FeatureMode::MatrixBlock => {
            if feature_count != prefix * prefix {
                return Err(usage(format!(
                    "matrix-block features need {} columns for --prefix {prefix}, found {feature_count}",
                    prefix * prefix
                )));
            }
        }
    }
    let pipeline = PipelineConfig {
        prefix_a: prefix,
        prefix_b: prefix,
        quant,
        feature_mode: mode,
        dataset_id: dataset_id.unwrap_or_else(|| file_stem(input)),
    };
    let mut train_cfg = TrainConfig::with_seed(seed);
    train_cfg.hidden_width = hidden;
    train_cfg.max_epochs = epochs;
    train_cfg.patience = patience;
    train_cfg.batch_size = batch_size;
    train_cfg.learning_rate = learning_rate;

    let (models, histories) = train_waypoint_models(&rows, &pipeline, &train_cfg)?;
    models.save(out_model)?;

    let history_path = history_path_for(out_model);
    let mut history_csv =
        String::from("waypoint,epoch,train_loss,train_accuracy,val_loss,val_accuracy\n");
    for (k, history) in histories.iter().enumerate() {
        for e in &history.epochs {
            use std::fmt::Write as _;
            let _ = writeln!(
                history_csv,
                "{k},{},{},{},{},{}",
                e.epoch, e.train_loss, e.train_accuracy, e.val_loss, e.val_accuracy
            );
        }
    }
    std::fs::write(&history_path, history_csv)?;

    println!(
        "trained 5 waypoint models on {} rows -> {}",
        rows.len(),
        out_model.display()
    );
    for (k, history) in histories.iter().enumerate() {
        let best = &history.epochs[history.best_epoch - 1];
        println!(
            "  wp{k}: best epoch {}/{} val_loss {:.4} val_accuracy {:.3}",
            history.best_epoch,
            history.epochs.len(),
            best.val_loss,
            best.val_accuracy
        );
    }
    println!("history -> {}", history_path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    a_path: &Path,
    b_path: &Path,
    variant: VariantArg,
    radius: Option<usize>,
    model: Option<PathBuf>,
    heatmap: Option<PathBuf>,
    schema: SchemaArg,
    a_index: usize,
    b_index: usize,
) -> Result<(), CliError> {
    let a = pick_series(a_path, schema, a_index)?;
    let b = pick_series(b_path, schema, b_index)?;

    let exact = full_dtw(&a, &b)?;
    let (label, alignment, inference, matrix_for_heatmap) = match variant {
        VariantArg::Full => {
            let matrix = heatmap
                .is_some()
                .then(|| full_cost_matrix(&a, &b))
                .transpose()?;
            ("full", exact.clone(), None, matrix)
        }
        VariantArg::Band => {
            let radius =
                radius.ok_or_else(|| usage("--radius is required for the band variant"))?;
            if radius < 1 {
                return Err(usage("--radius must be at least 1"));
            }
            let alignment = banded_dtw(&a, &b, radius)?;
            let matrix = heatmap
                .is_some()
                .then(|| -> Result<_, mldtw_core::Error> {
                    let region = sakoe_chiba_region(a.len(), b.len(), radius)?;
                    constrained_cost_matrix(&a, &b, &region)
                })
                .transpose()?;
            ("band", alignment, None, matrix)
        }
        VariantArg::Ml => {
            let model_path =
                model.ok_or_else(|| usage("--model is required for the ml variant"))?;
            let models = WaypointModelSet::load(&model_path)?;
            let (alignment, stats) = ml_dtw(&a, &b, &models)?;
            let matrix = heatmap
                .is_some()
                .then(|| -> Result<_, mldtw_core::Error> {
                    let region = region_for_waypoints(
                        &stats.waypoints,
                        &stats.confidences,
                        a.len(),
                        b.len(),
                    )?;
                    constrained_cost_matrix(&a, &b, &region)
                })
                .transpose()?;
            ("ml", alignment, Some(stats.inference_time), matrix)
        }
    };

    println!("variant: {label}");
    println!("distance: {:.6}", alignment.distance);
    println!(
        "error vs full: {:.3}%",
        percent_error(alignment.distance, exact.distance)
    );
    println!("fill time: {:.6} s", alignment.fill_time.as_secs_f64());
    println!("cells computed: {}", alignment.cells_computed);
    if let Some(inference) = inference {
        println!("ml inference: {:.6} s", inference.as_secs_f64());
    }
    if let (Some(out), Some(matrix)) = (heatmap, matrix_for_heatmap) {
        heatmap_export(&matrix, Some(&alignment.path), &out)?;
        println!("heatmap -> {}", out.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    corpus_path: &Path,
    trials: usize,
    variants: &[VariantArg],
    seed: u64,
    json: &Path,
    csv: &Path,
    model: Option<PathBuf>,
    radius: Option<usize>,
    threads: Option<usize>,
    schema: SchemaArg,
) -> Result<(), CliError> {
    if trials < 1 {
        return Err(usage("--trials must be at least 1"));
    }
    if variants.is_empty() {
        return Err(usage("--variants must name at least one of full,band,ml"));
    }
    if let Some(r) = radius {
        if r < 1 {
            return Err(usage("--radius must be at least 1"));
        }
    }
    let wants_ml = variants.iter().any(|v| matches!(v, VariantArg::Ml));
    if wants_ml && model.is_none() {
        return Err(usage(
            "--model is required when the ml variant is benchmarked",
        ));
    }
    let corpus: Corpus = load_series_csv(corpus_path, schema.into())?;
    let models = model.as_ref().map(WaypointModelSet::load).transpose()?;

    let cfg = BenchConfig {
        trials,
        variants: variants.iter().map(|&v| v.into()).collect(),
        seed,
        radius,
        threads: resolve_threads(threads)?,
        corpus_path: corpus_path.display().to_string(),
        model_path: model.map(|p| p.display().to_string()),
    };
    let (records, summary) = run_bench(&corpus, models.as_ref(), &cfg)?;

    std::fs::write(csv, records_to_csv(&records, &cfg))?;
    let mut json_text =
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::Runtime(e.to_string()))?;
    json_text.push('\n');
    std::fs::write(json, json_text)?;

    print!("{}", render_table(&summary));
    println!("trials -> {}", csv.display());
    println!("summary -> {}", json.display());
    Ok(())
}

/// `MLDTW_THREADS` overrides the flag; the flag overrides logical cores.
fn resolve_threads(flag: Option<usize>) -> Result<usize, CliError> {
    if let Ok(raw) = std::env::var("MLDTW_THREADS") {
        let parsed: usize = raw
            .parse()
            .map_err(|_| usage(format!("MLDTW_THREADS={raw} is not a thread count")))?;
        if parsed < 1 {
            return Err(usage("MLDTW_THREADS must be at least 1"));
        }
        return Ok(parsed);
    }
    if let Some(t) = flag {
        if t < 1 {
            return Err(usage("--threads must be at least 1"));
        }
        return Ok(t);
    }
    Ok(std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1))
}

fn pick_series(path: &Path, schema: SchemaArg, index: usize) -> Result<TimeSeries, CliError> {
    let corpus = load_series_csv(path, schema.into())?;
    corpus
        .series
        .into_iter()
        .nth(index)
        .ok_or_else(|| usage(format!("{} has no series at index {index}", path.display())))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn history_path_for(out_model: &Path) -> PathBuf {
    let mut name = out_model.file_name().map_or_else(
        || std::ffi::OsString::from("model"),
        std::ffi::OsStr::to_os_string,
    );
    name.push(".history.csv");
    out_model.with_file_name(name)
}
