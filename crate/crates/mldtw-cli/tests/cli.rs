//! End-to-end command tests against the compiled binary: exit codes,
//! determinism, file formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mldtw"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mldtw")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mldtw-cli-test-{name}"));
    std::fs::remove_dir_all(&dir).ok();
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn gen_corpus(dir: &Path, count: usize, length: usize, seed: u64) -> PathBuf {
    let out = dir.join(format!("corpus-{count}-{length}-{seed}.csv"));
    let output = run(&[
        "gen-synth",
        "--count",
        &count.to_string(),
        "--length",
        &length.to_string(),
        "--noise",
        "0.075",
        "--seed",
        &seed.to_string(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "gen-synth failed: {output:?}");
    out
}

fn label_corpus(dir: &Path, corpus: &Path, prefix: usize) -> PathBuf {
    let out = dir.join("rows.csv");
    let output = run(&[
        "label",
        "--in",
        corpus.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--prefix",
        &prefix.to_string(),
    ]);
    assert!(output.status.success(), "label failed: {output:?}");
    out
}

fn train_model(dir: &Path, rows: &Path, prefix: usize, seed: u64) -> PathBuf {
    let out = dir.join(format!("model-{seed}.mldtw"));
    let output = run(&[
        "train",
        "--in",
        rows.to_str().unwrap(),
        "--out-model",
        out.to_str().unwrap(),
        "--hidden",
        "8",
        "--epochs",
        "5",
        "--prefix",
        &prefix.to_string(),
        "--seed",
        &seed.to_string(),
    ]);
    assert!(output.status.success(), "train failed: {output:?}");
    out
}

#[test]
fn gen_synth_is_byte_identical_for_a_seed() {
    let dir = tmp_dir("gen-determinism");
    let a = gen_corpus(&dir, 20, 64, 7);
    let b_path = dir.join("again.csv");
    let output = run(&[
        "gen-synth",
        "--count",
        "20",
        "--length",
        "64",
        "--noise",
        "0.075",
        "--seed",
        "7",
        "--out",
        b_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b_path).unwrap());
    // 20 blocks = 19 separating blank lines.
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.split("\n\n").count(), 20);
}

#[test]
fn gen_synth_rejects_negative_noise_with_exit_2() {
    let dir = tmp_dir("gen-noise");
    let out = dir.join("x.csv");
    let output = run(&[
        "gen-synth",
        "--count",
        "5",
        "--length",
        "64",
        "--noise",
        "-1",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--noise"), "stderr: {stderr}");
    assert!(!out.exists());
}

#[test]
fn gen_synth_rejects_zero_count_with_exit_2() {
    let dir = tmp_dir("gen-count");
    let output = run(&[
        "gen-synth",
        "--count",
        "0",
        "--length",
        "64",
        "--noise",
        "0.1",
        "--seed",
        "1",
        "--out",
        dir.join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_arguments_exit_2() {
    let output = run(&["no-such-command"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["gen-synth", "--bogus-flag", "1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn missing_input_file_exits_1() {
    let dir = tmp_dir("label-missing");
    let output = run(&[
        "label",
        "--in",
        dir.join("nope.csv").to_str().unwrap(),
        "--out",
        dir.join("rows.csv").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn label_produces_ordered_pair_rows_and_is_deterministic() {
    let dir = tmp_dir("label");
    let corpus = gen_corpus(&dir, 3, 64, 3);
    let rows = label_corpus(&dir, &corpus, 10);
    let text = std::fs::read_to_string(&rows).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 6, "3 series give 6 ordered pairs");
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(header[0], "f0");
    assert_eq!(header[header.len() - 10], "wp0_row");
    assert_eq!(header[header.len() - 1], "wp4_col");
    assert_eq!(header.len(), 20 + 10, "prefix 10 + 10 label columns");

    // Relabeling writes the identical file.
    let again = dir.join("rows2.csv");
    let output = run(&[
        "label",
        "--in",
        corpus.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
        "--prefix",
        "10",
    ]);
    assert!(output.status.success());
    assert_eq!(
        std::fs::read(&rows).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn train_writes_loadable_model_and_history() {
    let dir = tmp_dir("train");
    let corpus = gen_corpus(&dir, 6, 64, 11);
    let rows = label_corpus(&dir, &corpus, 10);
    let model = train_model(&dir, &rows, 10, 1);
    // The model file round-trips through the library loader.
    let set = mldtw_core::WaypointModelSet::load(&model).unwrap();
    assert_eq!(set.config.prefix_a, 10);
    let history = model.with_file_name("model-1.mldtw.history.csv");
    let text = std::fs::read_to_string(history).unwrap();
    assert!(text.starts_with("waypoint,epoch,train_loss,train_accuracy,val_loss,val_accuracy"));
    assert!(text.lines().count() > 5);
}

#[test]
fn train_is_bit_deterministic_for_a_seed() {
    let dir = tmp_dir("train-determinism");
    let corpus = gen_corpus(&dir, 6, 64, 13);
    let rows = label_corpus(&dir, &corpus, 10);
    let m1 = train_model(&dir, &rows, 10, 21);
    let m2_path = dir.join("model-b.mldtw");
    let output = run(&[
        "train",
        "--in",
        rows.to_str().unwrap(),
        "--out-model",
        m2_path.to_str().unwrap(),
        "--hidden",
        "8",
        "--epochs",
        "5",
        "--prefix",
        "10",
        "--seed",
        "21",
    ]);
    assert!(output.status.success());
    assert_eq!(
        std::fs::read(&m1).unwrap(),
        std::fs::read(&m2_path).unwrap()
    );
}

#[test]
fn train_rejects_zero_hidden_with_exit_2() {
    let dir = tmp_dir("train-hidden");
    let corpus = gen_corpus(&dir, 3, 64, 2);
    let rows = label_corpus(&dir, &corpus, 10);
    let output = run(&[
        "train",
        "--in",
        rows.to_str().unwrap(),
        "--out-model",
        dir.join("m.mldtw").to_str().unwrap(),
        "--hidden",
        "0",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn compare_identical_series_has_zero_distance_for_every_variant() {
    let dir = tmp_dir("compare-identical");
    let corpus = gen_corpus(&dir, 8, 64, 17);
    let rows = label_corpus(&dir, &corpus, 10);
    let model = train_model(&dir, &rows, 10, 3);
    for extra in [
        vec!["--variant", "full"],
        vec!["--variant", "band", "--radius", "2"],
    ] {
        let mut args = vec![
            "compare",
            "--a",
            corpus.to_str().unwrap(),
            "--b",
            corpus.to_str().unwrap(),
            "--a-index",
            "2",
            "--b-index",
            "2",
        ];
        args.extend(extra.iter());
        let output = run(&args);
        assert!(output.status.success(), "{output:?}");
        let stdout = String::from_utf8_lossy(&output.stdout);
        assert!(stdout.contains("distance: 0.000000"), "stdout: {stdout}");
        assert!(stdout.contains("error vs full: 0.000%"), "stdout: {stdout}");
    }
    // The learned variant needs no exactness from a toy model, but the
    // command must run and report every field.
    let output = run(&[
        "compare",
        "--a",
        corpus.to_str().unwrap(),
        "--b",
        corpus.to_str().unwrap(),
        "--a-index",
        "2",
        "--b-index",
        "2",
        "--variant",
        "ml",
        "--model",
        model.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    for field in [
        "variant: ml",
        "distance:",
        "error vs full:",
        "fill time:",
        "cells computed:",
        "ml inference:",
    ] {
        assert!(stdout.contains(field), "missing {field:?} in {stdout}");
    }
}

#[test]
fn compare_ml_without_model_exits_2() {
    let dir = tmp_dir("compare-no-model");
    let corpus = gen_corpus(&dir, 3, 64, 19);
    let output = run(&[
        "compare",
        "--a",
        corpus.to_str().unwrap(),
        "--b",
        corpus.to_str().unwrap(),
        "--variant",
        "ml",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("--model"));
}

#[test]
fn compare_heatmap_has_matrix_dimensions() {
    let dir = tmp_dir("compare-heatmap");
    let corpus = gen_corpus(&dir, 3, 48, 23);
    let pgm = dir.join("full.pgm");
    let output = run(&[
        "compare",
        "--a",
        corpus.to_str().unwrap(),
        "--b",
        corpus.to_str().unwrap(),
        "--b-index",
        "1",
        "--variant",
        "full",
        "--heatmap",
        pgm.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let bytes = std::fs::read(&pgm).unwrap();
    let header = b"P5\n49 49\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 49 * 49);
}

#[test]
fn bench_writes_consistent_csv_and_json() {
    let dir = tmp_dir("bench");
    let corpus = gen_corpus(&dir, 10, 64, 29);
    let json = dir.join("summary.json");
    let csv = dir.join("trials.csv");
    let output = run(&[
        "bench",
        "--corpus",
        corpus.to_str().unwrap(),
        "--trials",
        "12",
        "--variants",
        "full,band",
        "--radius",
        "3",
        "--seed",
        "5",
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("variant"), "table missing: {stdout}");

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(summary["trial_count"], 12);
    assert_eq!(summary["band_radius"], 3);

    // Median band error recomputed from the trial CSV matches the summary.
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let err_col = header.iter().position(|&h| h == "band_error_pct").unwrap();
    let exact_col = header.iter().position(|&h| h == "exact_distance").unwrap();
    let mut errors: Vec<f64> = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (
                cells[exact_col].parse::<f64>().unwrap(),
                cells[err_col].parse::<f64>().unwrap(),
            )
        })
        .filter(|&(exact, _)| exact > 0.0)
        .map(|(_, e)| e)
        .collect();
    errors.sort_by(f64::total_cmp);
    let n = errors.len();
    let expect = if n % 2 == 1 {
        errors[n / 2]
    } else {
        0.5 * (errors[n / 2 - 1] + errors[n / 2])
    };
    let got = summary["summaries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["variant"] == "band")
        .unwrap()["median_error_pct"]
        .as_f64()
        .unwrap();
    assert!((got - expect).abs() < 1e-12);
}

#[test]
fn matrix_block_feature_flow_works_through_the_cli() {
    let dir = tmp_dir("matrix-block");
    let corpus = gen_corpus(&dir, 5, 64, 41);
    let rows = dir.join("rows.csv");
    let output = run(&[
        "label",
        "--in",
        corpus.to_str().unwrap(),
        "--out",
        rows.to_str().unwrap(),
        "--prefix",
        "8",
        "--features",
        "matrix-block",
    ]);
    assert!(output.status.success(), "{output:?}");
    let header = std::fs::read_to_string(&rows).unwrap();
    let cols = header.lines().next().unwrap().split(',').count();
    assert_eq!(cols, 8 * 8 + 10, "block features plus label columns");

    let model = dir.join("block.mldtw");
    let output = run(&[
        "train",
        "--in",
        rows.to_str().unwrap(),
        "--out-model",
        model.to_str().unwrap(),
        "--hidden",
        "8",
        "--epochs",
        "4",
        "--prefix",
        "8",
        "--features",
        "matrix-block",
    ]);
    assert!(output.status.success(), "{output:?}");

    // A prefix that does not match the feature count is a usage error.
    let output = run(&[
        "train",
        "--in",
        rows.to_str().unwrap(),
        "--out-model",
        dir.join("bad.mldtw").to_str().unwrap(),
        "--prefix",
        "9",
        "--features",
        "matrix-block",
    ]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&[
        "compare",
        "--a",
        corpus.to_str().unwrap(),
        "--b",
        corpus.to_str().unwrap(),
        "--b-index",
        "1",
        "--variant",
        "ml",
        "--model",
        model.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
}

#[test]
fn window_cuts_recordings_into_fixed_length_series() {
    let dir = tmp_dir("window");
    // One long xyz recording: 10 samples, magnitude 5 each.
    let raw = dir.join("walk.csv");
    let mut text = String::from("time,x,y,z\n");
    for t in 0..10 {
        text.push_str(&format!("{t},3,4,0\n"));
    }
    std::fs::write(&raw, text).unwrap();
    let out = dir.join("windows.csv");
    let output = run(&[
        "window",
        "--in",
        raw.to_str().unwrap(),
        "--schema",
        "xyz-magnitude",
        "--len",
        "4",
        "--stride",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    // Windows start at 0, 2, 4, 6 — four windows of 4 samples.
    let text = std::fs::read_to_string(&out).unwrap();
    let blocks: Vec<&str> = text.trim_end().split("\n\n").collect();
    assert_eq!(blocks.len(), 4);
    for block in blocks {
        assert_eq!(block.lines().count(), 4);
        for line in block.lines() {
            assert_eq!(line, "5");
        }
    }
    // A window longer than the recording is a runtime failure.
    let output = run(&[
        "window",
        "--in",
        raw.to_str().unwrap(),
        "--schema",
        "xyz-magnitude",
        "--len",
        "64",
        "--out",
        dir.join("none.csv").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn bench_zero_trials_exits_2() {
    let dir = tmp_dir("bench-zero");
    let corpus = gen_corpus(&dir, 4, 64, 31);
    let output = run(&[
        "bench",
        "--corpus",
        corpus.to_str().unwrap(),
        "--trials",
        "0",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bench_respects_thread_env_override() {
    let dir = tmp_dir("bench-threads");
    let corpus = gen_corpus(&dir, 6, 64, 37);
    let json = dir.join("s.json");
    let output = bin()
        .args([
            "bench",
            "--corpus",
            corpus.to_str().unwrap(),
            "--trials",
            "4",
            "--variants",
            "full",
            "--threads",
            "2",
            "--json",
            json.to_str().unwrap(),
            "--csv",
            dir.join("t.csv").to_str().unwrap(),
        ])
        .env("MLDTW_THREADS", "1")
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(summary["threads"], 1, "env must override the flag");
}
