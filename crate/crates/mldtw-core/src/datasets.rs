//! Synthetic corpus generation, CSV ingestion, and signal preprocessing.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Frequency range (cycles per window) for generated sine waves.
///
/// Chosen so pairs warp far off the diagonal (frequencies differ by up to
/// 2x) while a prefix of the signal still pins down frequency and phase —
/// both are needed for waypoint prediction to have signal to learn.
pub const SYNTH_FREQ_RANGE: (f64, f64) = (2.5, 5.0);

/// Where a corpus came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusSource {
    Synth,
    Csv,
}

/// How to interpret rows of an ingested CSV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvSchema {
    /// One value per row.
    Univariate,
    /// `x,y` per row; yields dim-2 series.
    Xy,
    /// `time,x,y,z` per row (header required); each row collapses to the
    /// acceleration magnitude, yielding a univariate series.
    XyzMagnitude,
}

/// A uniform-dimension collection of series.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub series: Vec<TimeSeries>,
    pub dim: usize,
    pub source: CorpusSource,
    pub seed: Option<u64>,
}

/// Generate sine waves of random frequency and phase with bounded uniform
/// noise per sample.
///
/// Each series is `sin(2*pi*f*t/length + phase) + noise` with `f` drawn
/// uniformly from [`SYNTH_FREQ_RANGE`], the phase uniform over a full turn,
/// and noise uniform in `(-noise_frac, +noise_frac)` — so `noise_frac`
/// bounds the perturbation as a fraction of the unit signal magnitude.
/// Deterministic for a fixed seed.
pub fn gen_synth(count: usize, length: usize, noise_frac: f64, seed: u64) -> Result<Corpus> {
    if count < 1 {
        return Err(Error::InvalidParameter {
            name: "count",
            reason: "must be at least 1".into(),
        });
    }
    if length < 8 {
        return Err(Error::InvalidParameter {
            name: "length",
            reason: "must be at least 8".into(),
        });
    }
    if !(noise_frac >= 0.0 && noise_frac.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "noise",
            reason: "must be finite and non-negative".into(),
        });
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let series = (0..count)
        .map(|i| {
            let freq = rng.random_range(SYNTH_FREQ_RANGE.0..SYNTH_FREQ_RANGE.1);
            let phase = rng.random_range(0.0..TAU);
            let values = (0..length)
                .map(|t| {
                    let clean = (TAU * freq * t as f64 / length as f64 + phase).sin();
                    if noise_frac > 0.0 {
                        clean + rng.random_range(-noise_frac..noise_frac)
                    } else {
                        clean
                    }
                })
                .collect();
            TimeSeries::univariate(values)
                .expect("generated series are finite and long enough")
                .with_id(format!("synth-{i}"))
        })
        .collect();
    Ok(Corpus {
        series,
        dim: 1,
        source: CorpusSource::Synth,
        seed: Some(seed),
    })
}

/// Magnitude of a 3-axis acceleration sample.
#[must_use]
pub fn acc_magnitude(ax: f64, ay: f64, az: f64) -> f64 {
    (ax * ax + ay * ay + az * az).sqrt()
}

/// Load a corpus from CSV. Series are separated by blank lines.
///
/// Headers: optional `value` for [`CsvSchema::Univariate`], optional `x,y`
/// for [`CsvSchema::Xy`], required `time,x,y,z` for
/// [`CsvSchema::XyzMagnitude`]. Whitespace around cells is tolerated.
pub fn load_series_csv(path: impl AsRef<Path>, schema: CsvSchema) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let display = path.display().to_string();
    parse_series_csv(&text, schema, &display)
}

fn parse_series_csv(text: &str, schema: CsvSchema, path: &str) -> Result<Corpus> {
    let expected_cols = match schema {
        CsvSchema::Univariate => 1,
        CsvSchema::Xy => 2,
        CsvSchema::XyzMagnitude => 4,
    };
    let dim = match schema {
        CsvSchema::Univariate | CsvSchema::XyzMagnitude => 1,
        CsvSchema::Xy => 2,
    };

    let mut lines = text.lines().enumerate().peekable();

    // Header handling. The xyz schema requires its header; the others accept
    // one and only when it matches exactly.
    let header_for = |s: CsvSchema| match s {
        CsvSchema::Univariate => "value",
        CsvSchema::Xy => "x,y",
        CsvSchema::XyzMagnitude => "time,x,y,z",
    };
    let matches_header = |line: &str, s: CsvSchema| {
        let normalized: Vec<String> = line
            .split(',')
            .map(|c| c.trim().to_ascii_lowercase())
            .collect();
        normalized.join(",") == header_for(s)
    };
    let mut saw_header = false;
    while let Some(&(_, line)) = lines.peek() {
        if line.trim().is_empty() {
            lines.next();
            continue;
        }
        if matches_header(line, schema) {
            lines.next();
            saw_header = true;
        }
        break;
    }
    if matches!(schema, CsvSchema::XyzMagnitude) && !saw_header {
        return Err(Error::MissingHeader {
            path: path.into(),
            expected: header_for(schema).into(),
        });
    }

    let mut series: Vec<TimeSeries> = Vec::new();
    let mut block: Vec<f64> = Vec::new();
    let mut block_index = 0usize;
    let flush = |block: &mut Vec<f64>,
                 block_index: &mut usize,
                 series: &mut Vec<TimeSeries>|
     -> Result<()> {
        if block.is_empty() {
            return Ok(());
        }
        let ts =
            TimeSeries::new(std::mem::take(block), dim)?.with_id(format!("{path}#{block_index}"));
        series.push(ts);
        *block_index += 1;
        Ok(())
    };

    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            flush(&mut block, &mut block_index, &mut series)?;
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != expected_cols {
            return Err(Error::RaggedRow {
                path: path.into(),
                line: line_no,
                expected: expected_cols,
                found: cells.len(),
            });
        }
        let mut values = [0.0f64; 4];
        for (slot, cell) in values.iter_mut().zip(&cells) {
            *slot = cell.parse().map_err(|_| Error::NonNumericCell {
                path: path.into(),
                line: line_no,
                cell: (*cell).to_string(),
            })?;
        }
        match schema {
            CsvSchema::Univariate => block.push(values[0]),
            CsvSchema::Xy => block.extend_from_slice(&values[..2]),
            // time column (values[0]) orders the rows and is otherwise unused
            CsvSchema::XyzMagnitude => {
                block.push(acc_magnitude(values[1], values[2], values[3]));
            }
        }
    }
    flush(&mut block, &mut block_index, &mut series)?;

    if series.is_empty() {
        return Err(Error::EmptyFile { path: path.into() });
    }
    Ok(Corpus {
        series,
        dim,
        source: CorpusSource::Csv,
        seed: None,
    })
}

/// Write a corpus in the toolkit's own schema: one sample per row, `dim`
/// comma-separated values, one blank line between series. Values round-trip
/// exactly through [`load_series_csv`].
pub fn write_corpus_csv(path: impl AsRef<Path>, corpus: &Corpus) -> Result<()> {
    let mut out = fs::File::create(path)?;
    let mut text = String::new();
    for (k, ts) in corpus.series.iter().enumerate() {
        if k > 0 {
            text.push('\n');
        }
        for i in 0..ts.len() {
            let point = ts.point(i);
            for (d, v) in point.iter().enumerate() {
                if d > 0 {
                    text.push(',');
                }
                text.push_str(&format!("{v}"));
            }
            text.push('\n');
        }
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}
