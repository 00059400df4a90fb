//! Model serialization.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic "MLDTWNN1"
//! feature_dim: u32
//! scaler means: feature_dim x f64
//! scaler stds:  feature_dim x f64
//! layer_count: u32
//! per layer:
//!     rows: u32            (input width)
//!     cols: u32            (output width)
//!     activation: u8       (0 = relu, 1 = softmax)
//!     weights: rows * cols x f64, row-major
//!     biases: cols x f64
//! label_count: u32
//! per label: row i32, col i32
//! crc32 of all prior bytes: u32
//! ```
//!
//! Loading either returns a complete model or an error; a file that fails
//! any check produces no partial state.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::region::Waypoint;

use super::{Activation, DenseNet, Layer, Scaler};

const MAGIC: &[u8; 8] = b"MLDTWNN1";

/// Hard cap on any declared dimension, so a corrupted header cannot demand
/// an absurd allocation before the length check runs.
const MAX_DIM: u32 = 16_000_000;

/// Serialize one classifier (scaler + layers + label map) to bytes.
#[must_use]
pub fn model_to_bytes(net: &DenseNet, scaler: &Scaler) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(scaler.dim() as u32).to_le_bytes());
    for &m in scaler.means() {
        buf.extend_from_slice(&m.to_le_bytes());
    }
    for &s in scaler.stds() {
        buf.extend_from_slice(&s.to_le_bytes());
    }
    buf.extend_from_slice(&(net.layers().len() as u32).to_le_bytes());
    for layer in net.layers() {
        buf.extend_from_slice(&(layer.in_dim as u32).to_le_bytes());
        buf.extend_from_slice(&(layer.out_dim as u32).to_le_bytes());
        buf.push(match layer.activation {
            Activation::Relu => 0,
            Activation::Softmax => 1,
        });
        for &w in &layer.weights {
            buf.extend_from_slice(&w.to_le_bytes());
        }
        for &b in &layer.biases {
            buf.extend_from_slice(&b.to_le_bytes());
        }
    }
    buf.extend_from_slice(&(net.label_map().len() as u32).to_le_bytes());
    for wp in net.label_map() {
        buf.extend_from_slice(&(wp.row as i32).to_le_bytes());
        buf.extend_from_slice(&(wp.col as i32).to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

/// Parse a classifier from bytes produced by [`model_to_bytes`].
pub fn model_from_bytes(bytes: &[u8]) -> Result<(DenseNet, Scaler)> {
    if bytes.len() < MAGIC.len() + 4 {
        return Err(Error::Truncated {
            expected: MAGIC.len() + 4 - bytes.len(),
        });
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::BadMagic);
    }
    let (payload, crc_bytes) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(crc_bytes.try_into().expect("4 bytes"));
    if crc32fast::hash(payload) != stored {
        return Err(Error::ChecksumMismatch);
    }

    let mut r = Reader::new(&payload[MAGIC.len()..]);
    let feature_dim = r.dim("feature_dim")?;
    let means = r.f64_array(feature_dim)?;
    let stds = r.f64_array(feature_dim)?;
    if !stds.iter().all(|&s| s.is_finite() && s > 0.0) {
        return Err(Error::InconsistentDims {
            reason: "scaler stds must be positive".into(),
        });
    }
    let layer_count = r.dim("layer_count")?;
    if layer_count == 0 {
        return Err(Error::InconsistentDims {
            reason: "layer_count is zero".into(),
        });
    }
    let mut layers = Vec::with_capacity(layer_count);
    let mut expected_in = feature_dim;
    for l in 0..layer_count {
        let rows = r.dim("rows")?;
        let cols = r.dim("cols")?;
        if rows != expected_in {
            return Err(Error::InconsistentDims {
                reason: format!("layer {l}: input width {rows}, expected {expected_in}"),
            });
        }
        let activation = match r.u8()? {
            0 => Activation::Relu,
            1 => Activation::Softmax,
            other => {
                return Err(Error::InconsistentDims {
                    reason: format!("layer {l}: unknown activation byte {other}"),
                })
            }
        };
        let is_last = l == layer_count - 1;
        if is_last != (activation == Activation::Softmax) {
            return Err(Error::InconsistentDims {
                reason: format!("layer {l}: activation does not match position"),
            });
        }
        let weights = r.f64_array(rows.checked_mul(cols).ok_or(Error::InconsistentDims {
            reason: "weight matrix overflows".into(),
        })?)?;
        let biases = r.f64_array(cols)?;
        layers.push(Layer {
            in_dim: rows,
            out_dim: cols,
            weights,
            biases,
            activation,
        });
        expected_in = cols;
    }
    let label_count = r.dim("label_count")?;
    if label_count != expected_in {
        return Err(Error::InconsistentDims {
            reason: format!("label_count {label_count} does not match output width {expected_in}"),
        });
    }
    let mut label_map = Vec::with_capacity(label_count);
    for _ in 0..label_count {
        let row = r.i32()?;
        let col = r.i32()?;
        if row < 0 || col < 0 {
            return Err(Error::InconsistentDims {
                reason: format!("negative label coordinate ({row}, {col})"),
            });
        }
        label_map.push(Waypoint {
            row: row as usize,
            col: col as usize,
        });
    }
    if r.remaining() != 0 {
        return Err(Error::InconsistentDims {
            reason: format!("{} trailing bytes after labels", r.remaining()),
        });
    }
    Ok((
        DenseNet::from_parts(layers, label_map),
        Scaler::from_parts(means, stds),
    ))
}

/// Write one classifier to a file.
pub fn save_model(path: impl AsRef<Path>, net: &DenseNet, scaler: &Scaler) -> Result<()> {
    Ok(fs::write(path, model_to_bytes(net, scaler))?)
}

/// Read one classifier from a file.
pub fn load_model(path: impl AsRef<Path>) -> Result<(DenseNet, Scaler)> {
    model_from_bytes(&fs::read(path)?)
}

/// Bounds-checked little-endian cursor over a byte buffer.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    pub(crate) fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(Error::Truncated {
                expected: self.pos + n - self.buf.len(),
            });
        }
        let slice = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(
            self.take(8)?.try_into().expect("8 bytes"),
        ))
    }

    fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn dim(&mut self, what: &str) -> Result<usize> {
        let v = self.u32()?;
        if v > MAX_DIM {
            return Err(Error::InconsistentDims {
                reason: format!("{what} {v} exceeds the format limit"),
            });
        }
        Ok(v as usize)
    }

    fn f64_array(&mut self, count: usize) -> Result<Vec<f64>> {
        let bytes = self.take(count * 8)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }
}
