//! Grayscale PGM export of cost matrices.

use std::fs;
use std::io;
use std::path::Path;

use mldtw_core::{CostMatrix, WarpPath};

/// Render a cost matrix to 8-bit binary PGM, covering the full
/// `(n + 1) x (m + 1)` grid including the infinite border.
///
/// Finite cells are min-max normalized with dark for small values;
/// infinite (uncomputed) cells are white. If all finite cells share one
/// value the image is uniform mid-gray. An optional warp path is overlaid
/// at intensity 0.
pub fn heatmap_export(
    matrix: &CostMatrix,
    path: Option<&WarpPath>,
    out: impl AsRef<Path>,
) -> io::Result<()> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..rows {
        for j in 0..cols {
            let v = matrix.get(i, j);
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    let span = hi - lo;
    let mut pixels = vec![0u8; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let v = matrix.get(i, j);
            pixels[i * cols + j] = if !v.is_finite() {
                255
            } else if span > 0.0 {
                (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8
            } else {
                128
            };
        }
    }
    if let Some(path) = path {
        for &(i, j) in path.pairs() {
            pixels[i * cols + j] = 0;
        }
    }
    let mut bytes = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    bytes.extend_from_slice(&pixels);
    fs::write(out, bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mldtw_core::{
        constrained_cost_matrix, full_cost_matrix, full_dtw, sakoe_chiba_region, TimeSeries,
    };

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("mldtw-heatmap-test");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn header_and_dimensions_match_the_grid() {
        let a = TimeSeries::univariate(vec![1.0, 2.0, 3.0]).unwrap();
        let b = TimeSeries::univariate(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let m = full_cost_matrix(&a, &b).unwrap();
        let out = tmp("full.pgm");
        heatmap_export(&m, None, &out).unwrap();
        let bytes = std::fs::read(&out).unwrap();
        let header = b"P5\n6 4\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 6 * 4);
    }

    #[test]
    fn banded_matrix_has_white_margins_and_path_is_black() {
        let a = TimeSeries::univariate(vec![0.0, 3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0]).unwrap();
        let region = sakoe_chiba_region(8, 8, 1).unwrap();
        let m = constrained_cost_matrix(&a, &a, &region).unwrap();
        let alignment = full_dtw(&a, &a).unwrap();
        let out = tmp("band.pgm");
        heatmap_export(&m, Some(&alignment.path), &out).unwrap();
        let bytes = std::fs::read(&out).unwrap();
        let header_len = b"P5\n9 9\n255\n".len();
        let px = &bytes[header_len..];
        // Outside the band: white. On the diagonal path: black.
        assert_eq!(px[9 + 8], 255);
        assert_eq!(px[8 * 9 + 1], 255);
        for i in 1..=8 {
            assert_eq!(px[i * 9 + i], 0);
        }
    }

    #[test]
    fn constant_matrix_renders_mid_gray() {
        // An identical-series fill has an all-zero finite interior plus the
        // zero anchor, so min == max and everything finite goes mid-gray.
        let a = TimeSeries::univariate(vec![2.0, 2.0, 2.0]).unwrap();
        let m = full_cost_matrix(&a, &a).unwrap();
        let out = tmp("flat.pgm");
        heatmap_export(&m, None, &out).unwrap();
        let bytes = std::fs::read(&out).unwrap();
        let header_len = b"P5\n4 4\n255\n".len();
        let px = &bytes[header_len..];
        assert_eq!(px[0], 128); // (0, 0) anchor
        assert_eq!(px[4 + 1], 128);
        assert_eq!(px[3 * 4 + 3], 128);
        assert_eq!(px[1], 255); // border stays white
    }
}
