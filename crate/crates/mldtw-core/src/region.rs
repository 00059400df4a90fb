//! Predicted waypoints to search region: center path, confidence widths,
//! per-row intervals.

use crate::band::SearchRegion;
use crate::error::{Error, Result};

/// Width assigned to the first and last rows of the search region.
pub const ENDPOINT_WIDTH: usize = 14;

/// Default quantization base for waypoint coordinates.
pub const DEFAULT_QUANT: usize = 5;

/// A predicted or labeled anchor on the warp path, in 0-based cell
/// coordinates. Predicted waypoints are quantized to multiples of the
/// quantization base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Waypoint {
    pub row: usize,
    pub col: usize,
}

/// Monotone staircase of 0-based cells from `(0, 0)` to `(n-1, m-1)`,
/// produced by rasterizing the piecewise-linear shape through the waypoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterPath(Vec<(usize, usize)>);

impl CenterPath {
    /// The path cells in order.
    #[must_use]
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.0
    }

    /// Number of cells.
    #[must_use]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false for a constructed path.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One positive search width per matrix row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthProfile(Vec<usize>);

impl WidthProfile {
    /// Per-row widths, length `n`.
    #[must_use]
    pub fn widths(&self) -> &[usize] {
        &self.0
    }
}

/// Round half-to-even, matching the rounding the waypoint labels were
/// produced with.
#[inline]
pub(crate) fn round_even(x: f64) -> i64 {
    x.round_ties_even() as i64
}

/// Quantize `x` to the nearest multiple of `base`.
#[must_use]
pub fn quantize(x: usize, base: usize) -> usize {
    (round_even(x as f64 / base as f64) * base as i64) as usize
}

/// Link the predicted waypoints into a monotone staircase across the matrix.
///
/// The path starts at `(0, 0)`, passes through each waypoint after clamping
/// it to stay strictly ahead of the current cell and inside the matrix (so
/// wild predictions degrade into a near-diagonal path instead of failing),
/// and ends at `(n-1, m-1)`. Each segment is rasterized by stepping one
/// column at a time and climbing to the line `row = cur + i * slope`;
/// waypoints whose clamped target does not advance the column emit a
/// straight column climb. Diagonal targets produce the exact diagonal.
/// Requires `n, m >= 7`.
#[must_use]
pub fn center_path(waypoints: &[Waypoint], n: usize, m: usize) -> CenterPath {
    assert!(n >= 7 && m >= 7, "center_path requires n, m >= 7");
    let mut path: Vec<(usize, usize)> = vec![(0, 0)];
    let targets = waypoints
        .iter()
        .map(|w| (w.row, w.col))
        .chain(std::iter::once((n - 1, m - 1)));
    for (wp_row, wp_col) in targets {
        let (cur_row, cur_col) = *path.last().expect("path starts non-empty");
        let target_row = wp_row.max(cur_row + 1).min(n - 1);
        let target_col = wp_col.max(cur_col + 1).min(m - 1);
        if target_col <= cur_col {
            for row in cur_row + 1..=target_row {
                path.push((row, cur_col));
            }
        } else {
            let dcol = target_col - cur_col;
            let slope = ((target_row - cur_row) as f64 / dcol as f64).max(0.0);
            let mut last_row = cur_row;
            for i in 1..=dcol {
                let col = cur_col + i;
                let row_i = if i == dcol {
                    target_row
                } else {
                    cur_row + round_even(i as f64 * slope).max(0) as usize
                };
                if row_i == last_row {
                    path.push((last_row, col));
                } else {
                    // The first climbed row rides the column step diagonally.
                    for row in last_row + 1..=row_i {
                        path.push((row, col));
                    }
                }
                last_row = row_i;
            }
        }
    }
    path.push((n - 1, m - 1));
    path.dedup();
    debug_assert!(path.windows(2).all(|w| {
        let dr = w[1].0 - w[0].0;
        let dc = w[1].1 - w[0].1;
        matches!((dr, dc), (0, 1) | (1, 0) | (1, 1))
    }));
    CenterPath(path)
}

/// Interpolate per-row search widths from the waypoint confidences.
///
/// Anchor widths are `ENDPOINT_WIDTH` at both ends and `(2 - c) * m / 10`
/// (truncated) at each confidence anchor, so lower confidence widens the
/// search. Anchors are joined by linear interpolation over runs of `n / 6`
/// rows, then the profile is truncated or padded to exactly `n` entries.
pub fn width_profile(
    confidences: &[f64],
    n: usize,
    m: usize,
    endpoint_width: usize,
) -> Result<WidthProfile> {
    for &c in confidences {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "confidence",
                reason: format!("{c} outside (0, 1]"),
            });
        }
    }
    let mut anchors = Vec::with_capacity(confidences.len() + 2);
    anchors.push(endpoint_width as i64);
    for &c in confidences {
        anchors.push(((2.0 - c) * (m as f64 / 10.0)).trunc() as i64);
    }
    anchors.push(endpoint_width as i64);

    let run = (n / 6).max(1);
    let mut widths: Vec<i64> = Vec::with_capacity(n + run);
    for seg in anchors.windows(2) {
        widths.push(seg[0]);
        let slope = (seg[1] - seg[0]) as f64 / run as f64;
        for j in 0..run.saturating_sub(1) {
            widths.push((seg[0] as f64 + slope * j as f64).trunc() as i64);
        }
        if widths.len() >= n {
            break;
        }
    }
    let last_anchor = *anchors.last().expect("non-empty");
    widths.resize(n, last_anchor);
    widths[0] = endpoint_width as i64;
    widths[n - 1] = endpoint_width as i64;
    Ok(WidthProfile(
        widths.into_iter().map(|w| w.max(1) as usize).collect(),
    ))
}

/// Turn a center path plus width profile into per-row column intervals.
///
/// Each matrix row centers its interval on the integer mean column of the
/// path cells in that row, widened to at least the number of path cells plus
/// one. The first row is pinned to start at column 1 and the last row to end
/// at column `m`; the result is repaired so a finite bottom-right cell always
/// exists.
#[must_use]
pub fn region_from_path(
    path: &CenterPath,
    widths: &WidthProfile,
    n: usize,
    m: usize,
) -> SearchRegion {
    debug_assert_eq!(widths.widths().len(), n);
    // Path cells grouped by matrix row: path row r maps to matrix row r + 1.
    let mut col_sum = vec![0usize; n];
    let mut col_count = vec![0usize; n];
    for &(r, c) in path.cells() {
        if r < n {
            col_sum[r] += c;
            col_count[r] += 1;
        }
    }
    let intervals = (1..=n)
        .map(|i| {
            let count = col_count[i - 1];
            let middle = col_sum[i - 1].checked_div(count).unwrap_or(0);
            let mut width = widths.widths()[i - 1];
            if count >= width {
                width = count + 1;
            }
            let (lo, hi);
            if middle < width / 2 {
                lo = 1;
                hi = (lo + width).min(m);
            } else {
                hi = (middle + width / 2 + 1).min(m);
                lo = hi.saturating_sub(width).max(1);
            }
            if i == 1 {
                (1, (1 + width).min(m))
            } else if i == n {
                (m.saturating_sub(width).max(1), m)
            } else {
                (lo, hi)
            }
        })
        .collect();
    SearchRegion::new(n, m, intervals)
        .expect("intervals clamped into bounds")
        .repair()
}
