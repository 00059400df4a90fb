//! Exact alignment: full cost-matrix fill and backtracking.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::matrix::CostMatrix;
use crate::path::{Alignment, WarpPath};
use crate::series::{point_distance_unchecked, TimeSeries};

#[inline]
fn min3(a: f64, b: f64, c: f64) -> f64 {
    a.min(b).min(c)
}

pub(crate) fn check_dims(a: &TimeSeries, b: &TimeSeries) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Fill the complete `(n + 1) x (m + 1)` cost matrix for two series.
///
/// Every cell `(i, j)` with `i, j >= 1` ends up finite and equal to the point
/// distance at `(i, j)` plus the minimum of its three predecessors.
pub fn full_cost_matrix(a: &TimeSeries, b: &TimeSeries) -> Result<CostMatrix> {
    check_dims(a, b)?;
    let (n, m) = (a.len(), b.len());
    let mut matrix = CostMatrix::new_infinite(n, m);
    if a.dim() == 1 {
        // Univariate fast path: carry the left and diagonal cells in
        // registers and stream the previous row.
        let av = a.values();
        let bv = b.values();
        for i in 1..=n {
            let ai = av[i - 1];
            let (prev, cur) = matrix.row_pair_mut(i);
            let mut diag = prev[0];
            let mut left = cur[0];
            for ((&bj, &up), slot) in bv.iter().zip(&prev[1..]).zip(&mut cur[1..]) {
                let value = (ai - bj).abs() + min3(up, left, diag);
                *slot = value;
                diag = up;
                left = value;
            }
        }
    } else {
        for i in 1..=n {
            let pa = a.point(i - 1);
            let (prev, cur) = matrix.row_pair_mut(i);
            let mut diag = prev[0];
            let mut left = cur[0];
            for j in 1..=m {
                let cost = point_distance_unchecked(pa, b.point(j - 1));
                let up = prev[j];
                let value = cost + min3(up, left, diag);
                cur[j] = value;
                diag = up;
                left = value;
            }
        }
    }
    matrix.add_computed(n * m);
    Ok(matrix)
}

/// Recover the optimal warp path by walking minimal predecessors from
/// `(n, m)` back to `(1, 1)`.
///
/// Ties are broken in the fixed order diagonal, then column-decrement, then
/// row-decrement, so the returned path is deterministic.
pub fn backtrack(matrix: &CostMatrix) -> Result<WarpPath> {
    if !matrix.bottom_right().is_finite() {
        return Err(Error::DisconnectedRegion);
    }
    let (n, m) = (matrix.n(), matrix.m());
    let mut pairs = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    pairs.push((i, j));
    while (i, j) != (1, 1) {
        let diag = matrix.get(i - 1, j - 1);
        let left = matrix.get(i, j - 1);
        let up = matrix.get(i - 1, j);
        if diag <= left && diag <= up {
            i -= 1;
            j -= 1;
        } else if left <= up {
            j -= 1;
        } else {
            i -= 1;
        }
        pairs.push((i, j));
    }
    pairs.reverse();
    Ok(WarpPath::from_backtrack(pairs, n, m))
}

/// Exact alignment: full matrix fill plus backtracking.
pub fn full_dtw(a: &TimeSeries, b: &TimeSeries) -> Result<Alignment> {
    let start = Instant::now();
    let matrix = full_cost_matrix(a, b)?;
    let path = backtrack(&matrix)?;
    let fill_time = start.elapsed();
    Ok(Alignment {
        distance: matrix.bottom_right(),
        path,
        cells_computed: matrix.computed_count(),
        fill_time,
    })
}

/// Sum of point distances over a path's pairs; equals the alignment
/// distance for any path produced by [`backtrack`].
pub fn path_cost(a: &TimeSeries, b: &TimeSeries, path: &WarpPath) -> Result<f64> {
    check_dims(a, b)?;
    Ok(path
        .pairs()
        .iter()
        .map(|&(i, j)| point_distance_unchecked(a.point(i - 1), b.point(j - 1)))
        .sum())
}
