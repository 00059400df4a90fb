//! Constrained fills: search regions and the fixed diagonal band.

use std::time::Instant;

use crate::dtw::{backtrack, check_dims};
use crate::error::{Error, Result};
use crate::matrix::CostMatrix;
use crate::path::Alignment;
use crate::series::{point_distance_unchecked, TimeSeries};

/// The set of matrix cells a constrained fill computes, as one inclusive
/// column interval `[lo, hi]` per row `i in 1..=n` (1-based, like the
/// matrix). Cells outside the region stay infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRegion {
    n: usize,
    m: usize,
    intervals: Vec<(usize, usize)>,
}

impl SearchRegion {
    /// Build a region from per-row intervals.
    ///
    /// Validates `1 <= lo <= hi <= m` for every row but does not require
    /// connectivity; call [`repair`](Self::repair) to guarantee that every
    /// region cell is reachable from `(1, 1)`.
    pub fn new(n: usize, m: usize, intervals: Vec<(usize, usize)>) -> Result<Self> {
        if intervals.len() != n {
            return Err(Error::InvalidParameter {
                name: "intervals",
                reason: format!("expected {n} rows, got {}", intervals.len()),
            });
        }
        for (row, &(lo, hi)) in intervals.iter().enumerate() {
            if lo < 1 || lo > hi || hi > m {
                return Err(Error::InvalidParameter {
                    name: "intervals",
                    reason: format!("row {}: [{lo}, {hi}] outside 1..={m}", row + 1),
                });
            }
        }
        Ok(Self { n, m, intervals })
    }

    /// Matrix dimensions `(n, m)` the region is sized for.
    #[must_use]
    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// Inclusive column interval for matrix row `i` (1-based).
    #[must_use]
    pub fn interval(&self, i: usize) -> (usize, usize) {
        self.intervals[i - 1]
    }

    /// Whether cell `(i, j)` lies inside the region.
    #[must_use]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        if i < 1 || i > self.n {
            return false;
        }
        let (lo, hi) = self.intervals[i - 1];
        (lo..=hi).contains(&j)
    }

    /// Total number of cells in the region.
    #[must_use]
    pub fn area(&self) -> usize {
        self.intervals.iter().map(|&(lo, hi)| hi - lo + 1).sum()
    }

    /// Widen intervals just enough that a constrained fill reaches every
    /// region cell with a finite value.
    ///
    /// Three steps: pin `(1, 1)` and `(n, m)` into their rows, sweep the left
    /// edges upward so they never jump back leftward between consecutive
    /// rows, then extend any row that starts beyond the previous row's reach
    /// back to the previous row's left edge. Intervals only grow.
    #[must_use]
    pub fn repair(mut self) -> Self {
        let n = self.n;
        self.intervals[0].0 = 1;
        self.intervals[n - 1].1 = self.m;
        for i in (0..n - 1).rev() {
            let next_lo = self.intervals[i + 1].0;
            if self.intervals[i].0 > next_lo {
                self.intervals[i].0 = next_lo;
            }
        }
        for i in 1..n {
            let (prev_lo, prev_hi) = self.intervals[i - 1];
            if self.intervals[i].0 > prev_hi + 1 {
                self.intervals[i].0 = prev_lo;
            }
        }
        self
    }

    /// Whether every consecutive pair of rows is step-adjacent and both
    /// anchor cells are inside. Holds for any repaired region.
    #[must_use]
    pub fn is_connected(&self) -> bool {
        if !self.contains(1, 1) || !self.contains(self.n, self.m) {
            return false;
        }
        self.intervals.windows(2).all(|w| {
            let (prev_lo, prev_hi) = w[0];
            let (lo, hi) = w[1];
            lo <= prev_hi + 1 && hi >= prev_lo
        })
    }
}

/// Band of half-width `radius` around the stretched diagonal `j ~ i * m / n`,
/// repaired for connectivity.
///
/// With `radius >= max(n, m)` the band covers the whole matrix and the
/// constrained fill becomes exact.
pub fn sakoe_chiba_region(n: usize, m: usize, radius: usize) -> Result<SearchRegion> {
    if radius < 1 {
        return Err(Error::InvalidParameter {
            name: "radius",
            reason: "must be at least 1".into(),
        });
    }
    if n < 2 || m < 2 {
        return Err(Error::SeriesTooShort {
            len: n.min(m),
            min: 2,
        });
    }
    let intervals = (1..=n)
        .map(|i| {
            let center = (i as f64 * m as f64 / n as f64).round() as usize;
            let lo = center.saturating_sub(radius).max(1);
            let hi = (center + radius).min(m);
            (lo, hi.max(lo))
        })
        .collect();
    Ok(SearchRegion::new(n, m, intervals)?.repair())
}

/// Fill only the cells inside `region`, treating everything outside as
/// infinite.
///
/// Cells are visited row-major, so every in-region predecessor is already
/// computed when a cell is evaluated. A region cell whose three predecessors
/// are all infinite stays infinite (this cannot happen after
/// [`SearchRegion::repair`]).
pub fn constrained_cost_matrix(
    a: &TimeSeries,
    b: &TimeSeries,
    region: &SearchRegion,
) -> Result<CostMatrix> {
    check_dims(a, b)?;
    let (n, m) = (a.len(), b.len());
    if region.dims() != (n, m) {
        return Err(Error::InvalidParameter {
            name: "region",
            reason: format!("sized for {:?}, series are ({n}, {m})", region.dims()),
        });
    }
    let mut matrix = CostMatrix::new_infinite(n, m);
    let mut finite_cells = 0usize;
    for i in 1..=n {
        let pa = a.point(i - 1);
        let (lo, hi) = region.interval(i);
        let (prev, cur) = matrix.row_pair_mut(i);
        let mut diag = prev[lo - 1];
        let mut left = cur[lo - 1];
        for j in lo..=hi {
            let cost = point_distance_unchecked(pa, b.point(j - 1));
            let up = prev[j];
            let value = cost + up.min(left).min(diag);
            cur[j] = value;
            finite_cells += usize::from(value.is_finite());
            diag = up;
            left = value;
        }
    }
    matrix.add_computed(finite_cells);
    Ok(matrix)
}

/// The fixed-band baseline: Sakoe-Chiba region, constrained fill, and
/// backtracking over the finite cells.
///
/// The reported distance is admissible: never below the exact alignment
/// distance, equal to it once the band covers the whole matrix.
pub fn banded_dtw(a: &TimeSeries, b: &TimeSeries, radius: usize) -> Result<Alignment> {
    check_dims(a, b)?;
    let region = sakoe_chiba_region(a.len(), b.len(), radius)?;
    let start = Instant::now();
    let matrix = constrained_cost_matrix(a, b, &region)?;
    let path = backtrack(&matrix)?;
    let fill_time = start.elapsed();
    Ok(Alignment {
        distance: matrix.bottom_right(),
        path,
        cells_computed: matrix.computed_count(),
        fill_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtw::full_dtw;

    fn uni(values: &[f64]) -> TimeSeries {
        TimeSeries::univariate(values.to_vec()).unwrap()
    }

    #[test]
    fn radius_covering_matrix_gives_full_region() {
        let r = sakoe_chiba_region(5, 5, 5).unwrap();
        for i in 1..=5 {
            assert_eq!(r.interval(i), (1, 5));
        }
        assert_eq!(r.area(), 25);
    }

    #[test]
    fn four_by_four_radius_one_by_hand() {
        let r = sakoe_chiba_region(4, 4, 1).unwrap();
        assert_eq!(r.interval(1), (1, 2));
        assert_eq!(r.interval(2), (1, 3));
        assert_eq!(r.interval(3), (2, 4));
        assert_eq!(r.interval(4), (3, 4));
    }

    #[test]
    fn degenerate_aspect_ratio_is_repaired() {
        // Raw band: row 1 [4, 6], row 2 [9, 10] — disconnected until repaired.
        let r = sakoe_chiba_region(2, 10, 1).unwrap();
        assert!(r.is_connected());
        assert!(r.contains(1, 1));
        assert!(r.contains(2, 10));
    }

    #[test]
    fn radius_zero_rejected() {
        assert!(matches!(
            sakoe_chiba_region(4, 4, 0),
            Err(Error::InvalidParameter { name: "radius", .. })
        ));
    }

    #[test]
    fn cell_count_is_linear_in_length_at_fixed_radius() {
        for radius in [1usize, 4, 14] {
            let per_row_cap = 2 * radius + 1;
            let base = sakoe_chiba_region(256, 256, radius).unwrap().area();
            let doubled = sakoe_chiba_region(512, 512, radius).unwrap().area();
            // Square bands need no repair slack, so the per-row cap is exact.
            assert!(base <= 256 * per_row_cap);
            assert!(doubled <= 512 * per_row_cap);
            let growth = doubled as f64 / base as f64;
            assert!(
                (1.9..=2.1).contains(&growth),
                "radius {radius}: area grew {growth:.2}x for 2x length"
            );
        }
    }

    #[test]
    fn full_region_reproduces_exact_fill() {
        let a = uni(&[1.0, 5.0, 2.0, 8.0, 3.0]);
        let b = uni(&[2.0, 4.0, 7.0, 1.0, 6.0]);
        let region = sakoe_chiba_region(5, 5, 5).unwrap();
        let constrained = constrained_cost_matrix(&a, &b, &region).unwrap();
        let full = crate::dtw::full_cost_matrix(&a, &b).unwrap();
        for i in 0..=5 {
            for j in 0..=5 {
                assert_eq!(constrained.get(i, j), full.get(i, j));
            }
        }
        assert_eq!(constrained.computed_count(), region.area());
    }

    #[test]
    fn narrow_band_is_admissible() {
        let a = uni(&[1.0, 2.0, 3.0]);
        let b = uni(&[2.0, 2.0, 2.0, 3.0, 4.0]);
        let exact = full_dtw(&a, &b).unwrap().distance;
        let banded = banded_dtw(&a, &b, 1).unwrap().distance;
        assert!(banded >= exact);
        assert_eq!(exact, 2.0);
    }

    #[test]
    fn region_missing_end_predecessors_disconnects() {
        // (n, m) is in the region but none of its predecessors are, and the
        // region is not repaired, so the bottom-right stays infinite.
        let region = SearchRegion::new(3, 3, vec![(1, 1), (1, 1), (3, 3)]).unwrap();
        let a = uni(&[1.0, 2.0, 3.0]);
        let matrix = constrained_cost_matrix(&a, &a, &region).unwrap();
        assert!(matrix.bottom_right().is_infinite());
        assert!(matches!(backtrack(&matrix), Err(Error::DisconnectedRegion)));
    }

    #[test]
    fn distance_non_increasing_in_radius() {
        let a = uni(&[0.0, 1.0, 4.0, 1.0, 0.0, -1.0, -4.0, -1.0]);
        let b = uni(&[4.0, 1.0, 0.0, -1.0, -4.0, -1.0, 0.0, 1.0]);
        let exact = full_dtw(&a, &b).unwrap().distance;
        let mut prev = f64::INFINITY;
        for radius in 1..=8 {
            let d = banded_dtw(&a, &b, radius).unwrap().distance;
            assert!(d <= prev + 1e-12, "radius {radius}: {d} > {prev}");
            assert!(d >= exact - 1e-12);
            prev = d;
        }
        assert!((prev - exact).abs() <= 1e-12);
    }

    #[test]
    fn backtracked_path_stays_inside_region() {
        let a = uni(&[0.0, 3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0]);
        let b = uni(&[2.0, 7.0, 1.0, 8.0, 2.0, 8.0, 1.0, 8.0]);
        let region = sakoe_chiba_region(8, 8, 2).unwrap();
        let matrix = constrained_cost_matrix(&a, &b, &region).unwrap();
        let path = backtrack(&matrix).unwrap();
        for &(i, j) in path.pairs() {
            assert!(region.contains(i, j), "({i}, {j}) outside region");
        }
    }

    #[test]
    fn repair_makes_every_region_cell_finite() {
        // A region whose third row juts left under the second row's edge.
        let region = SearchRegion::new(4, 8, vec![(1, 2), (4, 6), (2, 7), (5, 8)])
            .unwrap()
            .repair();
        assert!(region.is_connected());
        let a = uni(&[1.0, 2.0, 3.0, 4.0]);
        let b = uni(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let matrix = constrained_cost_matrix(&a, &b, &region).unwrap();
        assert_eq!(matrix.computed_count(), region.area());
        for i in 1..=4 {
            let (lo, hi) = region.interval(i);
            for j in lo..=hi {
                assert!(matrix.get(i, j).is_finite(), "({i}, {j}) infinite");
            }
        }
    }
}
