//! Accumulated-cost matrix storage.

/// Accumulated-distance grid of shape `(n + 1) x (m + 1)`.
///
/// Row 0 and column 0 form an infinite border with `cell(0, 0) == 0`, so the
/// recurrence needs no boundary special cases. Cells that were never computed
/// (or that no valid path reaches) hold `f64::INFINITY`. Storage is a dense
/// flat buffer in row-major order.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    n: usize,
    m: usize,
    cells: Vec<f64>,
    computed: usize,
}

impl CostMatrix {
    /// An all-infinite matrix for series of lengths `n` and `m`, with the
    /// `(0, 0)` anchor set to zero.
    #[must_use]
    pub(crate) fn new_infinite(n: usize, m: usize) -> Self {
        let mut cells = vec![f64::INFINITY; (n + 1) * (m + 1)];
        cells[0] = 0.0;
        Self {
            n,
            m,
            cells,
            computed: 0,
        }
    }

    /// Length of the first series (logical rows run `1..=n`).
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of the second series (logical columns run `1..=m`).
    #[must_use]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Total grid rows, including the infinite border row.
    #[must_use]
    pub fn rows(&self) -> usize {
        self.n + 1
    }

    /// Total grid columns, including the infinite border column.
    #[must_use]
    pub fn cols(&self) -> usize {
        self.m + 1
    }

    /// Cell value at `(i, j)`; border cells are `INFINITY` except `(0, 0)`.
    #[inline]
    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * (self.m + 1) + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i >= 1 && j >= 1, "border cells are fixed");
        let slot = &mut self.cells[i * (self.m + 1) + j];
        if slot.is_finite() {
            self.computed -= 1;
        }
        if value.is_finite() {
            self.computed += 1;
        }
        *slot = value;
    }

    /// Row `i - 1` (shared) and row `i` (mutable) as width-`m + 1` slices,
    /// for fill loops that carry the left and diagonal cells in registers.
    /// The caller must re-count finite cells via
    /// [`add_computed`](Self::add_computed).
    #[inline]
    pub(crate) fn row_pair_mut(&mut self, i: usize) -> (&[f64], &mut [f64]) {
        debug_assert!(i >= 1);
        let width = self.m + 1;
        let (head, tail) = self.cells.split_at_mut(i * width);
        (&head[(i - 1) * width..], &mut tail[..width])
    }

    #[inline]
    pub(crate) fn add_computed(&mut self, cells: usize) {
        self.computed += cells;
    }

    /// The bottom-right cell `(n, m)`: the accumulated distance of the best
    /// alignment found, or `INFINITY` if the search region disconnected it.
    #[must_use]
    pub fn bottom_right(&self) -> f64 {
        self.get(self.n, self.m)
    }

    /// Number of finite cells with `i, j >= 1`.
    #[must_use]
    pub fn computed_count(&self) -> usize {
        self.computed
    }
}
