//! Warp paths and alignment results.

use std::time::Duration;

use crate::error::{Error, Result};

/// A monotone sequence of matched index pairs from `(1, 1)` to `(n, m)`.
///
/// Pairs are 1-based matrix coordinates (subtract one for series indices).
/// Every valid path satisfies the four alignment constraints: both endpoints
/// are matched (boundary), consecutive pairs differ by `(0, +1)`, `(+1, 0)`,
/// or `(+1, +1)` (step), at least one coordinate advances per step
/// (monotonicity), and no pair repeats (matching).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarpPath(Vec<(usize, usize)>);

impl WarpPath {
    /// Build a path from raw pairs, validating every structural constraint
    /// against the stated matrix shape.
    pub fn from_pairs(pairs: Vec<(usize, usize)>, n: usize, m: usize) -> Result<Self> {
        let path = Self(pairs);
        path.validate(n, m)?;
        Ok(path)
    }

    /// Construct without validation; used by backtracking, which produces
    /// valid paths by construction (checked in debug builds).
    pub(crate) fn from_backtrack(pairs: Vec<(usize, usize)>, n: usize, m: usize) -> Self {
        let path = Self(pairs);
        debug_assert!(path.validate(n, m).is_ok());
        let _ = (n, m);
        path
    }

    /// The matched pairs in order.
    #[must_use]
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    /// Number of matched pairs.
    #[must_use]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false for a constructed path.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Check boundary, step, and monotonicity constraints for an `n x m`
    /// alignment.
    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        let invalid = |reason: String| Error::InvalidParameter {
            name: "warp path",
            reason,
        };
        let first = self.0.first().ok_or_else(|| invalid("empty".into()))?;
        let last = self.0.last().expect("non-empty");
        if *first != (1, 1) {
            return Err(invalid(format!("starts at {first:?}, not (1, 1)")));
        }
        if *last != (n, m) {
            return Err(invalid(format!("ends at {last:?}, not ({n}, {m})")));
        }
        for w in self.0.windows(2) {
            let (r0, c0) = w[0];
            let (r1, c1) = w[1];
            let step = (r1.wrapping_sub(r0), c1.wrapping_sub(c0));
            if !matches!(step, (0, 1) | (1, 0) | (1, 1)) {
                return Err(invalid(format!("invalid step {:?} -> {:?}", w[0], w[1])));
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a WarpPath {
    type Item = &'a (usize, usize);
    type IntoIter = std::slice::Iter<'a, (usize, usize)>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// The result of aligning two series: the accumulated distance, the warp
/// path that realizes it, how many matrix cells the fill computed, and how
/// long the fill (plus backtracking) took.
#[derive(Debug, Clone)]
pub struct Alignment {
    pub distance: f64,
    pub path: WarpPath,
    pub cells_computed: usize,
    pub fill_time: Duration,
}
