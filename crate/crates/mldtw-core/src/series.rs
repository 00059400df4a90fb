//! Time-series sample storage and the point distance measure.

use crate::error::{Error, Result};

/// Minimum number of samples a series must contain.
pub const MIN_SERIES_LEN: usize = 2;

/// An ordered sequence of sample points, each holding `dim` real values.
///
/// Values are stored flattened in sample order, so point `i` occupies
/// `values[i * dim .. (i + 1) * dim]`. A univariate signal has `dim == 1`;
/// pen traces have `dim == 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    dim: usize,
    id: Option<String>,
}

impl TimeSeries {
    /// Create a univariate series from raw samples.
    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1)
    }

    /// Create a series of `dim`-valued points from flattened values.
    ///
    /// Requires at least [`MIN_SERIES_LEN`] points, a value count divisible
    /// by `dim`, and all values finite.
    pub fn new(values: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "must be at least 1".into(),
            });
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter {
                name: "values",
                reason: format!("length {} not divisible by dim {dim}", values.len()),
            });
        }
        let len = values.len() / dim;
        if len < MIN_SERIES_LEN {
            return Err(Error::SeriesTooShort {
                len,
                min: MIN_SERIES_LEN,
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index: bad / dim });
        }
        Ok(Self {
            values,
            dim,
            id: None,
        })
    }

    /// Attach an identifying label (used in trial records and corpora).
    #[must_use]
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    /// Number of points.
    #[must_use]
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    /// Always false: construction rejects series shorter than two points.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values per point.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Optional label.
    #[must_use]
    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    /// The `i`-th point as a slice of `dim` values (0-based).
    #[must_use]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// All values, flattened in point order.
    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Euclidean distance between two points of equal dimension.
///
/// For univariate points this is the absolute difference, computed directly
/// rather than via `sqrt(d*d)` so the result is exact.
pub fn point_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(point_distance_unchecked(a, b))
}

/// [`point_distance`] without the dimension check, for hot loops where the
/// caller has already validated both series.
#[inline]
#[must_use]
pub(crate) fn point_distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == 1 {
        (a[0] - b[0]).abs()
    } else {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_points_have_zero_distance() {
        assert_eq!(point_distance(&[3.0], &[3.0]).unwrap(), 0.0);
    }

    #[test]
    fn univariate_distance_is_absolute_difference() {
        assert_eq!(point_distance(&[1.0], &[4.0]).unwrap(), 3.0);
        assert_eq!(point_distance(&[4.0], &[1.0]).unwrap(), 3.0);
    }

    #[test]
    fn two_dimensional_distance_is_euclidean() {
        // 3-4-5 triangle
        assert_eq!(point_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn mismatched_dimensions_error() {
        let err = point_distance(&[1.0], &[1.0, 2.0]).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch { left: 1, right: 2 }
        ));
    }

    #[test]
    fn length_one_series_rejected() {
        let err = TimeSeries::univariate(vec![5.0]).unwrap_err();
        assert!(matches!(err, Error::SeriesTooShort { len: 1, min: 2 }));
    }

    #[test]
    fn non_finite_values_rejected() {
        let err = TimeSeries::univariate(vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { index: 1 }));
    }

    #[test]
    fn multivariate_points_are_sliced_in_point_order() {
        let ts = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.point(0), &[1.0, 2.0]);
        assert_eq!(ts.point(1), &[3.0, 4.0]);
    }

    #[test]
    fn ragged_flattened_values_rejected() {
        assert!(TimeSeries::new(vec![1.0, 2.0, 3.0], 2).is_err());
    }
}
