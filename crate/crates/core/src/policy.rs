//! Residual thresholds and the three-way hold/fail policy.

use serde::Serialize;

use crate::numeric::max_abs;

pub const DEFAULT_HOLD: f64 = 1e-7;
pub const DEFAULT_FAIL: f64 = 1e-4;

/// Outcome of comparing one residual against the thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Hold,
    Indeterminate,
    Fail,
}

impl Status {
    /// The worse of two outcomes.
    pub fn worst(self, other: Status) -> Status {
        self.max(other)
    }
}

/// An identity "holds" below `hold`, "fails" above `fail`, and is
/// indeterminate in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub hold: f64,
    pub fail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hold: DEFAULT_HOLD,
            fail: DEFAULT_FAIL,
        }
    }
}

impl Tolerances {
    pub fn classify(&self, residual: f64) -> Status {
        if residual.is_nan() || residual > self.fail {
            Status::Fail
        } else if residual < self.hold {
            Status::Hold
        } else {
            Status::Indeterminate
        }
    }

    pub fn is_zero(&self, magnitude: f64) -> bool {
        magnitude < self.hold
    }

    pub fn is_nonzero(&self, magnitude: f64) -> bool {
        magnitude > self.fail
    }
}

/// `|lhs - rhs|_∞ / (1 + max(|lhs|_∞, |rhs|_∞))`.
pub fn normalized_residual(lhs: &[f64], rhs: &[f64]) -> f64 {
    debug_assert_eq!(lhs.len(), rhs.len());
    let diff = lhs
        .iter()
        .zip(rhs)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    diff / (1.0 + max_abs(lhs).max(max_abs(rhs)))
}

/// Scalar form of [`normalized_residual`].
pub fn normalized_scalar(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()))
}

/// Running max/mean of per-point residuals.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub max: f64,
    pub mean: f64,
    count: usize,
    #[serde(skip)]
    sum: f64,
}

impl Summary {
    pub fn push(&mut self, v: f64) {
        if v.is_nan() {
            self.max = f64::NAN;
        } else if !self.max.is_nan() {
            self.max = self.max.max(v);
        }
        self.sum += v;
        self.count += 1;
        self.mean = self.sum / self.count as f64;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut s = Summary::default();
        for v in values {
            s.push(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_bands() {
        let t = Tolerances::default();
        assert_eq!(t.classify(0.0), Status::Hold);
        assert_eq!(t.classify(5e-8), Status::Hold);
        assert_eq!(t.classify(1e-6), Status::Indeterminate);
        assert_eq!(t.classify(1e-3), Status::Fail);
        assert_eq!(t.classify(f64::NAN), Status::Fail);
    }

    #[test]
    fn worst_status() {
        assert_eq!(Status::Hold.worst(Status::Indeterminate), Status::Indeterminate);
        assert_eq!(Status::Fail.worst(Status::Hold), Status::Fail);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalized_residual(&[2.0, 0.0], &[1.0, 0.0]), 1.0 / 3.0);
        assert_eq!(normalized_scalar(0.0, 0.0), 0.0);
    }

    #[test]
    fn summary_tracks_max_and_mean() {
        let s = Summary::from_values([1.0, 3.0, 2.0]);
        assert_eq!(s.max, 3.0);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.count(), 3);
    }
}
