use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::field::{field_value, FieldRef, MatrixField};
use crate::error::{Error, Result};
use crate::numeric::Matrix;

/// One of the three almost complex structures `J_1, J_2, J_3`.
///
/// The metric is Hermitian with respect to `J_1` and a Norden metric with
/// respect to `J_2` and `J_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Structure {
    J1,
    J2,
    J3,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::J1, Structure::J2, Structure::J3];

    /// Zero-based slot.
    pub fn index(self) -> usize {
        match self {
            Structure::J1 => 0,
            Structure::J2 => 1,
            Structure::J3 => 2,
        }
    }

    /// One-based label `α`.
    pub fn alpha(self) -> usize {
        self.index() + 1
    }

    pub fn from_alpha(alpha: usize) -> Option<Structure> {
        match alpha {
            1 => Some(Structure::J1),
            2 => Some(Structure::J2),
            3 => Some(Structure::J3),
            _ => None,
        }
    }

    /// `g(JX, JY) = g(X, Y)` rather than `-g(X, Y)`.
    pub fn is_hermitian(self) -> bool {
        self == Structure::J1
    }

    /// Coefficient of the Lee-form expression of `F_α` on a `4n`-dimensional
    /// manifold: `1/(2(2n-1))` for `J_1`, `1/(4n)` for `J_2, J_3`.
    pub fn lee_coefficient(self, n: usize) -> f64 {
        let n = n as f64;
        if self.is_hermitian() {
            1.0 / (2.0 * (2.0 * n - 1.0))
        } else {
            1.0 / (4.0 * n)
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J{}", self.alpha())
    }
}

/// A `4n`-dimensional manifold described on a single coordinate chart by
/// its metric and three (1,1)-tensor fields.
///
/// Matrix convention for the structures: column `j` holds the components of
/// `J e_j`, i.e. entry `(i, j)` is `J^i_j`.
#[derive(Clone)]
pub struct ChartManifold {
    dim: usize,
    metric: FieldRef,
    structures: [FieldRef; 3],
    label: String,
}

impl fmt::Debug for ChartManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartManifold")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .field("metric", &self.metric.describe())
            .finish()
    }
}

impl ChartManifold {
    pub fn new(label: impl Into<String>, metric: FieldRef, structures: [FieldRef; 3]) -> Result<Self> {
        let dim = metric.dim();
        if dim == 0 || !dim.is_multiple_of(4) {
            return Err(Error::Domain(format!(
                "manifold dimension must be a positive multiple of 4, got {dim}"
            )));
        }
        if let Some(s) = structures.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "structure field over {} coordinates, metric over {dim}",
                s.dim()
            )));
        }
        Ok(Self {
            dim,
            metric,
            structures,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Quaternionic dimension `n = dim / 4`.
    pub fn n(&self) -> usize {
        self.dim / 4
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn metric_field(&self) -> &FieldRef {
        &self.metric
    }

    pub fn structure_field(&self, s: Structure) -> &FieldRef {
        &self.structures[s.index()]
    }

    pub fn structure_fields(&self) -> &[FieldRef; 3] {
        &self.structures
    }

    /// Same structures, different metric.
    pub fn with_metric(&self, metric: Arc<dyn MatrixField>, label: impl Into<String>) -> Result<Self> {
        ChartManifold::new(label, metric, self.structures.clone())
    }

    /// Replaces one structure field (used by negative controls).
    pub fn with_structure(&self, s: Structure, field: FieldRef) -> Result<Self> {
        let mut structures = self.structures.clone();
        structures[s.index()] = field;
        ChartManifold::new(self.label.clone(), self.metric.clone(), structures)
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} on a {}-dimensional chart",
                x.len(),
                self.dim
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite point {x:?}")));
        }
        Ok(())
    }

    pub fn metric_at(&self, x: &[f64]) -> Result<Matrix<f64>> {
        self.check_point(x)?;
        field_value(self.metric.as_ref(), x)
    }

    pub fn structure_at(&self, s: Structure, x: &[f64]) -> Result<Matrix<f64>> {
        self.check_point(x)?;
        field_value(self.structures[s.index()].as_ref(), x)
    }
}
