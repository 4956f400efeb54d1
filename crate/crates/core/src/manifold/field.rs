use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numeric::{Dual1, Matrix, Scalar};

/// A square-matrix-valued function on a chart.
///
/// Fields are evaluated over [`Dual1`] coordinates. The inputs may carry
/// arbitrary gradients, so composing a field with a map (for example an
/// immersion) yields derivatives with respect to the map's own variables
/// by the chain rule.
pub trait MatrixField: Send + Sync + fmt::Debug {
    /// Number of chart coordinates; also the matrix size.
    fn dim(&self) -> usize;

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>>;

    /// Short human-readable description for reports.
    fn describe(&self) -> String;
}

pub type FieldRef = Arc<dyn MatrixField>;

/// Value of a field at a real point.
pub fn field_value(field: &dyn MatrixField, x: &[f64]) -> Result<Matrix<f64>> {
    let lifted: Vec<Dual1> = x.iter().map(|&v| Dual1::constant(v)).collect();
    Ok(field.eval(&lifted)?.values())
}

fn check_len(expected: usize, x: &[Dual1]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::BindingLength {
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

/// Constant matrix.
#[derive(Clone, Debug)]
pub struct ConstantField {
    value: Matrix<f64>,
}

impl ConstantField {
    pub fn new(value: Matrix<f64>) -> Result<Self> {
        if !value.is_square() {
            return Err(Error::DimensionMismatch("constant field must be square".into()));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> &Matrix<f64> {
        &self.value
    }
}

impl MatrixField for ConstantField {
    fn dim(&self) -> usize {
        self.value.rows()
    }

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>> {
        check_len(self.dim(), x)?;
        Ok(Matrix::lift(&self.value))
    }

    fn describe(&self) -> String {
        format!("constant {0}x{0}", self.dim())
    }
}

/// Matrix whose entries are parsed expressions, row-major.
#[derive(Clone, Debug)]
pub struct ExprField {
    dim: usize,
    entries: Vec<Expr>,
}

impl ExprField {
    pub fn new(dim: usize, entries: Vec<Expr>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} expressions for a {dim}x{dim} field",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "entry `{e}` parsed over {} coordinates, chart has {dim}",
                e.dim()
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Parses a row-major table of expression strings.
    pub fn parse(rows: &[Vec<String>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("expression table must be square".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|s| Expr::parse(s, dim))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, entries)
    }
}

impl MatrixField for ExprField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>> {
        check_len(self.dim, x)?;
        let values = self
            .entries
            .iter()
            .map(|e| e.evaluate(x))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.dim, self.dim, values)
    }

    fn describe(&self) -> String {
        format!("expression table {0}x{0}", self.dim)
    }
}

/// `e^{2u} · base`.
#[derive(Clone, Debug)]
pub struct ConformalField {
    base: FieldRef,
    factor: Expr,
}

impl ConformalField {
    pub fn new(base: FieldRef, factor: Expr) -> Result<Self> {
        if factor.dim() != base.dim() {
            return Err(Error::DimensionMismatch(format!(
                "conformal factor over {} coordinates, chart has {}",
                factor.dim(),
                base.dim()
            )));
        }
        Ok(Self { base, factor })
    }

    pub fn factor(&self) -> &Expr {
        &self.factor
    }
}

impl MatrixField for ConformalField {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>> {
        let u = self.factor.evaluate(x)?;
        let weight = u.scale(2.0).exp();
        Ok(self.base.eval(x)?.scale(&weight))
    }

    fn describe(&self) -> String {
        format!("exp(2*({})) * [{}]", self.factor, self.base.describe())
    }
}

/// Block-diagonal field on a product chart: the first `left.dim()`
/// coordinates feed `left`, the rest feed `right`.
#[derive(Clone, Debug)]
pub struct BlockDiagField {
    left: FieldRef,
    right: FieldRef,
}

impl BlockDiagField {
    pub fn new(left: FieldRef, right: FieldRef) -> Self {
        Self { left, right }
    }
}

impl MatrixField for BlockDiagField {
    fn dim(&self) -> usize {
        self.left.dim() + self.right.dim()
    }

    fn eval(&self, x: &[Dual1]) -> Result<Matrix<Dual1>> {
        check_len(self.dim(), x)?;
        let split = self.left.dim();
        let a = self.left.eval(&x[..split])?;
        let b = self.right.eval(&x[split..])?;
        Ok(Matrix::from_fn(self.dim(), self.dim(), |i, j| {
            match (i < split, j < split) {
                (true, true) => a[(i, j)].clone(),
                (false, false) => b[(i - split, j - split)].clone(),
                _ => Dual1::constant(0.0),
            }
        }))
    }

    fn describe(&self) -> String {
        format!("blockdiag({}, {})", self.left.describe(), self.right.describe())
    }
}
