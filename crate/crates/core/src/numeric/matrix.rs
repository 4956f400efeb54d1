use std::ops::{Index, IndexMut};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Relative pivot threshold used by [`Matrix::solve`].
pub const PIVOT_TOL: f64 = 1e-12;

/// Dense row-major matrix over any [`Scalar`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S = f64> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S> Matrix<S> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }
}

impl<S: Clone> Matrix<S> {
    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Submatrix made of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |i, k| self[(i, cols[k])].clone())
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    /// Lifts a real matrix into this scalar type as constants.
    pub fn lift(m: &Matrix<f64>) -> Self {
        m.map(|&v| S::constant(v))
    }

    /// Primal values.
    pub fn values(&self) -> Matrix<f64> {
        self.map(|s| s.value())
    }

    pub fn matmul(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * rhs[(k, j)].clone();
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (k, vk) in v.iter().enumerate() {
                    acc = acc + self[(i, k)].clone() * vk.clone();
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix<S>) -> Result<Matrix<S>> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        self.map(|a| a.clone() * c.clone())
    }

    fn zip_with(&self, rhs: &Matrix<S>, f: impl Fn(S, S) -> S) -> Result<Matrix<S>> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    /// Solves `self · X = B` by Gaussian elimination with row pivoting.
    ///
    /// Pivots are chosen on primal values; a pivot whose magnitude falls
    /// below `PIVOT_TOL · max |entry|` is reported as [`Error::SingularMatrix`].
    pub fn solve_matrix(&self, b: &Matrix<S>) -> Result<Matrix<S>> {
        if !self.is_square() || b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve with {}x{} system and {}x{} right-hand side",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let n = self.rows;
        let scale = self.data.iter().fold(0.0_f64, |m, s| m.max(s.value().abs()));
        let threshold = PIVOT_TOL * scale;
        let mut a = self.clone();
        let mut x = b.clone();
        for col in 0..n {
            let (piv, pval) = (col..n)
                .map(|r| (r, a[(r, col)].value().abs()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pval <= threshold || pval == 0.0 {
                return Err(Error::SingularMatrix {
                    pivot: pval,
                    threshold,
                });
            }
            if piv != col {
                a.swap_rows(piv, col);
                x.swap_rows(piv, col);
            }
            let p = a[(col, col)].clone();
            for r in col + 1..n {
                let f = a[(r, col)].clone() / p.clone();
                for c in col..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
                for c in 0..x.cols {
                    let v = x[(r, c)].clone() - f.clone() * x[(col, c)].clone();
                    x[(r, c)] = v;
                }
            }
        }
        for col in (0..n).rev() {
            let p = a[(col, col)].clone();
            for c in 0..x.cols {
                let mut acc = x[(col, c)].clone();
                for k in col + 1..n {
                    acc = acc - a[(col, k)].clone() * x[(k, c)].clone();
                }
                x[(col, c)] = acc / p.clone();
            }
        }
        Ok(x)
    }

    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        let rhs = Matrix::from_columns(b.len(), &[b.to_vec()]);
        Ok(self.solve_matrix(&rhs)?.column(0))
    }

    pub fn inverse(&self) -> Result<Matrix<S>> {
        self.solve_matrix(&Matrix::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Matrix<f64> {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_vec(r, c, rows.concat())
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

/// Euclidean norm of a real vector.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest absolute entry of a real vector.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `g(a, b) = aᵀ G b`.
pub fn bilinear(g: &Matrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..g.rows() {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..g.cols() {
            acc += a[i] * g[(i, j)] * b[j];
        }
    }
    acc
}
