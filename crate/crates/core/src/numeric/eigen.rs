use serde::Serialize;

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Signature counts of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(plus: usize, minus: usize, zero: usize) -> Self {
        Self { plus, minus, zero }
    }

    /// Neutral signature `(k, k, 0)`.
    pub fn is_neutral(&self, k: usize) -> bool {
        self.plus == k && self.minus == k && self.zero == 0
    }
}

const SYMMETRY_TOL: f64 = 1e-10;
const ZERO_EIGEN_TOL: f64 = 1e-10;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(a: &Matrix<f64>) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    if a.asymmetry() > SYMMETRY_TOL * a.max_abs().max(1.0) {
        return Err(Error::Domain(format!(
            "matrix is not symmetric (asymmetry {:e})",
            a.asymmetry()
        )));
    }
    let n = a.rows();
    let mut m = a.clone();
    let scale = a.frobenius();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..i {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    Ok((0..n).map(|i| m[(i, i)]).collect())
}

/// Counts positive, negative and zero eigenvalues. An eigenvalue with
/// `|λ| < 1e-10 · ‖A‖_F` counts as zero.
pub fn inertia(a: &Matrix<f64>) -> Result<Inertia> {
    let eig = symmetric_eigenvalues(a)?;
    let tol = ZERO_EIGEN_TOL * a.frobenius();
    let mut out = Inertia::new(0, 0, 0);
    for l in eig {
        if l.abs() <= tol {
            out.zero += 1;
        } else if l > 0.0 {
            out.plus += 1;
        } else {
            out.minus += 1;
        }
    }
    Ok(out)
}
