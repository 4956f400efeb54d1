use super::dual::{Dual1, Dual2};
use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

fn non_finite(what: &str) -> Error {
    Error::EvaluationDomain {
        subexpr: what.to_string(),
        reason: "non-finite intermediate value".to_string(),
    }
}

/// Value and forward-mode Jacobian of a vector map.
pub fn jacobian<F>(f: F, x: &[f64]) -> Result<(Vec<f64>, Matrix<f64>)>
where
    F: Fn(&[Dual1]) -> Result<Vec<Dual1>>,
{
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite evaluation point".into()));
    }
    let out = f(&Dual1::variables(x))?;
    if out.iter().any(|o| !o.is_finite()) {
        return Err(non_finite("jacobian output"));
    }
    let values = out.iter().map(|o| o.value).collect();
    let jac = Matrix::from_fn(out.len(), x.len(), |i, j| out[i].d(j));
    Ok((values, jac))
}

/// Value, gradient and symmetric Hessian of a scalar function.
pub fn hessian<F>(f: F, x: &[f64]) -> Result<(f64, Vec<f64>, Matrix<f64>)>
where
    F: Fn(&[Dual2]) -> Result<Dual2>,
{
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite evaluation point".into()));
    }
    let out = f(&Dual2::variables(x))?;
    if !out.is_finite() {
        return Err(non_finite("hessian output"));
    }
    let grad = (0..x.len()).map(|k| out.d(k)).collect();
    Ok((out.value, grad, out.hessian(x.len())))
}
