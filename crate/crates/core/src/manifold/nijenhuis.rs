use super::chart::{ChartManifold, Structure};
use super::geometry::{jet, Tensor3};
use crate::error::{Error, Result};
use crate::numeric::{Dual1, Matrix};

/// `Σ_k v^k ∂_k J`, the derivative of the structure along `v`.
fn directional(dj: &Tensor3, v: &[f64]) -> Matrix<f64> {
    let n = dj.len();
    Matrix::from_fn(n, n, |i, j| (0..n).map(|k| v[k] * dj[(k, i, j)]).sum())
}

fn mv(m: &Matrix<f64>, v: &[f64]) -> Vec<f64> {
    m.mul_vec(v).expect("chart-sized vector")
}

fn combine(terms: &[(f64, Vec<f64>)]) -> Vec<f64> {
    let n = terms[0].1.len();
    (0..n).map(|i| terms.iter().map(|(c, v)| c * v[i]).sum()).collect()
}

/// Nijenhuis tensor `N_α(X, Y) = [JX, JY] - [X, Y] - J[JX, Y] - J[X, JY]`
/// for `X, Y` extended as constant coordinate fields.
///
/// With constant `X, Y` the brackets reduce to derivatives of `J`:
/// `[JX, JY] = (∂_{JX}J)Y - (∂_{JY}J)X`, `[JX, Y] = -(∂_Y J)X`,
/// `[X, JY] = (∂_X J)Y`, `[X, Y] = 0`.
pub fn nijenhuis(m: &ChartManifold, x: &[f64], s: Structure, xv: &[f64], yv: &[f64]) -> Result<Vec<f64>> {
    m.check_point(x)?;
    if xv.len() != m.dim() || yv.len() != m.dim() {
        return Err(Error::DimensionMismatch("Nijenhuis arguments must be chart vectors".into()));
    }
    let (j, dj) = jet(&m.structure_field(s).eval(&Dual1::variables(x))?, m.dim());
    let jx = mv(&j, xv);
    let jy = mv(&j, yv);
    let bracket_jj = combine(&[
        (1.0, mv(&directional(&dj, &jx), yv)),
        (-1.0, mv(&directional(&dj, &jy), xv)),
    ]);
    let bracket_jx_y = mv(&directional(&dj, yv), xv).iter().map(|v| -v).collect::<Vec<_>>();
    let bracket_x_jy = mv(&directional(&dj, xv), yv);
    Ok(combine(&[
        (1.0, bracket_jj),
        (-1.0, mv(&j, &bracket_jx_y)),
        (-1.0, mv(&j, &bracket_x_jy)),
    ]))
}

/// Largest component of `N_α(e_a, e_b)` over all coordinate pairs.
pub fn nijenhuis_max(m: &ChartManifold, x: &[f64], s: Structure) -> Result<f64> {
    let n = m.dim();
    let e = |k: usize| {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        v
    };
    let mut worst = 0.0_f64;
    for a in 0..n {
        for b in a + 1..n {
            let v = nijenhuis(m, x, s, &e(a), &e(b))?;
            worst = worst.max(crate::numeric::max_abs(&v));
        }
    }
    Ok(worst)
}
