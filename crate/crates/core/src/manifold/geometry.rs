use std::ops::{Index, IndexMut};

use super::chart::{ChartManifold, Structure};
use crate::error::{Error, Result};
use crate::numeric::{inertia, Dual1, Matrix};
use crate::policy::normalized_residual;

/// Cube array indexed `[(a, b, c)]`, all axes of the same length.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Self { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The matrix `[(b, c)]` for fixed first index `a`.
    pub fn slice(&self, a: usize) -> Matrix<f64> {
        Matrix::from_fn(self.n, self.n, |b, c| self[(a, b, c)])
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (a, b, c): (usize, usize, usize)) -> &f64 {
        &self.data[(a * self.n + b) * self.n + c]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (a, b, c): (usize, usize, usize)) -> &mut f64 {
        &mut self.data[(a * self.n + b) * self.n + c]
    }
}

/// Metric, connection and structure data at one chart point, in the
/// coordinate frame.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub point: Vec<f64>,
    pub g: Matrix<f64>,
    pub g_inv: Matrix<f64>,
    /// `dg[(k, i, j)] = ∂_k g_ij`
    pub dg: Tensor3,
    /// `gamma[(k, i, j)] = Γ^k_ij`
    pub gamma: Tensor3,
    pub j: [Matrix<f64>; 3],
    /// `dj[α][(k, i, j)] = ∂_k (J_α)^i_j`
    pub dj: [Tensor3; 3],
}

const METRIC_SYMMETRY_TOL: f64 = 1e-12;

/// Splits a dual matrix into its value and its partial derivatives.
pub(crate) fn jet(m: &Matrix<Dual1>, dim: usize) -> (Matrix<f64>, Tensor3) {
    let value = m.values();
    let mut d = Tensor3::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let entry = &m[(i, j)];
            for k in 0..dim {
                d[(k, i, j)] = entry.d(k);
            }
        }
    }
    (value, d)
}

/// Christoffel symbols of the second kind from the metric jet (Koszul formula).
pub fn christoffel(g_inv: &Matrix<f64>, dg: &Tensor3) -> Tensor3 {
    let n = dg.len();
    let mut gamma = Tensor3::zeros(n);
    for i in 0..n {
        for j in i..n {
            // first kind: [ij, l] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
            let lowered: Vec<f64> = (0..n)
                .map(|l| 0.5 * (dg[(i, j, l)] + dg[(j, i, l)] - dg[(l, i, j)]))
                .collect();
            for k in 0..n {
                let v: f64 = (0..n).map(|l| g_inv[(k, l)] * lowered[l]).sum();
                gamma[(k, i, j)] = v;
                gamma[(k, j, i)] = v;
            }
        }
    }
    gamma
}

/// Builds the pointwise geometry bundle of `m` at `x`.
pub fn point_geometry(m: &ChartManifold, x: &[f64]) -> Result<PointGeometry> {
    m.check_point(x)?;
    let dim = m.dim();
    let seeds = Dual1::variables(x);
    let (g, dg) = jet(&m.metric_field().eval(&seeds)?, dim);
    if !g.is_finite() {
        return Err(Error::Domain(format!("non-finite metric at {x:?}")));
    }
    if g.asymmetry() > METRIC_SYMMETRY_TOL * g.max_abs().max(1.0) {
        return Err(Error::Domain(format!(
            "metric not symmetric at {x:?} (asymmetry {:e})",
            g.asymmetry()
        )));
    }
    let g_inv = match g.inverse() {
        Ok(inv) => inv,
        Err(Error::SingularMatrix { .. }) => {
            return Err(Error::SingularMetric { point: x.to_vec() })
        }
        Err(e) => return Err(e),
    };
    let sig = inertia(&g)?;
    if !sig.is_neutral(dim / 2) {
        return Err(Error::SignatureViolation {
            plus: sig.plus,
            minus: sig.minus,
            zero: sig.zero,
            expected: dim / 2,
            point: x.to_vec(),
        });
    }
    let gamma = christoffel(&g_inv, &dg);
    let mut js = Vec::with_capacity(3);
    let mut djs = Vec::with_capacity(3);
    for s in Structure::ALL {
        let (jv, dj) = jet(&m.structure_field(s).eval(&seeds)?, dim);
        js.push(jv);
        djs.push(dj);
    }
    let [j1, j2, j3]: [Matrix<f64>; 3] = js.try_into().expect("three structures");
    let [d1, d2, d3]: [Tensor3; 3] = djs.try_into().expect("three structures");
    Ok(PointGeometry {
        point: x.to_vec(),
        g,
        g_inv,
        dg,
        gamma,
        j: [j1, j2, j3],
        dj: [d1, d2, d3],
    })
}

impl PointGeometry {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn n(&self) -> usize {
        self.dim() / 4
    }

    pub fn structure(&self, s: Structure) -> &Matrix<f64> {
        &self.j[s.index()]
    }

    /// `J_α v`.
    pub fn apply(&self, s: Structure, v: &[f64]) -> Vec<f64> {
        self.j[s.index()].mul_vec(v).expect("vector of chart dimension")
    }

    /// `g(a, b)`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        crate::numeric::bilinear(&self.g, a, b)
    }

    /// Lowers an index: `v ↦ g(v, ·)`.
    pub fn lower(&self, v: &[f64]) -> Vec<f64> {
        self.g.mul_vec(v).expect("vector of chart dimension")
    }

    /// Raises an index with `g⁻¹`.
    pub fn raise(&self, covector: &[f64]) -> Vec<f64> {
        self.g_inv.mul_vec(covector).expect("covector of chart dimension")
    }

    /// `Γ(a, b)^k = Γ^k_ij a^i b^j`.
    pub fn gamma_contract(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for (i, &ai) in a.iter().enumerate().filter(|(_, &ai)| ai != 0.0) {
                    for (j, &bj) in b.iter().enumerate() {
                        acc += self.gamma[(k, i, j)] * ai * bj;
                    }
                }
                acc
            })
            .collect()
    }
}

/// `(∇_i J_α)^k_j` stored as `[(i, k, j)]`.
pub fn nabla_j(pg: &PointGeometry, s: Structure) -> Tensor3 {
    let n = pg.dim();
    let j = pg.structure(s);
    let dj = &pg.dj[s.index()];
    let gamma = &pg.gamma;
    Tensor3::from_fn(n, |i, k, c| {
        let mut v = dj[(i, k, c)];
        for l in 0..n {
            v += gamma[(k, i, l)] * j[(l, c)] - gamma[(l, i, c)] * j[(k, l)];
        }
        v
    })
}

/// `F_α(e_i, e_j, e_m) = g((∇_{e_i} J_α) e_j, e_m)` stored as `[(i, j, m)]`.
pub fn fundamental_tensor(pg: &PointGeometry, s: Structure) -> Tensor3 {
    let n = pg.dim();
    let nj = nabla_j(pg, s);
    Tensor3::from_fn(n, |i, j, m| (0..n).map(|k| pg.g[(m, k)] * nj[(i, k, j)]).sum())
}

/// `F_α(X, Y, Z)` for coordinate vectors.
pub fn fundamental_f(pg: &PointGeometry, s: Structure, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    contract3(&fundamental_tensor(pg, s), x, y, z)
}

/// Full contraction `T_abc x^a y^b z^c`.
pub fn contract3(t: &Tensor3, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let n = t.len();
    let mut acc = 0.0;
    for a in 0..n {
        if x[a] == 0.0 {
            continue;
        }
        for b in 0..n {
            if y[b] == 0.0 {
                continue;
            }
            for c in 0..n {
                acc += t[(a, b, c)] * x[a] * y[b] * z[c];
            }
        }
    }
    acc
}

/// Lee forms `θ_α` and their metric duals `p_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeeData {
    pub theta: [Vec<f64>; 3],
    pub p: [Vec<f64>; 3],
    /// Normalized residual of `J_α p_α = (2n/(2n-1)) J_1 p_1`, worst over α = 2, 3.
    pub p_relation_residual: f64,
}

impl LeeData {
    pub fn theta(&self, s: Structure) -> &[f64] {
        &self.theta[s.index()]
    }

    pub fn p(&self, s: Structure) -> &[f64] {
        &self.p[s.index()]
    }

    /// `θ_α(v)`.
    pub fn apply(&self, s: Structure, v: &[f64]) -> f64 {
        crate::numeric::dot(&self.theta[s.index()], v)
    }
}

/// `θ(Z) = g^{ij} F(e_i, e_j, Z)` for a fundamental tensor.
pub fn trace_lee(pg: &PointGeometry, f: &Tensor3) -> Vec<f64> {
    let n = pg.dim();
    (0..n)
        .map(|m| {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += pg.g_inv[(i, j)] * f[(i, j, m)];
                }
            }
            acc
        })
        .collect()
}

/// `(θ ∘ J)_i = θ_l J^l_i`.
pub fn compose_covector(theta: &[f64], j: &Matrix<f64>) -> Vec<f64> {
    let n = theta.len();
    (0..n).map(|i| (0..n).map(|l| theta[l] * j[(l, i)]).sum()).collect()
}

pub fn lee_forms(pg: &PointGeometry) -> LeeData {
    let theta: [Vec<f64>; 3] =
        Structure::ALL.map(|s| trace_lee(pg, &fundamental_tensor(pg, s)));
    let p: [Vec<f64>; 3] = [0, 1, 2].map(|a| pg.raise(&theta[a]));
    let nf = pg.n() as f64;
    let c = 2.0 * nf / (2.0 * nf - 1.0);
    let j1p1: Vec<f64> = pg.apply(Structure::J1, &p[0]).iter().map(|v| c * v).collect();
    let p_relation_residual = [Structure::J2, Structure::J3]
        .iter()
        .map(|&s| normalized_residual(&pg.apply(s, &p[s.index()]), &j1p1))
        .fold(0.0, f64::max);
    LeeData {
        theta,
        p,
        p_relation_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::field::{ConstantField, ExprField, FieldRef};
    use std::sync::Arc;

    fn constant(m: Matrix<f64>) -> FieldRef {
        Arc::new(ConstantField::new(m).unwrap())
    }

    // J_1 = rotation block structure on R^4 with g = diag(-1,-1,1,1),
    // enough for connection tests that do not involve the structures.
    fn toy(metric: FieldRef) -> ChartManifold {
        let j = Matrix::from_rows(&[
            vec![0.0, -1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0, 0.0],
        ])
        .unwrap();
        ChartManifold::new("toy", metric, [constant(j.clone()), constant(j.clone()), constant(j)])
            .unwrap()
    }

    #[test]
    fn flat_metric_has_zero_connection() {
        let m = toy(constant(Matrix::diagonal(&[-1.0, -1.0, 1.0, 1.0])));
        let pg = point_geometry(&m, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(pg.gamma.max_abs(), 0.0);
        assert_eq!(nabla_j(&pg, Structure::J1).max_abs(), 0.0);
    }

    #[test]
    fn christoffel_symmetric_in_lower_indices() {
        let rows = vec![
            vec!["-exp(x1)".into(), "0".into(), "0".into(), "0".into()],
            vec!["0".into(), "-1 - x3*x3".into(), "0".into(), "0".into()],
            vec!["0".into(), "0".into(), "1".into(), "0.1*x2".into()],
            vec!["0".into(), "0".into(), "0.1*x2".into(), "cosh(x4)".into()],
        ];
        let m = toy(Arc::new(ExprField::parse(&rows).unwrap()));
        let pg = point_geometry(&m, &[0.3, -0.2, 0.5, 0.1]).unwrap();
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(pg.gamma[(k, i, j)], pg.gamma[(k, j, i)]);
                }
            }
        }
    }

    #[test]
    fn signature_violation_reported() {
        let m = toy(constant(Matrix::diagonal(&[1.0, 1.0, 1.0, -1.0])));
        assert!(matches!(
            point_geometry(&m, &[0.0; 4]),
            Err(Error::SignatureViolation { plus: 3, minus: 1, .. })
        ));
    }

    #[test]
    fn singular_metric_reported() {
        let m = toy(constant(Matrix::diagonal(&[1.0, 0.0, 1.0, -1.0])));
        assert!(matches!(
            point_geometry(&m, &[0.0; 4]),
            Err(Error::SingularMetric { .. })
        ));
    }

    #[test]
    fn asymmetric_metric_rejected() {
        let mut g = Matrix::diagonal(&[-1.0, -1.0, 1.0, 1.0]);
        g[(0, 1)] = 0.5;
        let m = toy(constant(g));
        assert!(matches!(point_geometry(&m, &[0.0; 4]), Err(Error::Domain(_))));
    }
}
