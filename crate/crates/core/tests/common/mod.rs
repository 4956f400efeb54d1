//! Finite-difference oracle shared by the integration tests.
//!
//! Everything here is recomputed from plain `f64` evaluations of the metric,
//! the structures and the immersion map; no dual numbers are involved.
#![allow(dead_code)]

use norden_geom::manifold::{ChartManifold, Structure};
use norden_geom::numeric::Matrix;
use norden_geom::submanifold::Immersion;

pub const FD_STEP: f64 = 1e-6;
/// Step for second differences of the immersion map.
pub const FD_STEP2: f64 = 1e-4;
pub const FD_REL_TOL: f64 = 1e-5;

/// `|a - b|_∞ / max(1, |b|_∞)`
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff = a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = b.iter().fold(1.0_f64, |m, y| m.max(y.abs()));
    diff / scale
}

fn shifted(x: &[f64], k: usize, h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[k] += h;
    y
}

/// `d[k][i][j] = ∂_k M_ij` by central differences.
fn fd_matrix(f: impl Fn(&[f64]) -> Matrix<f64>, x: &[f64]) -> Vec<Matrix<f64>> {
    (0..x.len())
        .map(|k| {
            let p = f(&shifted(x, k, FD_STEP));
            let m = f(&shifted(x, k, -FD_STEP));
            Matrix::from_fn(p.rows(), p.cols(), |i, j| (p[(i, j)] - m[(i, j)]) / (2.0 * FD_STEP))
        })
        .collect()
}

pub struct FdGeometry {
    pub g: Matrix<f64>,
    pub g_inv: Matrix<f64>,
    /// `gamma[k][i][j] = Γ^k_ij`
    pub gamma: Vec<Vec<Vec<f64>>>,
    pub j: Vec<Matrix<f64>>,
    pub dj: Vec<Vec<Matrix<f64>>>,
}

pub fn fd_geometry(m: &ChartManifold, x: &[f64]) -> FdGeometry {
    let n = x.len();
    let metric = |y: &[f64]| m.metric_at(y).unwrap();
    let g = metric(x);
    let g_inv = g.inverse().unwrap();
    let dg = fd_matrix(metric, x);
    let mut gamma = vec![vec![vec![0.0; n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                gamma[k][i][j] = (0..n)
                    .map(|l| 0.5 * g_inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]))
                    .sum();
            }
        }
    }
    let j = Structure::ALL.iter().map(|&s| m.structure_at(s, x).unwrap()).collect();
    let dj = Structure::ALL
        .iter()
        .map(|&s| fd_matrix(|y| m.structure_at(s, y).unwrap(), x))
        .collect();
    FdGeometry { g, g_inv, gamma, j, dj }
}

impl FdGeometry {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// `F_α(e_a, e_b, e_c) = g((∇_a J_α) e_b, e_c)`
    pub fn fundamental(&self, alpha: usize, a: usize, b: usize, c: usize) -> f64 {
        let n = self.dim();
        let (j, dj, gm) = (&self.j[alpha], &self.dj[alpha][a], &self.gamma);
        let nabla = |i: usize| -> f64 {
            let mut v = dj[(i, b)];
            for l in 0..n {
                v += gm[i][a][l] * j[(l, b)] - gm[l][a][b] * j[(i, l)];
            }
            v
        };
        (0..n).map(|i| self.g[(i, c)] * nabla(i)).sum()
    }

    /// `θ_α(e_c) = g^{ab} F_α(e_a, e_b, e_c)`
    pub fn theta(&self, alpha: usize) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|c| {
                let mut s = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        if self.g_inv[(a, b)] != 0.0 {
                            s += self.g_inv[(a, b)] * self.fundamental(alpha, a, b, c);
                        }
                    }
                }
                s
            })
            .collect()
    }

    pub fn gamma_flat(&self) -> Vec<f64> {
        self.gamma.iter().flatten().flatten().copied().collect()
    }
}

/// Second fundamental form on the coordinate frame of the source, row-major,
/// each entry an ambient vector.
pub fn fd_second_fundamental(imm: &Immersion, p: &[f64]) -> Vec<Vec<f64>> {
    let k = p.len();
    let map = |q: &[f64]| imm.map(q).unwrap();
    let image = map(p);
    let d = image.len();
    let t: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            let (pp, mm) = (map(&shifted(p, a, FD_STEP)), map(&shifted(p, a, -FD_STEP)));
            (0..d).map(|i| (pp[i] - mm[i]) / (2.0 * FD_STEP)).collect()
        })
        .collect();
    let amb = fd_geometry(imm.ambient(), &image);
    let g = &amb.g;
    let g_ind = Matrix::from_fn(k, k, |a, b| bilinear(g, &t[a], &t[b]));
    let g_ind_inv = g_ind.inverse().unwrap();
    let h2 = FD_STEP2;
    let mut out = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let corner = |sa: f64, sb: f64| map(&shifted(&shifted(p, a, sa * h2), b, sb * h2));
            let (pp, pm, mp, mm) = (corner(1.0, 1.0), corner(1.0, -1.0), corner(-1.0, 1.0), corner(-1.0, -1.0));
            let mut v: Vec<f64> = (0..d).map(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h2 * h2)).collect();
            for (i, vi) in v.iter_mut().enumerate() {
                for l in 0..d {
                    for r in 0..d {
                        *vi += amb.gamma[i][l][r] * t[a][l] * t[b][r];
                    }
                }
            }
            // subtract the tangential part T G⁻¹ Tᵀ g v
            let tg: Vec<f64> = (0..k).map(|c| bilinear(g, &t[c], &v)).collect();
            let coeff: Vec<f64> = (0..k).map(|c| (0..k).map(|e| g_ind_inv[(c, e)] * tg[e]).sum()).collect();
            for i in 0..d {
                v[i] -= (0..k).map(|c| t[c][i] * coeff[c]).sum::<f64>();
            }
            out.push(v);
        }
    }
    out
}

fn bilinear(g: &Matrix<f64>, a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[i] * g[(i, j)] * b[j];
        }
    }
    s
}
