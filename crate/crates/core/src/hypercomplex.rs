//! Structure axioms and the 𝒦 / 𝒲 classification.
//!
//! Verdicts are local: they certify the identities at the sampled points
//! only.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{
    compose_covector, fundamental_tensor, lee_forms, point_geometry, ChartManifold,
    ConformalField, PointGeometry, Structure, Tensor3,
};
use crate::numeric::{inertia, max_abs, Matrix};
use crate::policy::{normalized_residual, Tolerances};

/// Tolerance for the symmetry/skewness checks on the associated forms.
const ASSOC_TOL: f64 = 1e-10;

/// Worst residuals of the quaternionic relations, the metric compatibility
/// conditions and the associated bilinear forms over a point set.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StructureResiduals {
    /// `J_α² + I`, `J_α - J_βJ_γ`, `J_α + J_γJ_β` for cyclic `(α, β, γ)`.
    pub quaternionic: f64,
    /// `g(J_1X, J_1Y) - g(X, Y)`, `g(J_αX, J_αY) + g(X, Y)` for α = 2, 3.
    pub compat: f64,
    /// Skewness of `g_1` and asymmetry of `g_2, g_3`.
    pub assoc: f64,
    /// `g_1` skew, `g_2` and `g_3` symmetric of neutral signature.
    pub assoc_forms_ok: bool,
}

fn mm(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    a.matmul(b).expect("square structures of equal size")
}

fn max_diff(a: &Matrix<f64>, b: &Matrix<f64>, sign: f64) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            worst = worst.max((a[(i, j)] + sign * b[(i, j)]).abs());
        }
    }
    worst
}

pub fn structure_residuals(m: &ChartManifold, points: &[Vec<f64>]) -> Result<StructureResiduals> {
    let mut out = StructureResiduals {
        assoc_forms_ok: true,
        ..Default::default()
    };
    let dim = m.dim();
    let id = Matrix::<f64>::identity(dim);
    for x in points {
        let g = m.metric_at(x)?;
        let sig = inertia(&g)?;
        if !sig.is_neutral(dim / 2) {
            return Err(Error::SignatureViolation {
                plus: sig.plus,
                minus: sig.minus,
                zero: sig.zero,
                expected: dim / 2,
                point: x.clone(),
            });
        }
        let j = Structure::ALL.map(|s| m.structure_at(s, x));
        let [j1, j2, j3] = match j {
            [Ok(a), Ok(b), Ok(c)] => [a, b, c],
            [a, b, c] => {
                a?;
                b?;
                c?;
                unreachable!()
            }
        };
        let js = [&j1, &j2, &j3];
        let mut q = 0.0_f64;
        for a in 0..3 {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            q = q.max(max_diff(&mm(js[a], js[a]), &id, 1.0));
            q = q.max(max_diff(js[a], &mm(js[b], js[c]), -1.0));
            q = q.max(max_diff(js[a], &mm(js[c], js[b]), 1.0));
        }
        out.quaternionic = out.quaternionic.max(q);

        let mut compat = 0.0_f64;
        for (s, jm) in Structure::ALL.iter().zip(js) {
            let pulled = mm(&mm(&jm.transpose(), &g), jm);
            let sign = if s.is_hermitian() { -1.0 } else { 1.0 };
            compat = compat.max(max_diff(&pulled, &g, sign));
        }
        out.compat = out.compat.max(compat);

        // g_α(X, Y) = g(J_α X, Y) has matrix J_αᵀ g
        let mut assoc = 0.0_f64;
        for (s, jm) in Structure::ALL.iter().zip(js) {
            let ga = mm(&jm.transpose(), &g);
            if s.is_hermitian() {
                assoc = assoc.max(max_diff(&ga, &ga.transpose(), 1.0));
            } else {
                assoc = assoc.max(ga.asymmetry());
                if ga.asymmetry() <= ASSOC_TOL * ga.max_abs().max(1.0) {
                    let sig = inertia(&ga)?;
                    if !sig.is_neutral(dim / 2) {
                        out.assoc_forms_ok = false;
                    }
                }
            }
        }
        out.assoc = out.assoc.max(assoc);
        if assoc > ASSOC_TOL * g.max_abs().max(1.0) {
            out.assoc_forms_ok = false;
        }
    }
    Ok(out)
}

/// Local class verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassVerdict {
    K,
    W,
    Outside,
    Indeterminate,
}

impl fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassVerdict::K => "K",
            ClassVerdict::W => "W",
            ClassVerdict::Outside => "Outside",
            ClassVerdict::Indeterminate => "Indeterminate",
        };
        f.write_str(s)
    }
}

/// Class residuals at a single point.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PointClassResiduals {
    /// `max_α |F_α| / (1 + max |g|)`
    pub r_k: f64,
    /// Hermitian Lee-form identity for `F_1`.
    pub r_w1: f64,
    /// Norden Lee-form identities for `F_2`, `F_3`.
    pub r_w: [f64; 2],
    /// `θ_α ∘ J_α = -(2n/(2n-1)) θ_1 ∘ J_1`, worst over α = 2, 3.
    pub r_lee: f64,
    /// `J_α p_α = (2n/(2n-1)) J_1 p_1`, worst over α = 2, 3.
    pub r_cov: f64,
    /// Largest Lee-form component.
    pub theta_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassResiduals {
    pub r_k: f64,
    pub r_w1: f64,
    pub r_w: [f64; 2],
    pub r_lee: f64,
    pub r_cov: f64,
    pub theta_max: f64,
    pub verdict: ClassVerdict,
    pub per_point: Vec<PointClassResiduals>,
}

/// Residual of the Lee-form expression of `F_α` over all coordinate triples.
///
/// Hermitian (`J_1`, coefficient `1/(2(2n-1))`):
/// `F(X,Y,Z) = c[g(X,Y)θ(Z) - g(X,Z)θ(Y) - g(X,JY)θ(JZ) + g(X,JZ)θ(JY)]`.
/// Norden (`J_2, J_3`, coefficient `1/(4n)`): all signs positive.
pub fn lee_identity_residual(pg: &PointGeometry, s: Structure, f: &Tensor3, theta: &[f64]) -> f64 {
    lee_identity_residual_with(pg, s, f, theta, s.lee_coefficient(pg.n()))
}

pub(crate) fn lee_identity_residual_with(
    pg: &PointGeometry,
    s: Structure,
    f: &Tensor3,
    theta: &[f64],
    coeff: f64,
) -> f64 {
    let n = pg.dim();
    let j = pg.structure(s);
    let gj = mm(&pg.g, j);
    let theta_j = compose_covector(theta, j);
    let sign = if s.is_hermitian() { -1.0 } else { 1.0 };
    let mut lhs = Vec::with_capacity(n * n * n);
    let mut rhs = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                lhs.push(f[(a, b, c)]);
                rhs.push(
                    coeff
                        * (pg.g[(a, b)] * theta[c] + sign * pg.g[(a, c)] * theta[b]
                            + sign * gj[(a, b)] * theta_j[c]
                            + gj[(a, c)] * theta_j[b]),
                );
            }
        }
    }
    normalized_residual(&lhs, &rhs)
}

pub fn point_class_residuals(pg: &PointGeometry) -> PointClassResiduals {
    let fs = Structure::ALL.map(|s| fundamental_tensor(pg, s));
    let lee = lee_forms(pg);
    let gscale = 1.0 + pg.g.max_abs();
    let r_k = fs.iter().map(Tensor3::max_abs).fold(0.0, f64::max) / gscale;
    let r_w1 = lee_identity_residual(pg, Structure::J1, &fs[0], lee.theta(Structure::J1));
    let r_w = [Structure::J2, Structure::J3]
        .map(|s| lee_identity_residual(pg, s, &fs[s.index()], lee.theta(s)));
    let nf = pg.n() as f64;
    let c = 2.0 * nf / (2.0 * nf - 1.0);
    let t1j1: Vec<f64> = compose_covector(lee.theta(Structure::J1), pg.structure(Structure::J1))
        .iter()
        .map(|v| -c * v)
        .collect();
    let r_lee = [Structure::J2, Structure::J3]
        .iter()
        .map(|&s| normalized_residual(&compose_covector(lee.theta(s), pg.structure(s)), &t1j1))
        .fold(0.0, f64::max);
    let theta_max = lee.theta.iter().map(|t| max_abs(t)).fold(0.0, f64::max);
    PointClassResiduals {
        r_k,
        r_w1,
        r_w,
        r_lee,
        r_cov: lee.p_relation_residual,
        theta_max,
    }
}

/// Three-way verdict from aggregated residuals.
///
/// `K` when every `F_α` vanishes; `W` when the `F_α` do not vanish but all
/// Lee-form identities hold; `Outside` when the `F_α` do not vanish and some
/// identity clearly fails; otherwise `Indeterminate`.
pub fn verdict(r: &PointClassResiduals, tol: &Tolerances) -> ClassVerdict {
    let w_max = r.r_w1.max(r.r_w[0]).max(r.r_w[1]).max(r.r_lee);
    if r.r_k < tol.hold {
        ClassVerdict::K
    } else if r.r_k > tol.fail && w_max < tol.hold {
        ClassVerdict::W
    } else if r.r_k > tol.fail && w_max > tol.fail {
        ClassVerdict::Outside
    } else {
        ClassVerdict::Indeterminate
    }
}

pub fn class_residuals(m: &ChartManifold, points: &[Vec<f64>], tol: &Tolerances) -> Result<ClassResiduals> {
    let per_point = points
        .iter()
        .map(|x| point_geometry(m, x).map(|pg| point_class_residuals(&pg)))
        .collect::<Result<Vec<_>>>()?;
    let mut agg = PointClassResiduals::default();
    for p in &per_point {
        agg.r_k = agg.r_k.max(p.r_k);
        agg.r_w1 = agg.r_w1.max(p.r_w1);
        agg.r_w[0] = agg.r_w[0].max(p.r_w[0]);
        agg.r_w[1] = agg.r_w[1].max(p.r_w[1]);
        agg.r_lee = agg.r_lee.max(p.r_lee);
        agg.r_cov = agg.r_cov.max(p.r_cov);
        agg.theta_max = agg.theta_max.max(p.theta_max);
    }
    Ok(ClassResiduals {
        r_k: agg.r_k,
        r_w1: agg.r_w1,
        r_w: agg.r_w,
        r_lee: agg.r_lee,
        r_cov: agg.r_cov,
        theta_max: agg.theta_max,
        verdict: verdict(&agg, tol),
        per_point,
    })
}

/// Manifold with metric `e^{2u} g` and the same structures.
pub fn conformal_transform(m: &ChartManifold, u: &Expr) -> Result<ChartManifold> {
    if u.dim() != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "conformal factor parsed over {} coordinates, manifold has {}",
            u.dim(),
            m.dim()
        )));
    }
    let metric = ConformalField::new(m.metric_field().clone(), u.clone())?;
    let label = format!("{} conformally rescaled by exp(2*({u}))", m.label());
    m.with_metric(Arc::new(metric), label)
}
