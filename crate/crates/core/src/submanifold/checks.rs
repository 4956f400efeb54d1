use std::fmt;

use serde::Serialize;

use super::immersion::{frame_at, unit, Frame, Immersion, LeeSplit};
use super::induced::induced_manifold;
use crate::error::Result;
use crate::hypercomplex::{class_residuals, ClassResiduals, ClassVerdict};
use crate::manifold::{lee_forms, nabla_j, point_geometry, ChartManifold, Structure};
use crate::numeric::{dot, max_abs};
use crate::policy::{normalized_residual, Tolerances};

/// Collects paired vectors and reports one normalized residual.
#[derive(Default)]
struct Pairs {
    lhs: Vec<f64>,
    rhs: Vec<f64>,
}

impl Pairs {
    fn push(&mut self, l: &[f64], r: &[f64]) {
        self.lhs.extend_from_slice(l);
        self.rhs.extend_from_slice(r);
    }

    fn residual(&self) -> f64 {
        normalized_residual(&self.lhs, &self.rhs)
    }
}

fn lin(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let n = terms[0].1.len();
    (0..n).map(|i| terms.iter().map(|(c, v)| c * v[i]).sum()).collect()
}

fn coefficient(s: Structure, n: usize) -> f64 {
    s.lee_coefficient(n)
}

/// Residuals of the six submanifold identities of a `𝒲` ambient, plus the
/// two intermediate relations for `h` under the structures.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Theorem31Residuals {
    /// `h(X,Y) = c_α g(X,Y) J_α(p_α^⊥)`
    pub h_lee: f64,
    /// `(∇_X J_1)Y` on the submanifold.
    pub nabla_j1: f64,
    /// `(∇_X J_α)Y`, α = 2, 3.
    pub nabla_j23: f64,
    /// `A_{J_1N}X`
    pub shape_j1: f64,
    /// `A_{J_αN}X`, α = 2, 3.
    pub shape_j23: f64,
    /// `D_X J_αN = J_α D_X N`
    pub normal_connection: f64,
    /// `h(J_1X, J_1Y) + h(X,Y) = (1/(2n-1)) g(X,Y) J_1(p_1^⊥)`
    pub h_j1: f64,
    /// `h(J_αX, J_αY) = -h(X,Y)`, α = 2, 3.
    pub h_j23: f64,
}

impl Theorem31Residuals {
    /// The six headline identities in order.
    pub fn headline(&self) -> [(&'static str, f64); 6] {
        [
            ("h-lee", self.h_lee),
            ("nabla-j1", self.nabla_j1),
            ("nabla-j23", self.nabla_j23),
            ("shape-j1", self.shape_j1),
            ("shape-j23", self.shape_j23),
            ("normal-connection", self.normal_connection),
        ]
    }

    pub fn probes(&self) -> [(&'static str, f64); 2] {
        [("h-j1", self.h_j1), ("h-j23", self.h_j23)]
    }

    pub fn max(&self) -> f64 {
        self.headline().iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }

    fn merge(&mut self, o: &Theorem31Residuals) {
        self.h_lee = self.h_lee.max(o.h_lee);
        self.nabla_j1 = self.nabla_j1.max(o.nabla_j1);
        self.nabla_j23 = self.nabla_j23.max(o.nabla_j23);
        self.shape_j1 = self.shape_j1.max(o.shape_j1);
        self.shape_j23 = self.shape_j23.max(o.shape_j23);
        self.normal_connection = self.normal_connection.max(o.normal_connection);
        self.h_j1 = self.h_j1.max(o.h_j1);
        self.h_j23 = self.h_j23.max(o.h_j23);
    }
}

/// Evaluates every identity at one source point over the full coordinate
/// tangent frame and the normal basis. Left-hand sides come from the
/// geometric engine, right-hand sides are assembled from the ambient Lee
/// data; both are compared in ambient coordinates.
pub fn theorem31_residuals(imm: &Immersion, p: &[f64]) -> Result<Theorem31Residuals> {
    let frame = frame_at(imm, p)?;
    let induced = induced_manifold(imm)?;
    theorem31_at(imm, &induced, &frame)
}

fn theorem31_at(imm: &Immersion, induced: &ChartManifold, frame: &Frame) -> Result<Theorem31Residuals> {
    let k = frame.source_dim();
    let n = frame.n();
    let amb = &frame.ambient;
    let lee: LeeSplit = frame.lee_split();
    let h = frame.h_basis();
    let e: Vec<Vec<f64>> = (0..k).map(|i| unit(k, i)).collect();
    let te: Vec<Vec<f64>> = (0..k).map(|i| frame.tangent.column(i)).collect();
    let theta = |s: Structure, v: &[f64]| dot(&lee.theta[s.index()], v);
    let mut out = Theorem31Residuals::default();

    let jp_bot = Structure::ALL.map(|s| amb.apply(s, &lee.p_bot[s.index()]));
    let mut h_pairs = Pairs::default();
    for i in 0..k {
        for j in 0..k {
            let gij = frame.g_ind[(i, j)];
            for s in Structure::ALL {
                let c = coefficient(s, n) * gij;
                h_pairs.push(&h[i * k + j], &lin(&[(c, &jp_bot[s.index()])]));
            }
        }
    }
    out.h_lee = h_pairs.residual();

    // induced ∇J through the pullback manifold
    let ipg = point_geometry(induced, &frame.point)?;
    let mut j1_pairs = Pairs::default();
    let mut j23_pairs = Pairs::default();
    for s in Structure::ALL {
        let nj = nabla_j(&ipg, s);
        let c = coefficient(s, n);
        let sign = if s.is_hermitian() { -1.0 } else { 1.0 };
        let ptop = &lee.p_top[s.index()];
        let jptop = amb.apply(s, ptop);
        for i in 0..k {
            let jx = amb.apply(s, &te[i]);
            for j in 0..k {
                let col: Vec<f64> = (0..k).map(|r| nj[(i, r, j)]).collect();
                let lhs = frame.push(&col);
                let jy = amb.apply(s, &te[j]);
                let rhs = lin(&[
                    (c * frame.g_ind[(i, j)], ptop),
                    (c * sign * theta(s, &te[j]), &te[i]),
                    (c * amb.inner(&te[i], &jy), &jptop),
                    (c * sign * theta(s, &jy), &jx),
                ]);
                if s.is_hermitian() {
                    j1_pairs.push(&lhs, &rhs);
                } else {
                    j23_pairs.push(&lhs, &rhs);
                }
            }
        }
    }
    out.nabla_j1 = j1_pairs.residual();
    out.nabla_j23 = j23_pairs.residual();

    let mut shape1_pairs = Pairs::default();
    let mut shape23_pairs = Pairs::default();
    for f in 0..frame.codim() {
        let nv = frame.normal_vector(f);
        let an: Vec<Vec<f64>> = e
            .iter()
            .map(|x| frame.shape_operator(&nv, x).map(|a| frame.push(&a)))
            .collect::<Result<_>>()?;
        for s in Structure::ALL {
            let jn = amb.apply(s, &nv);
            let c = coefficient(s, n);
            let sign = if s.is_hermitian() { 1.0 } else { -1.0 };
            for i in 0..k {
                let lhs = frame.push(&frame.shape_operator(&jn, &e[i])?);
                let j_an = amb.apply(s, &an[i]);
                let jx = amb.apply(s, &te[i]);
                let rhs = lin(&[
                    (1.0, &j_an),
                    (sign * c * theta(s, &nv), &te[i]),
                    (sign * c * theta(s, &jn), &jx),
                ]);
                if s.is_hermitian() {
                    shape1_pairs.push(&lhs, &rhs);
                } else {
                    shape23_pairs.push(&lhs, &rhs);
                }
            }
        }
    }
    out.shape_j1 = shape1_pairs.residual();
    out.shape_j23 = shape23_pairs.residual();

    let mut conn_pairs = Pairs::default();
    for f in 0..frame.codim() {
        let nf = imm.normal_field(f);
        let dn: Vec<Vec<f64>> = e
            .iter()
            .map(|x| frame.normal_derivative(&nf, x).map(|(_, d)| d))
            .collect::<Result<_>>()?;
        for s in Structure::ALL {
            let jnf = imm.structure_normal_field(s, f);
            for i in 0..k {
                let (_, lhs) = frame.normal_derivative(&jnf, &e[i])?;
                conn_pairs.push(&lhs, &amb.apply(s, &dn[i]));
            }
        }
    }
    out.normal_connection = conn_pairs.residual();

    let je = Structure::ALL.map(|s| e.iter().map(|x| frame.apply_tangent(s, x)).collect::<Vec<_>>());
    let mut hj1_pairs = Pairs::default();
    let mut hj23_pairs = Pairs::default();
    for i in 0..k {
        for j in 0..k {
            for s in Structure::ALL {
                let jj = &je[s.index()];
                let hjj = frame.second_fundamental(&jj[i], &jj[j]);
                let hij = &h[i * k + j];
                if s.is_hermitian() {
                    let c = frame.g_ind[(i, j)] / (2.0 * n as f64 - 1.0);
                    hj1_pairs.push(&lin(&[(1.0, &hjj), (1.0, hij)]), &lin(&[(c, &jp_bot[0])]));
                } else {
                    hj23_pairs.push(&hjj, &lin(&[(-1.0, hij)]));
                }
            }
        }
    }
    out.h_j1 = hj1_pairs.residual();
    out.h_j23 = hj23_pairs.residual();
    Ok(out)
}

/// Worst residuals over a point set.
pub fn theorem31_over(imm: &Immersion, points: &[Vec<f64>]) -> Result<(Theorem31Residuals, Vec<Theorem31Residuals>)> {
    let induced = induced_manifold(imm)?;
    let mut worst = Theorem31Residuals::default();
    let mut per_point = Vec::with_capacity(points.len());
    for p in points {
        let frame = frame_at(imm, p)?;
        let r = theorem31_at(imm, &induced, &frame)?;
        worst.merge(&r);
        per_point.push(r);
    }
    Ok((worst, per_point))
}

/// Induced Lee forms against the scaled ambient Lee forms on `TM`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeeRestriction {
    /// `θ_1 = ((2m-1)/(2n-1)) θ̄_1`, `θ_α = (m/n) θ̄_α` on `TM`, worst per α.
    pub residual: [f64; 3],
    /// Largest `|θ̄_α|` on the tangent frame.
    pub ambient_on_tangent: [f64; 3],
    /// Largest `|θ̄_α|` on the normal basis.
    pub ambient_on_normal: [f64; 3],
    /// Largest induced `|θ_α|`.
    pub induced_theta: [f64; 3],
    pub per_point: Vec<[f64; 3]>,
    pub induced: ClassResiduals,
}

impl LeeRestriction {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }
}

pub fn lee_restriction_check(imm: &Immersion, points: &[Vec<f64>], tol: &Tolerances) -> Result<LeeRestriction> {
    let induced = induced_manifold(imm)?;
    let (m, n) = (imm.m() as f64, imm.ambient().n() as f64);
    let ratio = [(2.0 * m - 1.0) / (2.0 * n - 1.0), m / n, m / n];
    let mut out = LeeRestriction {
        residual: [0.0; 3],
        ambient_on_tangent: [0.0; 3],
        ambient_on_normal: [0.0; 3],
        induced_theta: [0.0; 3],
        per_point: Vec::with_capacity(points.len()),
        induced: class_residuals(&induced, points, tol)?,
    };
    for p in points {
        let frame = frame_at(imm, p)?;
        let ambient = lee_forms(&frame.ambient);
        let ipg = point_geometry(&induced, p)?;
        let own = lee_forms(&ipg);
        let mut row = [0.0; 3];
        for a in 0..3 {
            let restricted = frame.tangent.transpose().mul_vec(&ambient.theta[a])?;
            let scaled: Vec<f64> = restricted.iter().map(|v| ratio[a] * v).collect();
            row[a] = normalized_residual(&own.theta[a], &scaled);
            out.residual[a] = out.residual[a].max(row[a]);
            out.ambient_on_tangent[a] = out.ambient_on_tangent[a].max(max_abs(&restricted));
            let on_normal = frame.normal.transpose().mul_vec(&ambient.theta[a])?;
            out.ambient_on_normal[a] = out.ambient_on_normal[a].max(max_abs(&on_normal));
            out.induced_theta[a] = out.induced_theta[a].max(max_abs(&own.theta[a]));
        }
        out.per_point.push(row);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Umbilicity {
    TotallyGeodesic,
    TotallyUmbilical,
    Neither,
    Indeterminate,
}

impl fmt::Display for Umbilicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Umbilicity::TotallyGeodesic => "TotallyGeodesic",
            Umbilicity::TotallyUmbilical => "TotallyUmbilical",
            Umbilicity::Neither => "Neither",
            Umbilicity::Indeterminate => "Indeterminate",
        };
        f.write_str(s)
    }
}

/// Comparison of the umbilicity verdict with the Lee forms on `TM⊥`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub ambient_class: ClassVerdict,
    /// Verdict implied by `θ̄_α` on the normal bundle; `None` when the
    /// ambient is neither `K` nor `W` or the band is ambiguous.
    pub predicted: Option<Umbilicity>,
    pub consistent: Option<bool>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UmbilicityReport {
    pub verdict: Umbilicity,
    /// Worst `max |h(e_i,e_j)| / (1 + max |g_ind|)`.
    pub h_max: f64,
    /// Worst normalized residual of `h - g ⊗ C`.
    pub umbilic_residual: f64,
    /// Largest component of `C`.
    pub c_max: f64,
    /// Worst residual of `C = c_α J_α(p_α^⊥)`.
    pub c_relation: f64,
    pub per_point_h: Vec<f64>,
    pub per_point_umbilic: Vec<f64>,
    pub cross_check: CrossCheck,
}

pub fn umbilicity_classify(imm: &Immersion, points: &[Vec<f64>], tol: &Tolerances) -> Result<UmbilicityReport> {
    let mut h_max = 0.0_f64;
    let mut umb = 0.0_f64;
    let mut c_max = 0.0_f64;
    let mut c_rel = 0.0_f64;
    let mut theta_normal = [0.0_f64; 3];
    let mut per_point_h = Vec::with_capacity(points.len());
    let mut per_point_umbilic = Vec::with_capacity(points.len());
    let mut images = Vec::with_capacity(points.len());
    for p in points {
        let frame = frame_at(imm, p)?;
        let k = frame.source_dim();
        let n = frame.n();
        let h = frame.h_basis();
        let c = frame.mean_curvature();
        let hn = h.iter().map(|v| max_abs(v)).fold(0.0, f64::max) / (1.0 + frame.g_ind.max_abs());
        let mut pairs = Pairs::default();
        for i in 0..k {
            for j in 0..k {
                let gc: Vec<f64> = c.iter().map(|v| frame.g_ind[(i, j)] * v).collect();
                pairs.push(&h[i * k + j], &gc);
            }
        }
        let r = pairs.residual();
        let lee = frame.lee_split();
        for s in Structure::ALL {
            let target: Vec<f64> = frame
                .ambient
                .apply(s, &lee.p_bot[s.index()])
                .iter()
                .map(|v| coefficient(s, n) * v)
                .collect();
            c_rel = c_rel.max(normalized_residual(&c, &target));
            let on_normal = frame.normal.transpose().mul_vec(&lee.theta[s.index()])?;
            theta_normal[s.index()] = theta_normal[s.index()].max(max_abs(&on_normal));
        }
        h_max = h_max.max(hn);
        umb = umb.max(r);
        c_max = c_max.max(max_abs(&c));
        per_point_h.push(hn);
        per_point_umbilic.push(r);
        images.push(frame.image);
    }
    let verdict = if h_max < tol.hold {
        Umbilicity::TotallyGeodesic
    } else if umb < tol.hold && c_max > tol.fail {
        Umbilicity::TotallyUmbilical
    } else if umb > tol.fail {
        Umbilicity::Neither
    } else {
        Umbilicity::Indeterminate
    };
    let ambient_class = class_residuals(imm.ambient(), &images, tol)?.verdict;
    let cross_check = cross_check(ambient_class, verdict, theta_normal, tol);
    Ok(UmbilicityReport {
        verdict,
        h_max,
        umbilic_residual: umb,
        c_max,
        c_relation: c_rel,
        per_point_h,
        per_point_umbilic,
        cross_check,
    })
}

fn cross_check(ambient_class: ClassVerdict, verdict: Umbilicity, theta_normal: [f64; 3], tol: &Tolerances) -> CrossCheck {
    if !matches!(ambient_class, ClassVerdict::K | ClassVerdict::W) {
        return CrossCheck {
            ambient_class,
            predicted: None,
            consistent: None,
            note: format!("not applicable: ambient class {ambient_class}"),
        };
    }
    let predicted = if theta_normal.iter().all(|&t| tol.is_nonzero(t)) {
        Some(Umbilicity::TotallyUmbilical)
    } else if theta_normal.iter().all(|&t| tol.is_zero(t)) {
        Some(Umbilicity::TotallyGeodesic)
    } else {
        None
    };
    match predicted {
        Some(pv) => {
            let ok = pv == verdict;
            CrossCheck {
                ambient_class,
                predicted,
                consistent: Some(ok),
                note: if ok {
                    "normal Lee forms agree with the verdict".into()
                } else {
                    format!("inconsistent: normal Lee forms predict {pv}, verdict {verdict}")
                },
            }
        }
        None => CrossCheck {
            ambient_class,
            predicted: None,
            consistent: None,
            note: "normal Lee forms inside the guard band".into(),
        },
    }
}
