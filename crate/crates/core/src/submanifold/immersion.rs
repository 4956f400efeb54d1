use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::manifold::{point_geometry, ChartManifold, PointGeometry, Structure};
use crate::numeric::{inertia, null_space, Dual1, Dual2, Matrix, Scalar};

/// A map `φ` from a `4m`-dimensional source chart into the ambient chart,
/// given by one expression per ambient coordinate.
#[derive(Clone)]
pub struct Immersion {
    source_dim: usize,
    components: Vec<Expr>,
    ambient: ChartManifold,
    label: String,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("source_dim", &self.source_dim)
            .field("label", &self.label)
            .field("ambient", &self.ambient)
            .finish()
    }
}

impl Immersion {
    pub fn new(ambient: ChartManifold, components: Vec<Expr>, label: impl Into<String>) -> Result<Self> {
        if components.len() != ambient.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} component expressions for a {}-dimensional ambient chart",
                components.len(),
                ambient.dim()
            )));
        }
        let source_dim = components[0].dim();
        if let Some(e) = components.iter().find(|e| e.dim() != source_dim) {
            return Err(Error::DimensionMismatch(format!(
                "component `{e}` parsed over {} source coordinates, expected {source_dim}",
                e.dim()
            )));
        }
        if source_dim == 0 || !source_dim.is_multiple_of(4) || source_dim >= ambient.dim() {
            return Err(Error::Domain(format!(
                "source dimension must be a positive multiple of 4 below {}, got {source_dim}",
                ambient.dim()
            )));
        }
        Ok(Self {
            source_dim,
            components,
            ambient,
            label: label.into(),
        })
    }

    /// Parses component expressions over `source_dim` variables.
    pub fn parse(ambient: ChartManifold, source_dim: usize, components: &[String]) -> Result<Self> {
        let exprs = components
            .iter()
            .map(|s| Expr::parse(s, source_dim))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient, exprs, "inline immersion")
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    /// Quaternionic dimension `m` of the source.
    pub fn m(&self) -> usize {
        self.source_dim / 4
    }

    pub fn ambient(&self) -> &ChartManifold {
        &self.ambient
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.source_dim {
            return Err(Error::DimensionMismatch(format!(
                "source point of length {}, expected {}",
                p.len(),
                self.source_dim
            )));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite source point {p:?}")));
        }
        Ok(())
    }

    /// `φ(p)`.
    pub fn map(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_point(p)?;
        self.components.iter().map(|e| e.evaluate(p)).collect()
    }

    /// `φ` and `dφ` over dual inputs, chaining through the input gradients,
    /// plus the plain Hessians of every component at the input values.
    pub(crate) fn tangent_jet(&self, p: &[Dual1]) -> Result<TangentJet> {
        if p.len() != self.source_dim {
            return Err(Error::BindingLength {
                expected: self.source_dim,
                found: p.len(),
            });
        }
        let k = self.source_dim;
        let values: Vec<f64> = p.iter().map(|d| d.value).collect();
        let gdim = p.iter().map(|d| d.grad.len()).max().unwrap_or(0);
        let seeds = Dual2::variables(&values);
        let comps = self
            .components
            .iter()
            .map(|e| e.evaluate(&seeds))
            .collect::<Result<Vec<_>>>()?;
        // Σ_i c_i ∂p_i
        let chain = |coeff: &dyn Fn(usize) -> f64| -> Vec<f64> {
            let mut out = vec![0.0; gdim];
            for (i, pi) in p.iter().enumerate() {
                let c = coeff(i);
                if c == 0.0 {
                    continue;
                }
                for (o, g) in out.iter_mut().zip(&pi.grad) {
                    *o += c * g;
                }
            }
            out
        };
        let mut phi = Vec::with_capacity(comps.len());
        let mut t = Matrix::<Dual1>::zeros(comps.len(), k);
        let mut hessians = Vec::with_capacity(comps.len());
        for (row, c) in comps.iter().enumerate() {
            phi.push(Dual1::new(c.value, chain(&|i| c.d(i))));
            for i in 0..k {
                t[(row, i)] = Dual1::new(c.d(i), chain(&|j| c.d2(i, j)));
            }
            hessians.push(c.hessian(k));
        }
        Ok(TangentJet { phi, t, hessians })
    }

    /// Normal basis over dual inputs, built the same way as in
    /// [`frame_at`], so its derivatives are those of the frame's basis.
    pub fn normal_basis_dual(&self, p: &[Dual1]) -> Result<Matrix<Dual1>> {
        let jet = self.tangent_jet(p)?;
        let g = self.ambient.metric_field().eval(&jet.phi)?;
        let a = jet.t.transpose().matmul(&g)?;
        let (_, basis) = null_space(&a);
        Ok(Matrix::from_columns(self.ambient.dim(), &basis))
    }

    /// The `k`-th normal basis field as a dual-valued closure.
    pub fn normal_field(&self, k: usize) -> impl Fn(&[Dual1]) -> Result<Vec<Dual1>> + '_ {
        move |p: &[Dual1]| Ok(self.normal_basis_dual(p)?.column(k))
    }

    /// `J_α N_k` along the submanifold.
    pub fn structure_normal_field(&self, s: Structure, k: usize) -> impl Fn(&[Dual1]) -> Result<Vec<Dual1>> + '_ {
        move |p: &[Dual1]| {
            let jet = self.tangent_jet(p)?;
            let j = self.ambient.structure_field(s).eval(&jet.phi)?;
            let n = self.normal_basis_dual(p)?.column(k);
            j.mul_vec(&n)
        }
    }
}

pub(crate) struct TangentJet {
    pub phi: Vec<Dual1>,
    pub t: Matrix<Dual1>,
    pub hessians: Vec<Matrix<f64>>,
}

/// Tangent/normal frame of an immersion at one source point.
///
/// Tangent vectors are given in source coordinates, normal vectors in
/// ambient coordinates. The normal basis is the raw complement from the
/// elimination; all index gymnastics go through the Gram inverses.
#[derive(Clone, Debug)]
pub struct Frame {
    pub point: Vec<f64>,
    pub image: Vec<f64>,
    /// `dφ`, ambient × source
    pub tangent: Matrix<f64>,
    /// Hessian of each ambient component of `φ`.
    pub hessians: Vec<Matrix<f64>>,
    /// ambient × (ambient − source), columns span the `g`-orthogonal complement
    pub normal: Matrix<f64>,
    pub g_ind: Matrix<f64>,
    pub g_ind_inv: Matrix<f64>,
    pub g_normal: Matrix<f64>,
    pub g_normal_inv: Matrix<f64>,
    pub ambient: PointGeometry,
}

const NORMAL_CHECK_TOL: f64 = 1e-10;

pub fn frame_at(imm: &Immersion, p: &[f64]) -> Result<Frame> {
    imm.check_point(p)?;
    let k = imm.source_dim();
    let jet = imm.tangent_jet(&Dual1::variables(p))?;
    let tangent = jet.t.values();
    let image: Vec<f64> = jet.phi.iter().map(|d| d.value).collect();
    if !tangent.is_finite() || image.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("immersion not finite at {p:?}")));
    }
    let (rank, _) = null_space(&tangent.transpose());
    if rank < k {
        return Err(Error::RankDeficientImmersion {
            rank,
            expected: k,
            point: p.to_vec(),
        });
    }
    let ambient = point_geometry(imm.ambient(), &image)?;
    let g = &ambient.g;
    let tt = tangent.transpose();
    let a = tt.matmul(g)?;
    let g_ind = a.matmul(&tangent)?;
    let sig = inertia(&g_ind)?;
    if !sig.is_neutral(k / 2) {
        return Err(Error::DegenerateInducedMetric {
            plus: sig.plus,
            minus: sig.minus,
            zero: sig.zero,
            point: p.to_vec(),
        });
    }
    let g_ind_inv = g_ind.inverse()?;
    let (_, basis) = null_space(&a);
    let normal = Matrix::from_columns(imm.ambient().dim(), &basis);
    let g_normal = normal.transpose().matmul(g)?.matmul(&normal)?;
    let g_normal_inv = g_normal.inverse()?;
    let cross = a.matmul(&normal)?;
    if cross.max_abs() > NORMAL_CHECK_TOL * (1.0 + a.max_abs()) {
        return Err(Error::Domain(format!(
            "normal complement not orthogonal at {p:?} (residual {:e})",
            cross.max_abs()
        )));
    }
    Ok(Frame {
        point: p.to_vec(),
        image,
        tangent,
        hessians: jet.hessians,
        normal,
        g_ind,
        g_ind_inv,
        g_normal,
        g_normal_inv,
        ambient,
    })
}

fn axpy(acc: &mut [f64], c: f64, v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

/// Tangent and normal parts of the ambient Lee covectors `p_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeeSplit {
    /// `θ̄_α` at `φ(p)` (ambient covector).
    pub theta: [Vec<f64>; 3],
    pub p: [Vec<f64>; 3],
    pub p_top: [Vec<f64>; 3],
    pub p_bot: [Vec<f64>; 3],
}

impl Frame {
    pub fn source_dim(&self) -> usize {
        self.tangent.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.tangent.rows()
    }

    pub fn m(&self) -> usize {
        self.source_dim() / 4
    }

    pub fn n(&self) -> usize {
        self.ambient_dim() / 4
    }

    pub fn codim(&self) -> usize {
        self.normal.cols()
    }

    /// `dφ(x)` for a source vector.
    pub fn push(&self, x: &[f64]) -> Vec<f64> {
        self.tangent.mul_vec(x).expect("source-sized vector")
    }

    pub fn normal_vector(&self, k: usize) -> Vec<f64> {
        self.normal.column(k)
    }

    /// Induced metric on source vectors.
    pub fn g_tangent(&self, x: &[f64], y: &[f64]) -> f64 {
        crate::numeric::bilinear(&self.g_ind, x, y)
    }

    /// Splits an ambient vector into source coordinates of its tangential
    /// part and its normal part (ambient coordinates).
    pub fn split(&self, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let b = self.tangent.transpose().mul_vec(&self.ambient.lower(v)).expect("ambient vector");
        let a = self.g_ind_inv.mul_vec(&b).expect("source vector");
        let top = self.push(&a);
        let bot = v.iter().zip(&top).map(|(x, y)| x - y).collect();
        (a, bot)
    }

    /// Source coordinates of the tangential part.
    pub fn tangent_coords(&self, v: &[f64]) -> Vec<f64> {
        self.split(v).0
    }

    /// `J_α` restricted to the tangent space, in source coordinates.
    pub fn apply_tangent(&self, s: Structure, x: &[f64]) -> Vec<f64> {
        self.tangent_coords(&self.ambient.apply(s, &self.push(x)))
    }

    /// `∇̄_X Ỹ` for `Ỹ` the constant-coefficient extension of `Y` in the
    /// coordinate tangent frame.
    pub fn ambient_derivative(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .hessians
            .iter()
            .map(|h| crate::numeric::bilinear(h, x, y))
            .collect();
        let gamma = self.ambient.gamma_contract(&self.push(x), &self.push(y));
        axpy(&mut out, 1.0, &gamma);
        out
    }

    /// Second fundamental form `h(X, Y)`.
    pub fn second_fundamental(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.split(&self.ambient_derivative(x, y)).1
    }

    /// `h(e_i, e_j)` for all source coordinate pairs, row-major.
    pub fn h_basis(&self) -> Vec<Vec<f64>> {
        let k = self.source_dim();
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                out.push(self.second_fundamental(&unit(k, i), &unit(k, j)));
            }
        }
        out
    }

    /// `A_N X` in source coordinates, from `g(A_N X, e_j) = g(h(X, e_j), N)`.
    pub fn shape_operator(&self, normal: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        let k = self.source_dim();
        let b: Vec<f64> = (0..k)
            .map(|j| self.ambient.inner(&self.second_fundamental(x, &unit(k, j)), normal))
            .collect();
        self.g_ind.solve(&b).map_err(|_| self.degenerate())
    }

    /// `(A_N X, D_X N)` from `∇̄_X N = -A_N X + D_X N` for a normal field
    /// given as a dual-valued closure over source coordinates.
    pub fn normal_derivative(
        &self,
        field: &dyn Fn(&[Dual1]) -> Result<Vec<Dual1>>,
        x: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let nv = field(&Dual1::variables(&self.point))?;
        if nv.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch("normal field of wrong length".into()));
        }
        let value: Vec<f64> = nv.iter().map(Scalar::value).collect();
        let (a, _) = self.split(&value);
        let top = self.push(&a);
        if crate::numeric::max_abs(&top) > 1e-8 * (1.0 + crate::numeric::max_abs(&value)) {
            return Err(Error::Domain(format!(
                "field is not normal at {:?} (tangential part {:e})",
                self.point,
                crate::numeric::max_abs(&top)
            )));
        }
        let mut d: Vec<f64> = nv
            .iter()
            .map(|c| x.iter().enumerate().map(|(i, xi)| xi * c.d(i)).sum())
            .collect();
        axpy(&mut d, 1.0, &self.ambient.gamma_contract(&self.push(x), &value));
        let (a, bot) = self.split(&d);
        Ok((a.iter().map(|v| -v).collect(), bot))
    }

    /// `C = (1/4m) g^{jk} h(e_j, e_k)`.
    pub fn mean_curvature(&self) -> Vec<f64> {
        let k = self.source_dim();
        let h = self.h_basis();
        let mut c = vec![0.0; self.ambient_dim()];
        for i in 0..k {
            for j in 0..k {
                axpy(&mut c, self.g_ind_inv[(i, j)], &h[i * k + j]);
            }
        }
        let scale = 1.0 / k as f64;
        c.iter().map(|v| v * scale).collect()
    }

    /// Worst normalized normal part of `J_α dφ(e_i)`.
    pub fn holomorphy_residual(&self) -> f64 {
        let k = self.source_dim();
        let mut worst = 0.0_f64;
        for s in Structure::ALL {
            for i in 0..k {
                let jt = self.ambient.apply(s, &self.tangent.column(i));
                let (_, bot) = self.split(&jt);
                let r = crate::numeric::max_abs(&bot) / (1.0 + crate::numeric::max_abs(&jt));
                worst = worst.max(r);
            }
        }
        worst
    }

    pub fn lee_split(&self) -> LeeSplit {
        let lee = crate::manifold::lee_forms(&self.ambient);
        let parts = [0, 1, 2].map(|a| {
            let (coords, bot) = self.split(&lee.p[a]);
            (self.push(&coords), bot)
        });
        let [(t1, b1), (t2, b2), (t3, b3)] = parts;
        LeeSplit {
            theta: lee.theta,
            p: lee.p,
            p_top: [t1, t2, t3],
            p_bot: [b1, b2, b3],
        }
    }

    fn degenerate(&self) -> Error {
        let sig = inertia(&self.g_ind).unwrap_or(crate::numeric::Inertia::new(0, 0, self.source_dim()));
        Error::DegenerateInducedMetric {
            plus: sig.plus,
            minus: sig.minus,
            zero: sig.zero,
            point: self.point.clone(),
        }
    }
}

pub(crate) fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

/// Holomorphy residual at a source point.
pub fn holomorphy_residual(imm: &Immersion, p: &[f64]) -> Result<f64> {
    Ok(frame_at(imm, p)?.holomorphy_residual())
}
