//! Built-in manifolds and immersions: the flat hyper-Kähler model, its
//! conformal rescalings, coordinate submanifolds and product manifolds.
//!
//! Coordinates come in four groups of `n`: `x^i ↦ x_i`, `y^i ↦ x_{n+i}`,
//! `u^i ↦ x_{2n+i}`, `v^i ↦ x_{3n+i}` (one-based names `x1 .. x{4n}`).

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::hypercomplex::conformal_transform;
use crate::manifold::{
    fundamental_tensor, lee_forms, point_geometry, BlockDiagField, ChartManifold, ConstantField,
    FieldRef, Structure,
};
use crate::numeric::Matrix;
use crate::policy::normalized_residual;
use crate::submanifold::Immersion;

/// Image of each coordinate group under `J_α`: `(target group, sign)`.
///
/// `J_1`: x→y, y→−x, u→−v, v→u
/// `J_2`: x→u, y→v, u→−x, v→−y
/// `J_3`: x→−v, y→u, u→−y, v→x
const IMAGES: [[(usize, f64); 4]; 3] = [
    [(1, 1.0), (0, -1.0), (3, -1.0), (2, 1.0)],
    [(2, 1.0), (3, 1.0), (0, -1.0), (1, -1.0)],
    [(3, -1.0), (2, 1.0), (1, -1.0), (0, 1.0)],
];

/// Constant matrix of `J_α` on the flat model.
pub fn flat_structure(n: usize, s: Structure) -> Matrix<f64> {
    let mut j = Matrix::zeros(4 * n, 4 * n);
    for (group, &(target, sign)) in IMAGES[s.index()].iter().enumerate() {
        for i in 0..n {
            j[(target * n + i, group * n + i)] = sign;
        }
    }
    j
}

/// `diag(-I_{2n}, I_{2n})`.
pub fn flat_metric(n: usize) -> Matrix<f64> {
    let d: Vec<f64> = (0..4 * n).map(|k| if k < 2 * n { -1.0 } else { 1.0 }).collect();
    Matrix::diagonal(&d)
}

fn constant(m: Matrix<f64>) -> FieldRef {
    Arc::new(ConstantField::new(m).expect("square"))
}

/// Flat `R^{4n}` with constant structures; a `K`-manifold.
pub fn flat_k(n: usize) -> Result<ChartManifold> {
    if n == 0 {
        return Err(Error::Domain("flat model needs n >= 1".into()));
    }
    ChartManifold::new(
        format!("flat_k(n={n})"),
        constant(flat_metric(n)),
        Structure::ALL.map(|s| constant(flat_structure(n, s))),
    )
}

/// `flat_k(n)` with metric `e^{2u} g`.
pub fn conformal_w(n: usize, u: &str) -> Result<ChartManifold> {
    let base = flat_k(n)?;
    let u = Expr::parse(u, base.dim())?;
    conformal_transform(&base, &u)
}

/// Ambient index of source coordinate `(group, i)` for a coordinate
/// submanifold of quaternionic dimension `m` in `4n` dimensions.
fn slot(group: usize, i: usize, n: usize) -> usize {
    group * n + i
}

/// `4m`-dimensional coordinate slice: source coordinate `group·m + i` maps
/// to ambient `group·n + i` and the remaining `4(n-m)` ambient coordinates
/// are held at `section` (ordered by group, then index; empty means zero).
pub fn coordinate_immersion(ambient: &ChartManifold, m: usize, section: &[f64]) -> Result<Immersion> {
    let n = ambient.n();
    if m == 0 || m >= n {
        return Err(Error::Domain(format!("coordinate submanifold needs 1 <= m < n, got m={m}, n={n}")));
    }
    let fixed = 4 * (n - m);
    if !section.is_empty() && section.len() != fixed {
        return Err(Error::DimensionMismatch(format!(
            "section has {} values, expected {fixed}",
            section.len()
        )));
    }
    let k = 4 * m;
    let mut comps = vec![Expr::constant(0.0, k); 4 * n];
    for group in 0..4 {
        for i in 0..m {
            comps[slot(group, i, n)] = Expr::variable(group * m + i, k);
        }
        for j in 0..n - m {
            let value = section.get(group * (n - m) + j).copied().unwrap_or(0.0);
            comps[slot(group, m + j, n)] = Expr::constant(value, k);
        }
    }
    Immersion::new(ambient.clone(), comps, format!("coordinate_submanifold(m={m})"))
}

/// Ambient coordinate indices spanned by a coordinate submanifold.
pub fn coordinate_tangent_slots(m: usize, n: usize) -> Vec<usize> {
    (0..4).flat_map(|g| (0..m).map(move |i| slot(g, i, n))).collect()
}

/// Product manifold with its two factor embeddings.
#[derive(Clone, Debug)]
pub struct Product {
    pub manifold: ChartManifold,
    pub left: Immersion,
    pub right: Immersion,
}

/// Block product of two manifolds.
///
/// Product coordinates are the left chart followed by the right chart; the
/// factor embeddings hold the other factor's coordinates at the given
/// sections (empty means zero).
pub fn product(left: &ChartManifold, right: &ChartManifold, left_section: &[f64], right_section: &[f64]) -> Result<Product> {
    let (a, b) = (left.dim(), right.dim());
    let metric: FieldRef = Arc::new(BlockDiagField::new(left.metric_field().clone(), right.metric_field().clone()));
    let structures = Structure::ALL.map(|s| {
        Arc::new(BlockDiagField::new(left.structure_field(s).clone(), right.structure_field(s).clone())) as FieldRef
    });
    let manifold = ChartManifold::new(format!("{} x {}", left.label(), right.label()), metric, structures)?;
    let at = |section: &[f64], k: usize| -> Result<f64> {
        if section.is_empty() {
            Ok(0.0)
        } else {
            section.get(k).copied().ok_or_else(|| Error::DimensionMismatch("short product section".into()))
        }
    };
    if !left_section.is_empty() && left_section.len() != b {
        return Err(Error::DimensionMismatch(format!("left factor section needs {b} values")));
    }
    if !right_section.is_empty() && right_section.len() != a {
        return Err(Error::DimensionMismatch(format!("right factor section needs {a} values")));
    }
    let mut lc = Vec::with_capacity(a + b);
    for i in 0..a {
        lc.push(Expr::variable(i, a));
    }
    for k in 0..b {
        lc.push(Expr::constant(at(left_section, k)?, a));
    }
    let mut rc = Vec::with_capacity(a + b);
    for k in 0..a {
        rc.push(Expr::constant(at(right_section, k)?, b));
    }
    for i in 0..b {
        rc.push(Expr::variable(i, b));
    }
    Ok(Product {
        left: Immersion::new(manifold.clone(), lc, "left factor")?,
        right: Immersion::new(manifold.clone(), rc, "right factor")?,
        manifold,
    })
}

/// Residuals of the product relations over sample points of the product.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ProductRelations {
    /// `F̄_α((X,X'),(Y,Y'),(Z,Z')) = F_α(X,Y,Z) + F'_α(X',Y',Z')`
    pub fundamental: f64,
    /// `θ̄_α(Z, Z') = θ_α(Z) + θ'_α(Z')`
    pub lee: f64,
    /// Worst `|F̄_α|` on triples with some unprimed argument, relative to
    /// `1 + max |F̄_α|`; zero when the left factor is a `K`-manifold.
    pub left_support: f64,
    pub per_point: Vec<[f64; 3]>,
}

pub fn verify_product_relations(
    product: &ChartManifold,
    left: &ChartManifold,
    right: &ChartManifold,
    points: &[Vec<f64>],
) -> Result<ProductRelations> {
    let a = left.dim();
    if product.dim() != a + right.dim() {
        return Err(Error::DimensionMismatch("product dimension is not the sum of the factors".into()));
    }
    let mut out = ProductRelations::default();
    let d = product.dim();
    for x in points {
        let pg = point_geometry(product, x)?;
        let lg = point_geometry(left, &x[..a])?;
        let rg = point_geometry(right, &x[a..])?;
        let (pl, ll, rl) = (lee_forms(&pg), lee_forms(&lg), lee_forms(&rg));
        let mut row = [0.0_f64; 3];
        for s in Structure::ALL {
            let fb = fundamental_tensor(&pg, s);
            let fl = fundamental_tensor(&lg, s);
            let fr = fundamental_tensor(&rg, s);
            let mut lhs = Vec::with_capacity(d * d * d);
            let mut rhs = Vec::with_capacity(d * d * d);
            let mut mixed = 0.0_f64;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        let v = fb[(i, j, k)];
                        lhs.push(v);
                        let expected = if i < a && j < a && k < a {
                            fl[(i, j, k)]
                        } else if i >= a && j >= a && k >= a {
                            fr[(i - a, j - a, k - a)]
                        } else {
                            0.0
                        };
                        rhs.push(expected);
                        if i < a || j < a || k < a {
                            mixed = mixed.max(v.abs());
                        }
                    }
                }
            }
            row[0] = row[0].max(normalized_residual(&lhs, &rhs));
            row[2] = row[2].max(mixed / (1.0 + fb.max_abs()));
            let mut sum = ll.theta(s).to_vec();
            sum.extend_from_slice(rl.theta(s));
            row[1] = row[1].max(normalized_residual(pl.theta(s), &sum));
        }
        out.fundamental = out.fundamental.max(row[0]);
        out.lee = out.lee.max(row[1]);
        out.left_support = out.left_support.max(row[2]);
        out.per_point.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_entered_n1_structures() {
        // columns: images of ∂x, ∂y, ∂u, ∂v
        let j1 = Matrix::from_rows(&[
            vec![0.0, -1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0, 0.0],
        ])
        .unwrap();
        let j2 = Matrix::from_rows(&[
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
        ])
        .unwrap();
        let j3 = Matrix::from_rows(&[
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(flat_structure(1, Structure::J1), j1);
        assert_eq!(flat_structure(1, Structure::J2), j2);
        assert_eq!(flat_structure(1, Structure::J3), j3);
    }

    #[test]
    fn flat_metric_signs() {
        let g = flat_metric(2);
        assert_eq!(g[(0, 0)], -1.0);
        assert_eq!(g[(3, 3)], -1.0);
        assert_eq!(g[(4, 4)], 1.0);
        assert_eq!(g[(7, 7)], 1.0);
    }

    #[test]
    fn coordinate_slots_interleave_groups() {
        assert_eq!(coordinate_tangent_slots(1, 2), vec![0, 2, 4, 6]);
        assert_eq!(coordinate_tangent_slots(2, 3), vec![0, 1, 3, 4, 6, 7, 9, 10]);
    }

    #[test]
    fn coordinate_immersion_rejects_m_not_below_n() {
        let m = flat_k(2).unwrap();
        assert!(matches!(coordinate_immersion(&m, 2, &[]), Err(Error::Domain(_))));
        assert!(matches!(coordinate_immersion(&m, 0, &[]), Err(Error::Domain(_))));
    }
}
