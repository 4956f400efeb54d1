use serde::{Deserialize, Serialize};

use crate::catalog::{self, Product};
use crate::error::Result;
use crate::expr::Expr;
use crate::hypercomplex::conformal_transform;
use crate::manifold::{ChartManifold, ExprField, FieldRef};
use crate::policy::{Tolerances, DEFAULT_FAIL, DEFAULT_HOLD};
use crate::sampling::DEFAULT_POINTS;
use crate::submanifold::Immersion;

/// Check names accepted in `checks`.
pub const CHECK_NAMES: [&str; 9] = [
    "structure",
    "integrability",
    "classify",
    "lee",
    "holomorphy",
    "theorem31",
    "lee-restriction",
    "umbilicity",
    "product-relations",
];

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    pub checks: Vec<String>,
    pub ambient: AmbientSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub immersion: Option<ImmersionSpec>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Expect::is_empty")]
    pub expect: Expect,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmbientSpec {
    FlatK {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conformal: Option<String>,
    },
    ConformalW {
        n: usize,
        u: String,
    },
    Product {
        left: Box<AmbientSpec>,
        right: Box<AmbientSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conformal: Option<String>,
    },
    Inline {
        dim: usize,
        metric: Vec<Vec<String>>,
        j1: Vec<Vec<String>>,
        j2: Vec<Vec<String>>,
        j3: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conformal: Option<String>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ImmersionSpec {
    CoordinateSubmanifold {
        m: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        section: Vec<f64>,
    },
    ProductFactor {
        factor: Factor,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        section: Vec<f64>,
    },
    Inline {
        source_dim: usize,
        components: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Left,
    Right,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_box", rename = "box")]
    pub half_width: f64,
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

fn default_box() -> f64 {
    1.0
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINTS,
            half_width: 1.0,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "default_hold")]
    pub hold: f64,
    #[serde(default = "default_fail")]
    pub fail: f64,
}

fn default_hold() -> f64 {
    DEFAULT_HOLD
}

fn default_fail() -> f64 {
    DEFAULT_FAIL
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            hold: DEFAULT_HOLD,
            fail: DEFAULT_FAIL,
        }
    }
}

impl Thresholds {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            hold: self.hold,
            fail: self.fail,
        }
    }
}

/// Expected verdicts; a mismatch turns the corresponding check into a
/// failure.
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub umbilicity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub submanifold_class: Option<String>,
}

impl Expect {
    pub fn is_empty(&self) -> bool {
        self.classify.is_none() && self.umbilicity.is_none() && self.submanifold_class.is_none()
    }
}

/// Problems found before any geometry is evaluated.
pub fn validate(s: &Scenario) -> std::result::Result<(), String> {
    if s.checks.is_empty() {
        return Err("`checks` is empty".into());
    }
    for c in &s.checks {
        if !CHECK_NAMES.contains(&c.as_str()) {
            return Err(format!("unknown check `{c}` (known: {})", CHECK_NAMES.join(", ")));
        }
    }
    let needs_immersion = ["holomorphy", "theorem31", "lee-restriction", "umbilicity"];
    if s.immersion.is_none() {
        if let Some(c) = s.checks.iter().find(|c| needs_immersion.contains(&c.as_str())) {
            return Err(format!("check `{c}` needs an [immersion] table"));
        }
    }
    let is_product = matches!(s.ambient, AmbientSpec::Product { conformal: None, .. });
    if s.checks.iter().any(|c| c == "product-relations") && !is_product {
        return Err("check `product-relations` needs a product ambient without a conformal factor".into());
    }
    if matches!(s.immersion, Some(ImmersionSpec::ProductFactor { .. })) && !is_product {
        return Err("`product_factor` immersion needs a product ambient without a conformal factor".into());
    }
    if s.sampling.points == 0 {
        return Err("sampling.points must be positive".into());
    }
    if !(s.sampling.half_width > 0.0 && s.sampling.half_width.is_finite()) {
        return Err("sampling.box must be a positive number".into());
    }
    let t = &s.thresholds;
    if !(t.hold > 0.0 && t.hold <= t.fail && t.fail.is_finite()) {
        return Err(format!("thresholds must satisfy 0 < hold <= fail, got hold={}, fail={}", t.hold, t.fail));
    }
    check_expect("classify", &s.expect.classify, &["K", "W", "Outside", "Indeterminate"])?;
    check_expect("submanifold_class", &s.expect.submanifold_class, &["K", "W", "Outside", "Indeterminate"])?;
    check_expect(
        "umbilicity",
        &s.expect.umbilicity,
        &["TotallyGeodesic", "TotallyUmbilical", "Neither", "Indeterminate"],
    )
}

fn check_expect(field: &str, v: &Option<String>, allowed: &[&str]) -> std::result::Result<(), String> {
    match v {
        Some(x) if !allowed.contains(&x.as_str()) => {
            Err(format!("expect.{field} = `{x}` is not one of {}", allowed.join(", ")))
        }
        _ => Ok(()),
    }
}

/// A plain product and its two factors.
pub type ProductParts = (Product, ChartManifold, ChartManifold);

/// Built geometry for a scenario.
pub struct Built {
    pub ambient: ChartManifold,
    /// Present when the ambient is a plain product.
    pub product: Option<ProductParts>,
    pub immersion: Option<Immersion>,
}

fn apply_conformal(m: ChartManifold, u: &Option<String>) -> Result<ChartManifold> {
    match u {
        Some(u) => conformal_transform(&m, &Expr::parse(u, m.dim())?),
        None => Ok(m),
    }
}

fn table(rows: &[Vec<String>]) -> Result<FieldRef> {
    Ok(std::sync::Arc::new(ExprField::parse(rows)?))
}

fn build_ambient(spec: &AmbientSpec) -> Result<(ChartManifold, Option<ProductParts>)> {
    match spec {
        AmbientSpec::FlatK { n, conformal } => Ok((apply_conformal(catalog::flat_k(*n)?, conformal)?, None)),
        AmbientSpec::ConformalW { n, u } => Ok((catalog::conformal_w(*n, u)?, None)),
        AmbientSpec::Product { left, right, conformal } => {
            let (l, _) = build_ambient(left)?;
            let (r, _) = build_ambient(right)?;
            let p = catalog::product(&l, &r, &[], &[])?;
            match conformal {
                Some(_) => Ok((apply_conformal(p.manifold, conformal)?, None)),
                None => Ok((p.manifold.clone(), Some((p, l, r)))),
            }
        }
        AmbientSpec::Inline {
            dim,
            metric,
            j1,
            j2,
            j3,
            conformal,
        } => {
            let m = ChartManifold::new("inline", table(metric)?, [table(j1)?, table(j2)?, table(j3)?])?;
            if m.dim() != *dim {
                return Err(crate::Error::DimensionMismatch(format!(
                    "inline ambient declares dim {dim}, tables are {}x{}",
                    m.dim(),
                    m.dim()
                )));
            }
            apply_conformal(m, conformal)
                .map(|m| (m, None))
        }
    }
}

pub fn build(s: &Scenario) -> Result<Built> {
    let (ambient, product) = build_ambient(&s.ambient)?;
    let immersion = match &s.immersion {
        None => None,
        Some(ImmersionSpec::CoordinateSubmanifold { m, section }) => {
            Some(catalog::coordinate_immersion(&ambient, *m, section)?)
        }
        Some(ImmersionSpec::Inline { source_dim, components }) => {
            Some(Immersion::parse(ambient.clone(), *source_dim, components)?)
        }
        Some(ImmersionSpec::ProductFactor { factor, section }) => {
            let (_, l, r) = product.as_ref().expect("validated product ambient");
            let p = match factor {
                Factor::Left => catalog::product(l, r, section, &[])?,
                Factor::Right => catalog::product(l, r, &[], section)?,
            };
            Some(match factor {
                Factor::Left => p.left,
                Factor::Right => p.right,
            })
        }
    };
    Ok(Built {
        ambient,
        product,
        immersion,
    })
}
