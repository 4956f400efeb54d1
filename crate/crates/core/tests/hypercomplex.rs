use std::sync::Arc;

use norden_geom::catalog::{conformal_w, flat_k, flat_structure};
use norden_geom::expr::Expr;
use norden_geom::hypercomplex::{class_residuals, conformal_transform, structure_residuals, ClassVerdict};
use norden_geom::manifold::{ChartManifold, ConstantField, Structure};
use norden_geom::numeric::Matrix;
use norden_geom::policy::Tolerances;
use norden_geom::sampling::halton_points;
use norden_geom::Error;

const CORPUS: [&str; 6] = ["x1", "x1 + sin(x2)", "0.5*x3*x7", "exp(0.3*x4) - x6", "cos(x5 + x8)", "0.2*x2^2"];

fn pts(m: &ChartManifold, count: usize) -> Vec<Vec<f64>> {
    halton_points(m.dim(), count, 1.0)
}

#[test]
fn negated_structure_breaks_the_cyclic_relation() {
    let flat = flat_k(2).unwrap();
    let minus = flat_structure(2, Structure::J3).scale(&-1.0);
    let broken = flat.with_structure(Structure::J3, Arc::new(ConstantField::new(minus).unwrap())).unwrap();
    let r = structure_residuals(&broken, &pts(&broken, 4)).unwrap();
    assert!(r.quaternionic >= 2.0);
}

#[test]
fn conformal_rescaling_keeps_compatibility() {
    for u in CORPUS {
        let m = conformal_w(2, u).unwrap();
        let r = structure_residuals(&m, &pts(&m, 8)).unwrap();
        assert_eq!(r.quaternionic, 0.0);
        assert!(r.compat < 1e-12, "{u}: {:e}", r.compat);
        assert!(r.assoc_forms_ok);
    }
}

#[test]
fn zero_factor_leaves_metric_unchanged() {
    let base = flat_k(2).unwrap();
    let m = conformal_transform(&base, &Expr::parse("0", 8).unwrap()).unwrap();
    for x in pts(&base, 4) {
        assert_eq!(m.metric_at(&x).unwrap(), base.metric_at(&x).unwrap());
    }
}

#[test]
fn wrong_signature_is_reported() {
    let base = flat_k(1).unwrap();
    let riemannian = Arc::new(ConstantField::new(Matrix::<f64>::identity(4)).unwrap());
    let m = base.with_metric(riemannian, "definite").unwrap();
    let err = structure_residuals(&m, &pts(&m, 1)).unwrap_err();
    assert!(matches!(err, Error::SignatureViolation { plus: 4, minus: 0, .. }), "{err}");
}

#[test]
fn conformal_corpus_is_never_outside() {
    let tol = Tolerances::default();
    for u in CORPUS {
        let m = conformal_w(2, u).unwrap();
        let c = class_residuals(&m, &pts(&m, 16), &tol).unwrap();
        assert_eq!(c.verdict, ClassVerdict::W, "{u}");
        assert!(c.r_k > tol.fail);
        assert!(c.r_w1.max(c.r_w[0]).max(c.r_w[1]).max(c.r_lee) < tol.hold);
        assert!(c.r_cov < 1e-7);
        assert!(c.theta_max > tol.fail);
    }
}

#[test]
fn k_verdict_iff_lee_forms_vanish() {
    let tol = Tolerances::default();
    for u in ["0", "1.25", "-3", "x2", "sin(x1)"] {
        let m = conformal_w(2, u).unwrap();
        let c = class_residuals(&m, &pts(&m, 8), &tol).unwrap();
        assert_eq!(c.verdict == ClassVerdict::K, c.theta_max < tol.hold, "{u}");
        if c.verdict == ClassVerdict::K {
            assert!(c.r_k < tol.hold);
        }
    }
}

#[test]
fn classification_ignores_point_order() {
    let tol = Tolerances::default();
    let m = conformal_w(2, "x1 + sin(x2)").unwrap();
    let forward = pts(&m, 12);
    let mut backward = forward.clone();
    backward.reverse();
    backward.rotate_left(5);
    let (a, b) = (class_residuals(&m, &forward, &tol).unwrap(), class_residuals(&m, &backward, &tol).unwrap());
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.r_k, b.r_k);
    assert_eq!(a.r_w1, b.r_w1);
    assert_eq!(a.r_w, b.r_w);
    assert_eq!(a.r_lee, b.r_lee);
}

#[test]
fn narrow_band_gives_indeterminate() {
    let m = conformal_w(2, "1e-6*x1").unwrap();
    let c = class_residuals(&m, &pts(&m, 4), &Tolerances::default()).unwrap();
    assert_eq!(c.verdict, ClassVerdict::Indeterminate);
}
