mod common;

use std::sync::Arc;

use common::{fd_geometry, rel_err, FD_REL_TOL};
use norden_geom::catalog::{conformal_w, flat_k, flat_metric, flat_structure};
use norden_geom::manifold::{
    fundamental_tensor, lee_forms, nabla_j, nijenhuis, nijenhuis_max, point_geometry, ChartManifold, ExprField,
    FieldRef, Structure,
};
use norden_geom::numeric::Matrix;
use norden_geom::policy::normalized_residual;
use norden_geom::sampling::halton_points;

fn models() -> Vec<ChartManifold> {
    vec![
        flat_k(2).unwrap(),
        conformal_w(2, "x1").unwrap(),
        conformal_w(2, "x1 + sin(x2)").unwrap(),
        conformal_w(1, "0.4*x2*x3 - cosh(x4)").unwrap(),
    ]
}

#[test]
fn constant_rescaling_keeps_connection_and_structures_parallel() {
    let m = conformal_w(2, "0.7").unwrap();
    for x in halton_points(8, 8, 1.0) {
        let pg = point_geometry(&m, &x).unwrap();
        assert!(pg.gamma.max_abs() < 1e-15);
        for s in Structure::ALL {
            assert!(nabla_j(&pg, s).max_abs() < 1e-15);
        }
    }
}

#[test]
fn flat_structures_are_parallel() {
    let m = flat_k(2).unwrap();
    let pg = point_geometry(&m, &[0.3; 8]).unwrap();
    for s in Structure::ALL {
        assert_eq!(nabla_j(&pg, s).max_abs(), 0.0);
        assert!(lee_forms(&pg).theta(s).iter().all(|v| *v == 0.0));
    }
}

#[test]
fn christoffels_and_lee_forms_match_finite_differences() {
    for m in models() {
        for x in halton_points(m.dim(), 6, 1.0) {
            let pg = point_geometry(&m, &x).unwrap();
            let fd = fd_geometry(&m, &x);
            let d = m.dim();
            let mut engine = Vec::new();
            for k in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        engine.push(pg.gamma[(k, i, j)]);
                    }
                }
            }
            assert!(rel_err(&engine, &fd.gamma_flat()) < FD_REL_TOL, "{}", m.label());
            let lee = lee_forms(&pg);
            for s in Structure::ALL {
                assert!(rel_err(lee.theta(s), &fd.theta(s.index())) < FD_REL_TOL, "{} {s:?}", m.label());
            }
        }
    }
}

#[test]
fn connection_is_metric() {
    for m in models() {
        let d = m.dim();
        for x in halton_points(d, 8, 1.0) {
            let pg = point_geometry(&m, &x).unwrap();
            for k in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        let mut r = pg.dg[(k, i, j)];
                        for l in 0..d {
                            r -= pg.gamma[(l, k, i)] * pg.g[(l, j)] + pg.gamma[(l, k, j)] * pg.g[(i, l)];
                        }
                        assert!(r.abs() < 1e-9 * (1.0 + pg.g.max_abs()), "{} {r:e}", m.label());
                    }
                }
            }
        }
    }
}

#[test]
fn fundamental_tensor_symmetries() {
    for m in models() {
        let d = m.dim();
        for x in halton_points(d, 6, 1.0) {
            let pg = point_geometry(&m, &x).unwrap();
            for s in Structure::ALL {
                let f = fundamental_tensor(&pg, s);
                let sign = if s.is_hermitian() { -1.0 } else { 1.0 };
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            let r = (f[(i, j, k)] - sign * f[(i, k, j)]).abs() / (1.0 + f.max_abs());
                            assert!(r < 1e-9, "{} {s:?} {r:e}", m.label());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lee_forms_do_not_depend_on_the_trace_frame() {
    let m = conformal_w(2, "x1").unwrap();
    // a unimodular integer frame
    let mut e = Matrix::<f64>::identity(8);
    for (i, j, v) in [(0, 3, 2.0), (1, 5, -1.0), (4, 2, 1.0), (6, 7, 3.0), (7, 0, -2.0), (2, 6, 1.0)] {
        e[(i, j)] = v;
    }
    for x in halton_points(8, 6, 1.0) {
        let pg = point_geometry(&m, &x).unwrap();
        let lee = lee_forms(&pg);
        let gram = e.transpose().matmul(&pg.g).unwrap().matmul(&e).unwrap();
        let gram_inv = gram.inverse().unwrap();
        for s in Structure::ALL {
            let f = fundamental_tensor(&pg, s);
            let theta: Vec<f64> = (0..8)
                .map(|z| {
                    let mut acc = 0.0;
                    for a in 0..8 {
                        for b in 0..8 {
                            let fab: f64 = (0..8)
                                .flat_map(|i| (0..8).map(move |j| (i, j)))
                                .map(|(i, j)| e[(i, a)] * e[(j, b)] * f[(i, j, z)])
                                .sum();
                            acc += gram_inv[(a, b)] * fab;
                        }
                    }
                    acc
                })
                .collect();
            assert!(normalized_residual(&theta, lee.theta(s)) < 1e-9);
        }
    }
}

#[test]
fn covector_is_metric_dual_of_lee_form() {
    let m = conformal_w(2, "x1 + sin(x2)").unwrap();
    let pg = point_geometry(&m, &[0.2, -0.4, 0.1, 0.5, -0.3, 0.7, 0.0, 0.25]).unwrap();
    let lee = lee_forms(&pg);
    for s in Structure::ALL {
        let back = pg.lower(lee.p(s));
        assert!(normalized_residual(&back, lee.theta(s)) < 1e-14);
    }
    assert!(lee.theta(Structure::J1).iter().any(|v| v.abs() > 1e-3));
}

#[test]
fn catalog_structures_are_integrable() {
    for m in models() {
        for x in halton_points(m.dim(), 4, 1.0) {
            for s in Structure::ALL {
                assert!(nijenhuis_max(&m, &x, s).unwrap() < 1e-12, "{} {s:?}", m.label());
            }
        }
    }
    let flat = flat_k(1).unwrap();
    let n = nijenhuis(&flat, &[0.1, 0.2, 0.3, 0.4], Structure::J2, &[1.0, 0.0, 0.5, 0.0], &[0.0, 1.0, 0.0, 2.0]).unwrap();
    assert!(n.iter().all(|v| *v == 0.0));
}

/// Conjugates the flat structures by `I + v·E_ab`; the quaternionic
/// relations survive, integrability in general does not.
fn twisted_with(a0: usize, b0: usize, v: &str) -> ChartManifold {
    let mut k = Matrix::<f64>::zeros(4, 4);
    k[(a0, b0)] = 1.0;
    let entries = |j: &Matrix<f64>| -> Vec<Vec<String>> {
        let a = k.matmul(j).unwrap().sub(&j.matmul(&k).unwrap()).unwrap();
        let b = k.matmul(j).unwrap().matmul(&k).unwrap();
        (0..4)
            .map(|r| (0..4).map(|c| format!("{} + {}*{v} - {}*{v}^2", j[(r, c)], a[(r, c)], b[(r, c)])).collect())
            .collect()
    };
    let field = |rows: Vec<Vec<String>>| -> FieldRef { Arc::new(ExprField::parse(&rows).unwrap()) };
    let g = flat_metric(1);
    let metric: Vec<Vec<String>> = (0..4).map(|r| (0..4).map(|c| g[(r, c)].to_string()).collect()).collect();
    ChartManifold::new(
        "twisted",
        field(metric),
        Structure::ALL.map(|s| field(entries(&flat_structure(1, s)))),
    )
    .unwrap()
}

#[test]
fn two_vanishing_nijenhuis_tensors_force_the_third() {
    let mut manifolds = models();
    manifolds.push(twisted_with(0, 1, "x3"));
    manifolds.push(twisted_with(2, 3, "x1"));
    let mut saw_nonintegrable = false;
    for m in manifolds {
        for x in halton_points(m.dim(), 4, 1.0) {
            let vanishing: Vec<bool> =
                Structure::ALL.iter().map(|&s| nijenhuis_max(&m, &x, s).unwrap() < 1e-9).collect();
            let count = vanishing.iter().filter(|v| **v).count();
            assert_ne!(count, 2, "{} at {x:?}", m.label());
            saw_nonintegrable |= count < 3;
        }
    }
    assert!(saw_nonintegrable);
}

