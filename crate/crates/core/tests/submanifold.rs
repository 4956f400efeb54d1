mod common;

use common::{fd_second_fundamental, rel_err, FD_REL_TOL};
use norden_geom::catalog::{conformal_w, coordinate_immersion, flat_k};
use norden_geom::manifold::{point_geometry, ChartManifold, Structure};
use norden_geom::numeric::{bilinear, Dual1, Matrix, Scalar};
use norden_geom::policy::{normalized_residual, Tolerances};
use norden_geom::sampling::halton_points;
use norden_geom::submanifold::{
    frame_at, holomorphy_residual, induced_manifold, lee_restriction_check, theorem31_over, umbilicity_classify,
    Immersion, Umbilicity,
};
use norden_geom::Error;

/// Graph over the coordinate slice with small bumps in the normal slots;
/// not holomorphic, but nondegenerate near the origin.
fn bumpy(ambient: ChartManifold) -> Immersion {
    let comps: Vec<String> = [
        "x1",
        "0.2*x1*x2",
        "x2",
        "0.1*x3^2",
        "x3",
        "sin(0.3*x4)",
        "x4",
        "0.1*x1*x4",
    ]
    .map(String::from)
    .to_vec();
    Immersion::parse(ambient, 4, &comps).unwrap()
}

fn slice(u: &str, section: &[f64]) -> Immersion {
    coordinate_immersion(&conformal_w(2, u).unwrap(), 1, section).unwrap()
}

fn immersions() -> Vec<Immersion> {
    vec![
        coordinate_immersion(&flat_k(2).unwrap(), 1, &[]).unwrap(),
        slice("x1 + sin(x2)", &[]),
        slice("x2 - 0.3*x6*x8", &[0.1, 0.0, -0.2, 0.3]),
        slice("x1 + 0.5*x3*x5", &[]),
        bumpy(conformal_w(2, "0.3*x1 - 0.2*x6").unwrap()),
        bumpy(flat_k(2).unwrap()),
    ]
}

fn points(imm: &Immersion, count: usize) -> Vec<Vec<f64>> {
    halton_points(imm.source_dim(), count, 0.8)
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

#[test]
fn coordinate_frame_is_the_slot_inclusion() {
    let imm = coordinate_immersion(&flat_k(2).unwrap(), 1, &[]).unwrap();
    let f = frame_at(&imm, &[0.1, 0.2, 0.3, 0.4]).unwrap();
    let expected = Matrix::from_fn(8, 4, |r, c| if r == 2 * c { 1.0 } else { 0.0 });
    assert_eq!(f.tangent, expected);
    assert_eq!(f.codim(), 4);
    for k in 0..4 {
        let nv = f.normal_vector(k);
        assert!([0, 2, 4, 6].iter().all(|&s| nv[s] == 0.0));
    }
    assert!(f.g_normal.inverse().is_ok());
}

#[test]
fn repeated_component_drops_rank() {
    let comps: Vec<String> = ["x1", "x1", "x2", "0", "x3", "0", "x3", "0"].map(String::from).to_vec();
    let imm = Immersion::parse(flat_k(2).unwrap(), 4, &comps).unwrap();
    let err = frame_at(&imm, &[0.1, 0.2, 0.3, 0.4]).unwrap_err();
    assert!(matches!(err, Error::RankDeficientImmersion { rank: 3, expected: 4, .. }), "{err}");
}

#[test]
fn source_dimension_must_be_a_multiple_of_four() {
    let comps: Vec<String> = ["x1", "x2", "x3", "0", "0", "0", "0", "0"].map(String::from).to_vec();
    assert!(Immersion::parse(flat_k(2).unwrap(), 3, &comps).is_err());
}

#[test]
fn holomorphy_distinguishes_quaternionic_planes() {
    let flat = flat_k(2).unwrap();
    let plane = |slots: [usize; 4]| {
        let mut comps = vec!["0".to_string(); 8];
        for (i, s) in slots.iter().enumerate() {
            comps[*s] = format!("x{}", i + 1);
        }
        Immersion::parse(flat.clone(), 4, &comps).unwrap()
    };
    // span{∂x2, ∂y2, ∂u2, ∂v2} is holomorphic; span{∂x1, ∂y1, ∂u2, ∂v2}
    // fails under J_2 (∂x1 ↦ ∂u1) and span{∂x1, ∂y1, ∂u1, ∂u2} under J_1
    let good = plane([1, 3, 5, 7]);
    let mixed = plane([0, 2, 5, 7]);
    let bad = plane([0, 2, 4, 5]);
    let p = [0.1, -0.2, 0.3, 0.0];
    assert_eq!(holomorphy_residual(&good, &p).unwrap(), 0.0);
    assert!(holomorphy_residual(&mixed, &p).unwrap() > 0.1);
    assert!(holomorphy_residual(&bad, &p).unwrap() > 0.1);
}

#[test]
fn second_fundamental_form_is_symmetric() {
    let pairs = halton_points(8, 10, 1.0);
    for imm in immersions() {
        for p in halton_points(4, 32, 0.8) {
            let f = frame_at(&imm, &p).unwrap();
            for xy in &pairs {
                let (x, y) = xy.split_at(4);
                let r = normalized_residual(&f.second_fundamental(x, y), &f.second_fundamental(y, x));
                assert!(r < 1e-10, "{} {r:e}", imm.label());
            }
        }
    }
}

#[test]
fn second_fundamental_form_matches_finite_differences() {
    for imm in immersions() {
        for p in points(&imm, 4) {
            let engine = frame_at(&imm, &p).unwrap().h_basis();
            for (a, b) in engine.iter().zip(fd_second_fundamental(&imm, &p)) {
                assert!(rel_err(a, &b) < FD_REL_TOL, "{}", imm.label());
            }
        }
    }
}

#[test]
fn shape_operator_is_dual_to_h() {
    for imm in immersions() {
        for p in points(&imm, 6) {
            let f = frame_at(&imm, &p).unwrap();
            for k in 0..f.codim() {
                let nv = f.normal_vector(k);
                for i in 0..4 {
                    let a = f.shape_operator(&nv, &unit(4, i)).unwrap();
                    for j in 0..4 {
                        let lhs = f.g_tangent(&a, &unit(4, j));
                        let rhs = f.ambient.inner(&f.second_fundamental(&unit(4, i), &unit(4, j)), &nv);
                        assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "{}", imm.label());
                    }
                }
            }
        }
    }
}

#[test]
fn weingarten_split_agrees_with_shape_operator() {
    for imm in immersions() {
        for p in points(&imm, 4) {
            let f = frame_at(&imm, &p).unwrap();
            for k in 0..f.codim() {
                let field = imm.normal_field(k);
                for i in 0..4 {
                    let x = unit(4, i);
                    let (a, _) = f.normal_derivative(&field, &x).unwrap();
                    let direct = f.shape_operator(&f.normal_vector(k), &x).unwrap();
                    assert!(normalized_residual(&a, &direct) < 1e-9, "{}", imm.label());
                }
            }
        }
    }
}

#[test]
fn constant_normal_field_on_flat_slice_is_parallel() {
    let imm = coordinate_immersion(&flat_k(2).unwrap(), 1, &[]).unwrap();
    let f = frame_at(&imm, &[0.3, -0.1, 0.2, 0.5]).unwrap();
    let field = |_: &[Dual1]| -> norden_geom::Result<Vec<Dual1>> {
        Ok((0..8).map(|i| Dual1::constant(if i == 1 { 1.0 } else { 0.0 })).collect())
    };
    for i in 0..4 {
        let (a, d) = f.normal_derivative(&field, &unit(4, i)).unwrap();
        assert!(a.iter().chain(&d).all(|v| *v == 0.0));
        assert!(f.shape_operator(&unit(8, 1), &unit(4, i)).unwrap().iter().all(|v| *v == 0.0));
    }
}

#[test]
fn tangential_field_is_rejected_as_normal() {
    let imm = coordinate_immersion(&flat_k(2).unwrap(), 1, &[]).unwrap();
    let f = frame_at(&imm, &[0.0; 4]).unwrap();
    let field = |_: &[Dual1]| -> norden_geom::Result<Vec<Dual1>> {
        Ok((0..8).map(|i| Dual1::constant(if i == 0 { 1.0 } else { 0.0 })).collect())
    };
    assert!(matches!(f.normal_derivative(&field, &unit(4, 0)), Err(Error::Domain(_))));
}

#[test]
fn mean_curvature_does_not_depend_on_the_tangent_basis() {
    let mut e = Matrix::<f64>::identity(4);
    for (i, j, v) in [(0, 1, 2.0), (2, 3, -1.0), (3, 0, 1.0), (1, 2, 3.0)] {
        e[(i, j)] = v;
    }
    for imm in immersions() {
        for p in points(&imm, 4) {
            let f = frame_at(&imm, &p).unwrap();
            let basis: Vec<Vec<f64>> = (0..4).map(|a| e.column(a)).collect();
            let gram = Matrix::from_fn(4, 4, |a, b| f.g_tangent(&basis[a], &basis[b]));
            let gi = gram.inverse().unwrap();
            let mut c = vec![0.0; 8];
            for a in 0..4 {
                for b in 0..4 {
                    let h = f.second_fundamental(&basis[a], &basis[b]);
                    for (ci, hi) in c.iter_mut().zip(&h) {
                        *ci += gi[(a, b)] * hi / 4.0;
                    }
                }
            }
            assert!(normalized_residual(&c, &f.mean_curvature()) < 1e-9, "{}", imm.label());
        }
    }
}

#[test]
fn gauss_split_gives_the_induced_connection() {
    for imm in immersions() {
        let induced = induced_manifold(&imm).unwrap();
        for p in points(&imm, 4) {
            let f = frame_at(&imm, &p).unwrap();
            let pg = point_geometry(&induced, &p).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let top = f.tangent_coords(&f.ambient_derivative(&unit(4, i), &unit(4, j)));
                    let gamma: Vec<f64> = (0..4).map(|k| pg.gamma[(k, i, j)]).collect();
                    assert!(normalized_residual(&top, &gamma) < 1e-8, "{}", imm.label());
                }
            }
        }
    }
}

#[test]
fn lee_covector_splits_into_orthogonal_parts() {
    for imm in immersions() {
        for p in points(&imm, 4) {
            let f = frame_at(&imm, &p).unwrap();
            let s = f.lee_split();
            for a in 0..3 {
                let sum: Vec<f64> = s.p_top[a].iter().zip(&s.p_bot[a]).map(|(t, b)| t + b).collect();
                assert!(normalized_residual(&sum, &s.p[a]) < 1e-15);
                let scale = 1.0 + s.p[a].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                for k in 0..f.codim() {
                    assert!(f.ambient.inner(&s.p_top[a], &f.normal_vector(k)).abs() < 1e-10 * scale);
                }
                for i in 0..4 {
                    let t = f.tangent.column(i);
                    assert!(bilinear(&f.ambient.g, &s.p_bot[a], &t).abs() < 1e-10 * scale);
                }
            }
        }
    }
}

#[test]
fn kahler_ambient_gives_geodesic_kahler_slices() {
    let tol = Tolerances::default();
    for section in [&[][..], &[0.5, -0.3, 0.2, 0.9]] {
        let imm = coordinate_immersion(&conformal_w(2, "0.8").unwrap(), 1, section).unwrap();
        let pts = points(&imm, 8);
        let (worst, _) = theorem31_over(&imm, &pts).unwrap();
        assert!(worst.max() < 1e-10);
        let u = umbilicity_classify(&imm, &pts, &tol).unwrap();
        assert_eq!(u.verdict, Umbilicity::TotallyGeodesic);
        let lee = lee_restriction_check(&imm, &pts, &tol).unwrap();
        assert!(lee.induced_theta.iter().chain(&lee.ambient_on_tangent).all(|v| *v < 1e-12));
        assert_eq!(lee.induced.verdict, norden_geom::hypercomplex::ClassVerdict::K);
    }
}

#[test]
fn lee_forms_on_tangent_and_normal_bundles() {
    let tol = Tolerances::default();
    let cases = [
        ("x1 + 0.5*x3*x5", &[][..]),
        ("x2 - 0.3*x6*x8", &[0.1, 0.0, -0.2, 0.3][..]),
        ("x1 + sin(x2)", &[][..]),
        ("x4 + 0.2*x5", &[][..]),
    ];
    for (u, section) in cases {
        let imm = slice(u, section);
        let pts = points(&imm, 16);
        let lee = lee_restriction_check(&imm, &pts, &tol).unwrap();
        let on_tm = lee.ambient_on_tangent;
        let zero = on_tm.iter().all(|v| tol.is_zero(*v));
        let nonzero = on_tm.iter().all(|v| tol.is_nonzero(*v));
        assert!(zero || nonzero, "{u}: {on_tm:?}");
        if zero {
            assert!(lee.ambient_on_normal.iter().all(|v| tol.is_nonzero(*v)), "{u}");
            assert!(lee.induced_theta.iter().all(|v| *v < 1e-8), "{u}");
        }
        let (worst, _) = theorem31_over(&imm, &pts).unwrap();
        assert!(worst.h_lee < 1e-7);
        let um = umbilicity_classify(&imm, &pts, &tol).unwrap();
        assert_ne!(um.verdict, Umbilicity::Neither, "{u}");
        assert_eq!(um.cross_check.consistent, Some(true), "{u}: {}", um.cross_check.note);
    }
}

#[test]
fn structure_parts_of_h() {
    let imm = slice("x1 + sin(x2)", &[]);
    let (worst, _) = theorem31_over(&imm, &points(&imm, 8)).unwrap();
    for (name, r) in worst.probes() {
        assert!(r < 1e-7, "{name} {r:e}");
    }
}

#[test]
fn structure_normal_fields_follow_the_normal_connection() {
    let imm = slice("x1 + sin(x2)", &[]);
    for p in points(&imm, 3) {
        let f = frame_at(&imm, &p).unwrap();
        for s in Structure::ALL {
            for k in 0..f.codim() {
                let (_, djn) = f.normal_derivative(&imm.structure_normal_field(s, k), &unit(4, 1)).unwrap();
                let (_, dn) = f.normal_derivative(&imm.normal_field(k), &unit(4, 1)).unwrap();
                assert!(normalized_residual(&djn, &f.ambient.apply(s, &dn)) < 1e-7);
            }
        }
    }
}
