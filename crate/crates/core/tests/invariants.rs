use std::f64::consts::PI;

use proptest::prelude::*;

use spectral_shape::constraints::{assemble_constraints, ProblemKind, Strategy as Discretization};
use spectral_shape::eigen::{mu_k, EvalOptions};
use spectral_shape::polygon::{ConvexPolygon, Vec2};
use spectral_shape::support::{node_angle, SupportFunction};

fn point_cloud() -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3..12).prop_map(|v| v.into_iter().map(|(x, y)| Vec2::new(x, y)).collect())
}

/// Hulls of random points, centred at the centroid and not too thin to mesh.
fn body() -> impl Strategy<Value = ConvexPolygon> {
    point_cloud()
        .prop_filter_map("degenerate hull", |pts| ConvexPolygon::hull(&pts).ok())
        .prop_filter("too thin", |p| p.min_width() > 0.2)
        .prop_map(|p| p.translated(-p.centroid()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reconstruction_matches_samples(poly in body(), m in 8usize..96) {
        let h = SupportFunction::from_polygon(&poly, m).unwrap();
        let rec = h.reconstruct_polygon(256).unwrap();
        for i in 1..=m {
            let t = node_angle(i, m);
            prop_assert!((rec.support(t) - h.eval(t)).abs() < 1e-9);
            prop_assert!((h.eval(t) - poly.support(t)).abs() < 1e-9);
        }
        for v in poly.vertices() {
            prop_assert!(rec.contains_point(*v, 1e-9));
        }
    }

    #[test]
    fn width_is_pi_periodic(poly in body(), t in 0.0..(2.0 * PI)) {
        let h = SupportFunction::from_polygon(&poly, 64).unwrap();
        prop_assert!((h.width(t) - h.width(t + PI)).abs() < 1e-9);
        prop_assert!(h.width(t) >= h.min_width() - 1e-9);
        prop_assert!(h.width(t) <= h.diameter() + 1e-9);
    }

    #[test]
    fn contains_agrees_with_inclusion_rows(
        poly in body(),
        s in 0.3..1.3f64,
        tx in -0.4..0.4f64,
        ty in -0.4..0.4f64,
        m in 8usize..64,
    ) {
        let outer = SupportFunction::from_polygon(&poly, m).unwrap();
        let inner = SupportFunction::from_polygon(&poly.scaled(s).translated(Vec2::new(tx, ty)), m).unwrap();
        let sys = assemble_constraints(ProblemKind::Interior, Discretization::PiecewiseAffine { m }, &outer, m).unwrap();
        let r = sys.inclusion_residual(inner.coefficients());
        prop_assume!(r.abs() > 1e-6);
        prop_assert_eq!(outer.contains(&inner), r <= 0.0);
        let ext = assemble_constraints(ProblemKind::Exterior, Discretization::PiecewiseAffine { m }, &inner, m).unwrap();
        let re = ext.inclusion_residual(outer.coefficients());
        prop_assert_eq!(outer.contains(&inner), re <= 0.0);
    }
}

fn eval() -> EvalOptions {
    EvalOptions { h_factor: 15.0, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn eigenvalues_scale_inverse_square(poly in body(), s in 0.2..5.0f64) {
        let h = SupportFunction::from_polygon(&poly, 32).unwrap();
        let hs = h.affine(s, Vec2::zeros()).unwrap();
        let (a, b) = (mu_k(&h, 2, &eval()).unwrap(), mu_k(&hs, 2, &eval()).unwrap());
        prop_assert!((b * s * s - a).abs() < 1e-6 * a, "{} vs {}", a, b * s * s);
    }

    #[test]
    fn eigenvalues_translation_invariant(poly in body(), tx in -3.0..3.0f64, ty in -3.0..3.0f64) {
        let h = SupportFunction::from_polygon(&poly, 32).unwrap();
        let ht = SupportFunction::from_polygon(&poly.translated(Vec2::new(tx, ty)), 32).unwrap();
        let (a, b) = (mu_k(&h, 1, &eval()).unwrap(), mu_k(&ht, 1, &eval()).unwrap());
        prop_assert!((a - b).abs() < 1e-6 * a, "{} vs {}", a, b);
    }

    #[test]
    fn eigenvalues_rotation_invariant(poly in body(), angle in 0.0..(2.0 * PI)) {
        let e = EvalOptions { h_factor: 30.0, ..Default::default() };
        let a = mu_k(&SupportFunction::from_polygon(&poly, 512).unwrap(), 1, &e).unwrap();
        let b = mu_k(&SupportFunction::from_polygon(&poly.rotated(angle), 512).unwrap(), 1, &e).unwrap();
        prop_assert!((a - b).abs() < 2e-2 * a, "{} vs {}", a, b);
    }
}
