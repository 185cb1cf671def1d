use confgeom::ambient::{self, AMBIENT_INVARIANTS};
use confgeom::frame::PointEval;
use confgeom::jets::{ConformalFactor, Layout, SurfaceChart};
use confgeom::Error;
use proptest::prelude::*;

const WILLMORE_06: f64 = 4375.0 / 6912.0;

fn point(chart: &SurfaceChart, factor: &ConformalFactor, u: [f64; 2], order: usize) -> PointEval {
    PointEval::new(chart, factor, &Layout::new(2, order), u, order, order.max(6)).unwrap()
}

fn torus() -> SurfaceChart {
    SurfaceChart::flat_torus(0.6).unwrap()
}

#[test]
fn divergence_of_second_form() {
    let p = point(&torus(), &ConformalFactor::round(), [0.5, 1.5], 5);
    let h = ambient::co_derivative(&p, 2.0);
    let gi = ambient::ambient_forms(&p, 2.0, 0.0).unwrap().ginv;
    let phi = ambient::divergences(&h, &gi);
    assert!((phi[1] - 0.316479).abs() < 1e-6);
    assert!((phi[1] - WILLMORE_06 / 2.0).abs() < 1e-12);
    for k in [0, 2, 3] {
        assert!(phi[k].abs() < 1e-12);
    }
}

#[test]
fn laplacian_of_mean_curvature() {
    let p = point(&torus(), &ConformalFactor::round(), [0.5, 1.5], 6);
    let (l1, l2) = ambient::laplace_oracle(&p, 1.0, 1.0).unwrap();
    assert!((l1 - 1.265914).abs() < 1e-6);
    assert!(l2.is_none());
}

#[test]
fn clifford_second_form_norm() {
    let p = point(&SurfaceChart::clifford(), &ConformalFactor::round(), [0.1, 0.2], 6);
    let suite = ambient::invariant_suite(&p, 1.0, 1.0).unwrap();
    let norm = suite.iter().find(|r| r.name == "norm_h").unwrap();
    assert!((norm.value - 2.0).abs() < 1e-12);
    assert!((norm.oracle.unwrap() - 2.0).abs() < 1e-12);
    let names: Vec<&str> = suite.iter().map(|r| r.name).collect();
    let expected: Vec<&str> = AMBIENT_INVARIANTS.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, expected);
}

#[test]
fn christoffels_in_the_alpha_direction() {
    let p = point(&torus(), &ConformalFactor::round(), [2.0, 0.3], 5);
    let alpha = 1.7;
    let gam = ambient::christoffels(&p, alpha, 0.0).unwrap();
    // index order [k][a][b]; coordinates (α, ρ, u¹, u²); x̃_α is null
    for k in 0..4 {
        for j in 0..4 {
            let expect = if j == k && k > 0 { 1.0 / alpha } else { 0.0 };
            assert!((gam[k][0][j] - expect).abs() < 1e-10, "k={k} j={j}: {}", gam[k][0][j]);
        }
    }
}

#[test]
fn degenerate_ambient_points() {
    let p = point(&torus(), &ConformalFactor::round(), [0.2, 0.2], 4);
    let roots = ambient::degeneracy_roots(&p);
    assert!(!roots.is_empty());
    let r = roots.iter().cloned().find(|r| *r > 0.0).unwrap();
    assert!(matches!(ambient::ambient_forms(&p, 1.0, r), Err(Error::DegenerateAmbient(_))));
    assert!(matches!(ambient::ambient_forms(&p, 0.0, 0.1), Err(Error::BadParameter(_))));
    assert!(matches!(ambient::ambient_forms(&p, 1.0, -0.1), Err(Error::BadParameter(_))));
}

#[test]
fn lifted_surface_has_zero_mean_curvature() {
    let p = point(&torus(), &ConformalFactor::round(), [1.0, 1.0], 4);
    let f = ambient::ambient_forms(&p, 1.3, 0.0).unwrap();
    assert!(f.htilde.abs() < 1e-12);
    let normal = ambient::normal_check(&p, 1.3, 0.2);
    assert!(normal.iter().all(|v| v.abs() < 1e-10));
}

#[test]
fn ruled_surface_metric_determinant() {
    let p = point(&torus(), &ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).unwrap(), [0.6, 3.1], 4);
    for t in [-0.4, 0.0, 0.7] {
        let (r, _) = ambient::ruled_surface_forms(&p, t).unwrap();
        assert!((r.det_first - r.det_formula).abs() < 1e-10 * r.det_formula.abs().max(1.0));
        assert!((r.h_plus - r.h_plus_formula).abs() < 1e-9);
        assert!((r.norm + 1.0).abs() < 1e-12);
    }
}

#[test]
fn contracted_gradient_norm_needs_round_metric() {
    let ft = torus();
    let round = point(&ft, &ConformalFactor::round(), [0.4, 1.7], 5);
    assert!((ambient::norm_co_der_surface(&round) - ambient::norm_co_der_contracted(&round)).abs() < 1e-10);
    let aff = point(&ft, &ConformalFactor::affine(1.3, [0.2, 0.1, 0.0, -0.3]).unwrap(), [0.4, 1.7], 5);
    assert!((ambient::norm_co_der_surface(&aff) - ambient::norm_co_der_contracted(&aff)).abs() > 1e-4);
}

#[test]
fn double_laplacian_forms_agree() {
    let p = point(&torus(), &ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).unwrap(), [0.4, 1.7], 8);
    let a = ambient::double_laplace_bracket(&p);
    let b = ambient::double_laplace_bracket_alt(&p);
    assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    let (_, l2) = ambient::laplace_oracle(&p, 1.0, 1.0).unwrap();
    assert!((l2.unwrap() - 8.0 * a).abs() < 1e-5 * a.abs().max(1.0));
}

#[test]
fn exponent_fit_recovers_power_law() {
    let samples: Vec<(f64, f64, f64)> =
        [1.2, 1.5, 0.8, 2.0].iter().map(|&l: &f64| (l, 3.0 * l.powi(-3), 3.0)).collect();
    let fit = ambient::fit_exponent(&samples).unwrap();
    assert!((fit.exponent - 3.0).abs() < 1e-12);
    assert!(!fit.vacuous);
}

#[test]
fn unknown_invariant_name() {
    let p = point(&torus(), &ConformalFactor::round(), [0.4, 1.7], 4);
    assert!(ambient::surface_invariant(&p, "bogus").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_are_homogeneous(u in prop::array::uniform2(0.0f64..6.2), alpha in 0.4f64..3.0, kappa in 0.4f64..3.0) {
        let p = point(&torus(), &ConformalFactor::affine(1.2, [0.1, 0.0, -0.1, 0.0]).unwrap(), u, 6);
        let base = ambient::invariant_suite(&p, 1.0, 1.0).unwrap();
        let scaled = ambient::invariant_suite(&p, alpha, kappa).unwrap();
        for (s, b) in scaled.iter().zip(&base) {
            let f = (alpha * kappa).powi(-(b.order as i32));
            prop_assert!((s.value - f * b.value).abs() < 1e-9 * b.value.abs().max(1.0), "{}", b.name);
            let (x, y) = (s.oracle.unwrap(), b.oracle.unwrap());
            prop_assert!((x - f * y).abs() < 1e-7 * y.abs().max(1.0), "{} oracle", b.name);
            prop_assert!((x - s.value).abs() < 1e-6 * s.value.abs().max(1.0), "{} closed vs oracle", b.name);
        }
    }

    #[test]
    fn inverse_metric_matches_numeric(u in prop::array::uniform2(0.0f64..6.2), alpha in 0.4f64..3.0, rho in 0.0f64..0.3) {
        let p = point(&SurfaceChart::clifford(), &ConformalFactor::affine(1.3, [0.2, 0.1, 0.0, -0.3]).unwrap(), u, 4);
        prop_assume!(ambient::degeneracy_roots(&p).iter().all(|r| (r - rho).abs() > 0.05));
        let f = ambient::ambient_forms(&p, alpha, rho).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                prop_assert!((f.ginv[a][b] - f.ginv_numeric[a][b]).abs() < 1e-9);
            }
        }
        prop_assert!((f.det_g - f.det_g_formula).abs() < 1e-9 * f.det_g.abs());
    }
}
