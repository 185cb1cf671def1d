use confgeom::frame::{self, PointEval};
use confgeom::jets::{ConformalFactor, Layout, SurfaceChart};
use confgeom::mink5::LorentzMap;
use confgeom::Error;
use proptest::prelude::*;

fn point(chart: &SurfaceChart, factor: &ConformalFactor, u: [f64; 2], order: usize) -> PointEval {
    PointEval::new(chart, factor, &Layout::new(2, order), u, order, order.max(6)).unwrap()
}

fn torus() -> SurfaceChart {
    SurfaceChart::flat_torus(0.6).unwrap()
}

#[test]
fn mobius_metric_values() {
    let round = ConformalFactor::round();
    let c = point(&SurfaceChart::clifford(), &round, [0.2, 0.5], 4);
    assert!((c.frame.m.value() - 0.5).abs() < 1e-13);
    let t = point(&torus(), &round, [0.2, 0.5], 4);
    assert!((t.frame.m.value() - 625.0 / 576.0).abs() < 1e-12);
}

#[test]
fn clifford_frame_vectors() {
    let p = point(&SurfaceChart::clifford(), &ConformalFactor::round(), [0.0, 0.0], 4);
    let x = SurfaceChart::clifford().point([0.0, 0.0]);
    let ys = frame::v5_values(&p.frame.ystar);
    let yd = frame::v5_values(&p.frame.ydag);
    assert!((ys[0] - 0.5).abs() < 1e-13 && (yd[0] - 0.5).abs() < 1e-13);
    for k in 0..4 {
        assert!((ys[k + 1] + 0.5 * x[k]).abs() < 1e-13);
        assert!((yd[k + 1] + 0.5 * x[k]).abs() < 1e-13);
    }
    assert!(p.frame.omega_sq.value().abs() < 1e-13);
    assert!(p.frame.willmore.value().abs() < 1e-12);
    assert_eq!(frame::what_a(0.0, 0.0), -1.0);
}

#[test]
fn flat_torus_willmore_value() {
    let p = point(&torus(), &ConformalFactor::round(), [1.3, 4.0], 4);
    assert!((p.frame.willmore.value() - 4375.0 / 6912.0).abs() < 1e-12);
    assert!(p.frame.omega_sq.value().abs() < 1e-12);
}

#[test]
fn willmore_scales_with_the_cube_of_lambda() {
    let ft = torus();
    let u = [0.9, 2.6];
    let base = point(&ft, &ConformalFactor::round(), u, 4).frame.willmore.value();
    for f in [ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).unwrap(), ConformalFactor::constant(2.5).unwrap()] {
        let p = point(&ft, &f, u, 4);
        let lam = p.frame.lam.value();
        assert!((p.frame.willmore.value() * lam.powi(3) - base).abs() < 1e-10);
        assert!((p.frame.m.value() - point(&ft, &ConformalFactor::round(), u, 4).frame.m.value()).abs() < 1e-12);
    }
}

#[test]
fn umbilic_points_are_rejected() {
    let l = Layout::new(2, 1);
    let z = confgeom::jets::Jet::constant(&l, 1, 0.0);
    let omega = [[z.clone(), z.clone()], [z.clone(), z]];
    assert!(matches!(frame::check_umbilic(&omega), Err(Error::Umbilic(_))));
}

#[test]
fn equivariance_under_a_boost() {
    let map = LorentzMap::boost([0.0, 0.6, 0.0, 0.8], 0.7).unwrap();
    let e = frame::equivariance(&torus(), &map, [0.4, 1.9], 6).unwrap();
    assert!(e.worst() < 1e-9);
}

#[test]
fn conformal_transform_needs_positive_time() {
    assert!(frame::conformal_transform(&[0.0, 1.0, 0.0, 0.0, 0.0]).is_err());
    assert_eq!(frame::conformal_transform(&[2.0, 2.0, 0.0, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0, 0.0]);
}

fn factor_strategy() -> impl Strategy<Value = ConformalFactor> {
    (1.0f64..1.5, prop::array::uniform4(-0.2f64..0.2)).prop_map(|(a, b)| ConformalFactor::affine(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn frame_identities_hold(u in prop::array::uniform2(0.0f64..6.2), f in factor_strategy(), clifford in any::<bool>()) {
        let chart = if clifford { SurfaceChart::clifford() } else { torus() };
        let p = point(&chart, &f, u, 5);
        let c = frame::frame_checks(&p).unwrap();
        prop_assert!(c.frame_identities() < 1e-9);
        prop_assert!(c.expansion < 1e-8);
        prop_assert!(c.laplace_xi < 1e-8);
        prop_assert!(c.trace_star < 1e-8);
        prop_assert!(c.omega_star < 1e-8);
        prop_assert!(c.div_omega < 1e-8);
        prop_assert!(c.laplace_y < 1e-8);
        prop_assert!(c.omega_sq < 1e-8);
        prop_assert!(p.frame.gram_residual().unwrap() < 1e-9);
    }

    #[test]
    fn curvature_identities_hold(u in prop::array::uniform2(0.0f64..6.2), f in factor_strategy()) {
        let p = point(&torus(), &f, u, 5);
        prop_assert!(frame::appendix_b(&p, &f).unwrap().worst() < 1e-7);
    }
}
