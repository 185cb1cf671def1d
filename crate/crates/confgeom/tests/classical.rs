use confgeom::classical::{self, ClassicalJet};
use confgeom::jets::{ConformalFactor, Layout, SurfaceChart};
use proptest::prelude::*;

fn classical_at(chart: &SurfaceChart, u: [f64; 2]) -> ClassicalJet {
    let layout = Layout::new(2, 4);
    classical::classical_geometry(chart, &layout, u, 2, 6).unwrap()
}

fn norm_ii0(c: &ClassicalJet) -> f64 {
    let e = c.metric.value();
    c.ii0.iter().flatten().map(|v| v.value() * v.value()).sum::<f64>() / (e * e)
}

#[test]
fn clifford_torus_forms() {
    let c = classical_at(&SurfaceChart::clifford(), [0.0, 0.0]);
    assert!((c.metric.value() - 0.5).abs() < 1e-15);
    assert!(c.h.value().abs() < 1e-14);
    assert!(c.k.value().abs() < 1e-14);
    assert!((norm_ii0(&c) - 2.0).abs() < 1e-13);
}

#[test]
fn flat_torus_forms() {
    let c = classical_at(&SurfaceChart::flat_torus(0.6).unwrap(), [1.1, 0.4]);
    assert!((c.metric.value() - 1.0).abs() < 1e-14);
    assert!((c.h.value() - 0.28 / 0.96).abs() < 1e-13);
    assert!(c.k.value().abs() < 1e-13);
    // |n| = 1, n ⟂ x̂, n ⟂ x̂_u
    let n: Vec<f64> = c.n.iter().map(|v| v.value()).collect();
    let x: Vec<f64> = c.x.iter().map(|v| v.value()).collect();
    assert!((n.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-14);
    assert!(n.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-14);
    for d in 0..2 {
        let t: f64 = (0..4).map(|k| n[k] * c.xu[d][k].value()).sum();
        assert!(t.abs() < 1e-14);
    }
}

#[test]
fn affine_factor_lambda_hat() {
    let cl = SurfaceChart::clifford();
    let c = classical_at(&cl, [0.0, 0.0]);
    let f = ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).unwrap();
    let (lam, _) = classical::lambda_jet(&f, &c).unwrap();
    assert!((lam.value() - 1.441421356237).abs() < 1e-12);
}

#[test]
fn constant_factor_rescales_mean_curvature() {
    let ft = SurfaceChart::flat_torus(0.6).unwrap();
    let c = classical_at(&ft, [0.7, 2.2]);
    for k in [0.5, 2.0, 3.0] {
        let lj = classical::lambda_geometry(&ConformalFactor::constant(k).unwrap(), &c).unwrap();
        assert!((lj.h.value() - c.h.value() / k).abs() < 1e-13);
        assert!((lj.metric.value() - k * k * c.metric.value()).abs() < 1e-13);
        assert!(lj.curv.r_3i.iter().all(|r| r.value().abs() < 1e-13));
    }
}

#[test]
fn round_metric_has_unit_sectional_curvature() {
    let c = classical_at(&SurfaceChart::clifford(), [0.3, 0.8]);
    let lj = classical::lambda_geometry(&ConformalFactor::round(), &c).unwrap();
    assert!((lj.curv.kt.value() - 1.0).abs() < 1e-13);
    assert!((lj.curv.ric_33.value() - 2.0).abs() < 1e-13);
}

#[test]
fn nonpositive_factor_is_rejected() {
    assert!(ConformalFactor::constant(0.0).is_err());
    assert!(ConformalFactor::affine(0.1, [0.5, 0.0, 0.0, 0.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauss_equation_holds(u in prop::array::uniform2(0.0f64..6.0), r in 0.3f64..0.9) {
        let c = classical_at(&SurfaceChart::flat_torus(r).unwrap(), u);
        let kint = classical::intrinsic_curvature(&c.metric).unwrap().value();
        let e = c.metric.value();
        let det = (c.ii[0][0].value() * c.ii[1][1].value() - c.ii[0][1].value() * c.ii[1][0].value()) / (e * e);
        prop_assert!((kint - (det + 1.0)).abs() < 1e-10);
    }

    #[test]
    fn willmore_energy_density_is_conformally_invariant(
        u in prop::array::uniform2(0.0f64..6.0),
        b in prop::array::uniform4(-0.2f64..0.2),
    ) {
        let cl = SurfaceChart::clifford();
        let c = classical_at(&cl, u);
        let lj = classical::lambda_geometry(&ConformalFactor::affine(1.3, b).unwrap(), &c).unwrap();
        let e = c.metric.value();
        let el = lj.metric.value();
        let ol: f64 = lj.omega.iter().flatten().map(|v| v.value() * v.value()).sum();
        let o: f64 = c.ii0.iter().flatten().map(|v| v.value() * v.value()).sum();
        prop_assert!((ol / el - o / e).abs() < 1e-11);
    }
}
