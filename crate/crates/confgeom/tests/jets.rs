use confgeom::jets::{ConformalFactor, Jet, Layout, SurfaceChart};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn square_of_variable() {
    let l = Layout::new(2, 3);
    let u = Jet::variable(&l, 3, 0, 0.0);
    let s = u.sq();
    assert_eq!(s.coeff(&[2, 0]), 1.0);
    for e in [[0, 0], [1, 0], [0, 1], [1, 1], [0, 2], [3, 0]] {
        assert_eq!(s.coeff(&e), 0.0);
    }
}

#[test]
fn reciprocal_is_geometric_series() {
    let l = Layout::new(2, 2);
    let r = (Jet::variable(&l, 2, 0, 0.0) + 1.0).recip().unwrap();
    assert_eq!(r.coeff(&[0, 0]), 1.0);
    assert_eq!(r.coeff(&[1, 0]), -1.0);
    assert_eq!(r.coeff(&[2, 0]), 1.0);
}

#[test]
fn sqrt_of_shifted_variable() {
    let l = Layout::new(2, 1);
    let r = (Jet::variable(&l, 1, 0, 0.0) + 4.0).sqrt().unwrap();
    assert!(close(r.value(), 2.0, 1e-15));
    assert!(close(r.d1(0), 0.25, 1e-15));
}

#[test]
fn reciprocal_of_zero_is_an_error() {
    let l = Layout::new(1, 2);
    assert!(Jet::variable(&l, 2, 0, 0.0).recip().is_err());
    assert!(Jet::variable(&l, 2, 0, -1.0).ln().is_err());
}

#[test]
fn clifford_base_point() {
    let l = Layout::new(2, 1);
    let x = SurfaceChart::clifford().immersion_jet(&l, [0.0, 0.0], 1, 6).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v: Vec<f64> = x.iter().map(Jet::value).collect();
    assert_eq!(v, vec![h, 0.0, h, 0.0]);
    // E = 1/2
    let e: f64 = x.iter().map(|c| c.d1(0) * c.d1(0)).sum();
    assert!(close(e, 0.5, 1e-15));
}

#[test]
fn flat_torus_is_arc_length() {
    let l = Layout::new(2, 1);
    let chart = SurfaceChart::flat_torus(0.6).unwrap();
    for u in [[0.3, 0.1], [2.0, 4.1]] {
        let x = chart.immersion_jet(&l, u, 1, 6).unwrap();
        for dir in 0..2 {
            let e: f64 = x.iter().map(|c| c.d1(dir) * c.d1(dir)).sum();
            assert!(close(e, 1.0, 1e-14));
        }
    }
}

#[test]
fn order_above_limit_is_rejected() {
    let l = Layout::new(2, 8);
    let r = SurfaceChart::clifford().immersion_jet(&l, [0.0, 0.0], 7, 6);
    assert!(r.is_err());
}

#[test]
fn identity_mobius_image_matches_base() {
    let l = Layout::new(2, 4);
    let base = SurfaceChart::clifford();
    let img = SurfaceChart::mobius_image(base.clone(), confgeom::mink5::LorentzMap::identity());
    let a = base.immersion_jet(&l, [0.4, 0.9], 4, 6).unwrap();
    let b = img.immersion_jet(&l, [0.4, 0.9], 4, 6).unwrap();
    for k in 0..4 {
        for (p, q) in a[k].coeffs().iter().zip(b[k].coeffs()) {
            assert!((p - q).abs() < 1e-15);
        }
    }
}

#[test]
fn affine_factor_on_clifford() {
    let f = ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).unwrap();
    let x = SurfaceChart::clifford().point([0.0, 0.0]);
    assert!(close(f.value(&x), 1.441421356237, 1e-12));
}

proptest! {
    #[test]
    fn exp_ln_round_trip(a in 0.2f64..5.0, b in -0.5f64..0.5) {
        let l = Layout::new(2, 5);
        let f = Jet::variable(&l, 5, 0, a) + Jet::variable(&l, 5, 1, b).scale(0.3);
        let g = f.ln().unwrap().exp();
        for (p, q) in g.coeffs().iter().zip(f.coeffs()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn pythagoras_holds_for_jets(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let l = Layout::new(2, 6);
        let t = Jet::variable(&l, 6, 0, a) * Jet::variable(&l, 6, 1, b);
        let one = t.sin().sq() + t.cos().sq();
        prop_assert!((one.value() - 1.0).abs() < 1e-13);
        prop_assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-11));
    }

    #[test]
    fn derivative_obeys_leibniz(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let l = Layout::new(2, 4);
        let u = Jet::variable(&l, 4, 0, a);
        let v = Jet::variable(&l, 4, 1, b);
        let f = u.sin() * v.exp();
        let g = &u * &v + 2.0;
        let lhs = (&f * &g).deriv(0);
        let rhs = f.deriv(0) * g.clone() + f.clone() * g.deriv(0);
        for (p, q) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn powf_matches_repeated_product(a in 0.3f64..3.0) {
        let l = Layout::new(1, 5);
        let x = Jet::variable(&l, 5, 0, a);
        let cube = x.powf(3.0).unwrap();
        let prod = &(&x * &x) * &x;
        for (p, q) in cube.coeffs().iter().zip(prod.coeffs()) {
            prop_assert!((p - q).abs() < 1e-11 * (1.0 + q.abs()));
        }
    }
}
