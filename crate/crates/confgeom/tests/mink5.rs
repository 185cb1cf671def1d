use confgeom::mink5::{classify, lorentz_inner, mobius_action, Causal, LorentzMap, MinkVec, NULL_TOL};
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12 * (1.0 + b.abs())
}

#[test]
fn inner_product_examples() {
    let e0 = MinkVec::new(1.0, [0.0; 4]);
    assert_eq!(lorentz_inner(&e0, &e0), -1.0);
    let x = [0.5, 0.5, 0.5, 0.5];
    let y = MinkVec::lift(x);
    assert!(close(lorentz_inner(&y, &y), 0.0));
    let ydag = MinkVec::new(0.5, x.map(|v| -0.5 * v));
    assert!(close(lorentz_inner(&y, &ydag), -1.0));
}

#[test]
fn causal_character() {
    assert_eq!(classify(&MinkVec::new(2.0, [1.0, 0.0, 0.0, 0.0]), NULL_TOL), Causal::Timelike);
    assert_eq!(classify(&MinkVec::new(1.0, [1.0, 0.0, 0.0, 0.0]), NULL_TOL), Causal::Null);
    assert_eq!(classify(&MinkVec::new(0.0, [1.0, 0.0, 0.0, 0.0]), NULL_TOL), Causal::Spacelike);
}

#[test]
fn boost_and_rotation_examples() {
    let id = LorentzMap::boost([1.0, 0.0, 0.0, 0.0], 0.0).unwrap();
    assert_eq!(id, LorentzMap::identity());
    let r = LorentzMap::rotation(1, 2, std::f64::consts::FRAC_PI_2).unwrap();
    let v = r.apply_array(&[1.0, 1.0, 0.0, 0.0, 0.0]);
    let want = [1.0, 0.0, 1.0, 0.0, 0.0];
    assert!(v.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
    let s: f64 = 0.7;
    let b = LorentzMap::boost([1.0, 0.0, 0.0, 0.0], s).unwrap();
    let w = b.apply_array(&[1.0, 1.0, 0.0, 0.0, 0.0]);
    assert!(close(w[0], s.exp()) && close(w[1], s.exp()));
    assert!(LorentzMap::rotation(2, 2, 0.1).is_err());
    assert!(LorentzMap::boost([1.0, 1.0, 0.0, 0.0], 0.1).is_err());
}

#[test]
fn mobius_action_examples() {
    let p = [0.0, 0.6, 0.0, 0.8];
    let (q, mu) = mobius_action(&LorentzMap::identity(), p).unwrap();
    assert_eq!((q, mu), (p, 1.0));
    let (q, mu) = mobius_action(&LorentzMap::rotation(1, 2, 0.3).unwrap(), p).unwrap();
    assert!(close(mu, 1.0));
    assert!(close(q[0], -0.6 * 0.3f64.sin()) && close(q[1], 0.6 * 0.3f64.cos()));
    let (q, mu) = mobius_action(&LorentzMap::boost([1.0, 0.0, 0.0, 0.0], 0.5).unwrap(), [1.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(close(mu, 0.5f64.exp()));
    assert!(close(q[0], 1.0) && q[1..].iter().all(|v| v.abs() < 1e-15));
}

fn unit(v: [f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

prop_compose! {
    fn lorentz()(d in prop::array::uniform4(-1.0f64..1.0), s in 0.0f64..1.0, i in 1usize..4, a in 0.0f64..6.3)
        -> LorentzMap {
        let d = if d.iter().all(|x| x.abs() < 1e-3) { [1.0, 0.0, 0.0, 0.0] } else { unit(d) };
        LorentzMap::boost(d, s).unwrap().compose(&LorentzMap::rotation(i, i + 1, a).unwrap())
    }
}

proptest! {
    #[test]
    fn maps_preserve_the_inner_product(l in lorentz(), a in prop::array::uniform5(-2.0f64..2.0), b in prop::array::uniform5(-2.0f64..2.0)) {
        let (u, v) = (MinkVec::from_array(a), MinkVec::from_array(b));
        let before = lorentz_inner(&u, &v);
        let after = lorentz_inner(&l.apply(&u), &l.apply(&v));
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn inverse_undoes_map(l in lorentz(), a in prop::array::uniform5(-2.0f64..2.0)) {
        let back = l.inverse().apply_array(&l.apply_array(&a));
        prop_assert!(back.iter().zip(a).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn mobius_images_stay_on_the_sphere(l in lorentz(), p in prop::array::uniform4(-1.0f64..1.0)) {
        prop_assume!(p.iter().any(|x| x.abs() > 1e-3));
        let (q, mu) = mobius_action(&l, unit(p)).unwrap();
        prop_assert!(mu > 0.0);
        prop_assert!((q.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
