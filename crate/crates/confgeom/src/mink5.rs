//! Minkowski 5-spacetime R^{1,4} with ⟨(t,x),(s,y)⟩ = −ts + x·y.

use crate::{Error, Result};

/// A vector (t, x) in R^{1,4}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkVec {
    pub t: f64,
    pub x: [f64; 4],
}

/// Causal character of a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Causal {
    Timelike,
    Null,
    Spacelike,
}

/// Default relative tolerance for [`classify`].
pub const NULL_TOL: f64 = 1e-10;

impl MinkVec {
    pub fn new(t: f64, x: [f64; 4]) -> Self {
        MinkVec { t, x }
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        MinkVec { t: a[0], x: [a[1], a[2], a[3], a[4]] }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.t, self.x[0], self.x[1], self.x[2], self.x[3]]
    }

    /// The light-cone lift (1, p) of a point of S³.
    pub fn lift(p: [f64; 4]) -> Self {
        MinkVec { t: 1.0, x: p }
    }

    pub fn scale(self, s: f64) -> Self {
        MinkVec { t: self.t * s, x: self.x.map(|v| v * s) }
    }

    /// Euclidean norm squared of the five components.
    pub fn euclid_sq(self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum()
    }
}

/// ⟨u, v⟩ = −u.t v.t + u.x · v.x
pub fn lorentz_inner(u: &MinkVec, v: &MinkVec) -> f64 {
    -u.t * v.t + u.x.iter().zip(&v.x).map(|(a, b)| a * b).sum::<f64>()
}

/// Inner product on raw 5-arrays, time component first.
pub fn inner5(u: &[f64; 5], v: &[f64; 5]) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3] + u[4] * v[4]
}

/// Classifies by the sign of ⟨v,v⟩; |⟨v,v⟩| ≤ tol(1 + ‖v‖²) counts as null.
pub fn classify(v: &MinkVec, tol: f64) -> Causal {
    let q = lorentz_inner(v, v);
    if q.abs() <= tol * (1.0 + v.euclid_sq()) {
        Causal::Null
    } else if q < 0.0 {
        Causal::Timelike
    } else {
        Causal::Spacelike
    }
}

/// Element of the identity component of O(1,4), stored densely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMap {
    m: [[f64; 5]; 5],
}

const ETA: [f64; 5] = [-1.0, 1.0, 1.0, 1.0, 1.0];

impl LorentzMap {
    pub fn identity() -> Self {
        let mut m = [[0.0; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzMap { m }
    }

    /// Validates MᵀηM = η (1e-12 per entry), M₀₀ > 0 and det M = +1.
    pub fn from_matrix(m: [[f64; 5]; 5]) -> Result<Self> {
        for i in 0..5 {
            for j in 0..5 {
                let s: f64 = (0..5).map(|k| m[k][i] * ETA[k] * m[k][j]).sum();
                let target = if i == j { ETA[i] } else { 0.0 };
                if (s - target).abs() > 1e-12 * (1.0 + m[0][0] * m[0][0]) {
                    return Err(Error::NotLorentz("metric not preserved"));
                }
            }
        }
        if m[0][0] <= 0.0 {
            return Err(Error::NotLorentz("time orientation reversed"));
        }
        if crate::linalg::det5(&m) <= 0.0 {
            return Err(Error::NotLorentz("orientation reversed"));
        }
        Ok(LorentzMap { m })
    }

    pub fn matrix(&self) -> &[[f64; 5]; 5] {
        &self.m
    }

    /// Boost with rapidity `s` along the unit spatial direction `dir`.
    pub fn boost(dir: [f64; 4], s: f64) -> Result<Self> {
        let norm = libm::sqrt(dir.iter().map(|v| v * v).sum());
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitDirection(norm));
        }
        let (ch, sh) = (libm::cosh(s), libm::sinh(s));
        let mut m = Self::identity().m;
        m[0][0] = ch;
        for i in 0..4 {
            m[0][i + 1] = sh * dir[i];
            m[i + 1][0] = sh * dir[i];
            for j in 0..4 {
                m[i + 1][j + 1] += (ch - 1.0) * dir[i] * dir[j];
            }
        }
        Ok(LorentzMap { m })
    }

    /// Rotation by `angle` in the spatial (i, j) plane, 1 ≤ i < j ≤ 4.
    pub fn rotation(i: usize, j: usize, angle: f64) -> Result<Self> {
        if !(1 <= i && i < j && j <= 4) {
            return Err(Error::BadRotationAxes(i, j));
        }
        let (c, s) = (libm::cos(angle), libm::sin(angle));
        let mut m = Self::identity().m;
        m[i][i] = c;
        m[j][j] = c;
        m[i][j] = -s;
        m[j][i] = s;
        Ok(LorentzMap { m })
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LorentzMap) -> LorentzMap {
        let mut m = [[0.0; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..5).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        LorentzMap { m }
    }

    /// Inverse via η Mᵀ η.
    pub fn inverse(&self) -> LorentzMap {
        let mut m = [[0.0; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = ETA[i] * self.m[j][i] * ETA[j];
            }
        }
        LorentzMap { m }
    }

    pub fn apply(&self, v: &MinkVec) -> MinkVec {
        MinkVec::from_array(self.apply_array(&v.to_array()))
    }

    pub fn apply_array(&self, v: &[f64; 5]) -> [f64; 5] {
        core::array::from_fn(|i| (0..5).map(|k| self.m[i][k] * v[k]).sum())
    }
}

/// Möbius action on S³: L(1, p) = μ (1, image).
pub fn mobius_action(l: &LorentzMap, p: [f64; 4]) -> Result<([f64; 4], f64)> {
    let w = l.apply(&MinkVec::lift(p));
    if w.t <= 0.0 {
        return Err(Error::NonPositiveTime(w.t));
    }
    Ok((w.x.map(|v| v / w.t), w.t))
}

impl core::ops::Add for MinkVec {
    type Output = MinkVec;
    fn add(self, o: Self) -> Self {
        let (a, b) = (self.to_array(), o.to_array());
        MinkVec::from_array(core::array::from_fn(|i| a[i] + b[i]))
    }
}

impl core::ops::Sub for MinkVec {
    type Output = MinkVec;
    fn sub(self, o: Self) -> Self {
        self + o.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_examples() {
        let e0 = MinkVec::new(1.0, [0.0; 4]);
        assert_eq!(lorentz_inner(&e0, &e0), -1.0);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let p = [s, 0.0, s, 0.0];
        let y = MinkVec::lift(p);
        assert!(lorentz_inner(&y, &y).abs() < 1e-15);
        let yd = MinkVec::new(0.5, p.map(|v| -0.5 * v));
        assert!((lorentz_inner(&y, &yd) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&MinkVec::new(2.0, [1.0, 0.0, 0.0, 0.0]), NULL_TOL), Causal::Timelike);
        assert_eq!(classify(&MinkVec::new(1.0, [1.0, 0.0, 0.0, 0.0]), NULL_TOL), Causal::Null);
        assert_eq!(classify(&MinkVec::new(0.0, [1.0, 0.0, 0.0, 0.0]), NULL_TOL), Causal::Spacelike);
    }

    #[test]
    fn generators() {
        let b = LorentzMap::boost([1.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        assert_eq!(b, LorentzMap::identity());
        let r = LorentzMap::rotation(1, 2, core::f64::consts::FRAC_PI_2).unwrap();
        let v = r.apply(&MinkVec::new(1.0, [1.0, 0.0, 0.0, 0.0]));
        assert!((v.x[0]).abs() < 1e-15 && (v.x[1] - 1.0).abs() < 1e-15);
        let b = LorentzMap::boost([1.0, 0.0, 0.0, 0.0], 0.7).unwrap();
        let v = b.apply(&MinkVec::new(1.0, [1.0, 0.0, 0.0, 0.0]));
        assert!((v.t - libm::exp(0.7)).abs() < 1e-14 && (v.x[0] - libm::exp(0.7)).abs() < 1e-14);
        assert!(LorentzMap::boost([1.0, 1.0, 0.0, 0.0], 0.1).is_err());
        assert!(LorentzMap::rotation(2, 2, 0.1).is_err());
        assert!(LorentzMap::from_matrix(*b.matrix()).is_ok());
    }

    #[test]
    fn mobius_examples() {
        let p = [0.5, 0.5, 0.5, 0.5];
        let (q, mu) = mobius_action(&LorentzMap::identity(), p).unwrap();
        assert_eq!((q, mu), (p, 1.0));
        let b = LorentzMap::boost([1.0, 0.0, 0.0, 0.0], 0.5).unwrap();
        let (q, mu) = mobius_action(&b, [1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-15 && (mu - libm::exp(0.5)).abs() < 1e-14);
    }
}
