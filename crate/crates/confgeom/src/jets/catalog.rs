use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{Jet, Layout};
use crate::mink5::LorentzMap;
use crate::{Error, Result};

/// Default limit on the immersion jet order.
pub const DEFAULT_J_MAX: usize = 6;

/// Analytic isothermal immersion of a parameter domain into S³ ⊂ R⁴.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceChart {
    /// (cos u, sin u, cos v, sin v)/√2, E = 1/2.
    Clifford,
    /// (r cos(u/r), r sin(u/r), s cos(v/s), s sin(v/s)) with s = √(1−r²), E = 1.
    FlatTorus { r: f64 },
    /// Image of a base chart under the Möbius map of a Lorentz transformation.
    MobiusImage { base: Box<SurfaceChart>, map: LorentzMap },
}

impl SurfaceChart {
    pub fn clifford() -> Self {
        SurfaceChart::Clifford
    }

    /// Flat torus with radius `r`; needs 0 < r < 1. r = 1/√2 is the Clifford
    /// torus up to reparametrization.
    pub fn flat_torus(r: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::BadParameter("flat_torus needs 0 < r < 1"));
        }
        Ok(SurfaceChart::FlatTorus { r })
    }

    pub fn mobius_image(base: SurfaceChart, map: LorentzMap) -> Self {
        SurfaceChart::MobiusImage { base: Box::new(base), map }
    }

    /// Looks up a catalog entry by name.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        match name {
            "clifford" => Ok(Self::clifford()),
            "flat_torus" => {
                let r = *params.first().ok_or(Error::BadParameter("flat_torus needs r"))?;
                Self::flat_torus(r)
            }
            _ => Err(Error::BadParameter("unknown surface name")),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SurfaceChart::Clifford => "clifford".into(),
            SurfaceChart::FlatTorus { r } => alloc::format!("flat_torus({r})"),
            SurfaceChart::MobiusImage { base, .. } => alloc::format!("mobius_image({})", base.name()),
        }
    }

    /// Periods of the parameter torus.
    pub fn periods(&self) -> [f64; 2] {
        match self {
            SurfaceChart::Clifford => [2.0 * PI, 2.0 * PI],
            SurfaceChart::FlatTorus { r } => {
                let s = libm::sqrt(1.0 - r * r);
                [2.0 * PI * r, 2.0 * PI * s]
            }
            SurfaceChart::MobiusImage { base, .. } => base.periods(),
        }
    }

    /// Jets of the four ambient coordinates at `u`, to `order`.
    pub fn immersion_jet(&self, layout: &Arc<Layout>, u: [f64; 2], order: usize, j_max: usize) -> Result<[Jet; 4]> {
        if order > j_max {
            return Err(Error::JetOrderTooHigh { requested: order, limit: j_max });
        }
        if order > layout.max_order() || layout.nvars() != 2 {
            return Err(Error::JetOrderTooHigh { requested: order, limit: layout.max_order() });
        }
        Ok(self.jet_unchecked(layout, u, order))
    }

    fn jet_unchecked(&self, layout: &Arc<Layout>, u: [f64; 2], order: usize) -> [Jet; 4] {
        let a = Jet::variable(layout, order, 0, u[0]);
        let b = Jet::variable(layout, order, 1, u[1]);
        match self {
            SurfaceChart::Clifford => {
                [a.cos() * FRAC_1_SQRT_2, a.sin() * FRAC_1_SQRT_2, b.cos() * FRAC_1_SQRT_2, b.sin() * FRAC_1_SQRT_2]
            }
            SurfaceChart::FlatTorus { r } => {
                let s = libm::sqrt(1.0 - r * r);
                let a = a.scale(1.0 / r);
                let b = b.scale(1.0 / s);
                [a.cos() * *r, a.sin() * *r, b.cos() * s, b.sin() * s]
            }
            SurfaceChart::MobiusImage { base, map } => {
                let x = base.jet_unchecked(layout, u, order);
                let m = map.matrix();
                let row = |i: usize| {
                    let mut acc = x[0].scale(m[i][1]) + m[i][0];
                    for k in 1..4 {
                        acc += x[k].scale(m[i][k + 1]);
                    }
                    acc
                };
                // time component stays positive for a valid map
                let inv_t = row(0).recip().expect("positive time component");
                core::array::from_fn(|i| row(i + 1) * &inv_t)
            }
        }
    }

    /// Point x̂(u).
    pub fn point(&self, u: [f64; 2]) -> [f64; 4] {
        let l = Layout::new(2, 0);
        super::values(&self.jet_unchecked(&l, u, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_at_origin() {
        let l = Layout::new(2, 2);
        let x = SurfaceChart::clifford().immersion_jet(&l, [0.0, 0.0], 2, 6).unwrap();
        let v = super::super::values(&x);
        assert!((v[0] - FRAC_1_SQRT_2).abs() < 1e-15 && v[1] == 0.0);
        let xu: f64 = x.iter().map(|c| c.d1(0) * c.d1(0)).sum();
        assert!((xu - 0.5).abs() < 1e-15);
    }

    #[test]
    fn order_limit() {
        let l = Layout::new(2, 8);
        assert!(SurfaceChart::clifford().immersion_jet(&l, [0.0, 0.0], 7, 6).is_err());
        assert!(SurfaceChart::clifford().immersion_jet(&l, [0.0, 0.0], 7, 8).is_ok());
    }

    #[test]
    fn flat_torus_is_arc_length() {
        let l = Layout::new(2, 1);
        let x = SurfaceChart::flat_torus(0.6).unwrap().immersion_jet(&l, [0.3, 1.1], 1, 6).unwrap();
        let e: f64 = x.iter().map(|c| c.d1(0) * c.d1(0)).sum();
        assert!((e - 1.0).abs() < 1e-14);
        assert!(SurfaceChart::flat_torus(1.2).is_err());
    }
}
