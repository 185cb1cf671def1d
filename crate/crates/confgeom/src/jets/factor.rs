use super::Jet;
use crate::{Error, Result};

/// Positive function λ on S³ selecting the metric λ²g₀ in the conformal class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConformalFactor {
    /// λ ≡ c.
    Constant(f64),
    /// λ(x) = a + b·x, positive on S³ when a > |b|.
    Affine { a: f64, b: [f64; 4] },
}

impl ConformalFactor {
    pub fn round() -> Self {
        ConformalFactor::Constant(1.0)
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::NonPositiveFactor(c));
        }
        Ok(ConformalFactor::Constant(c))
    }

    pub fn affine(a: f64, b: [f64; 4]) -> Result<Self> {
        let nb = libm::sqrt(b.iter().map(|v| v * v).sum());
        if !(a - nb > 0.0) {
            return Err(Error::NonPositiveFactor(a - nb));
        }
        Ok(ConformalFactor::Affine { a, b })
    }

    pub fn is_round(&self) -> bool {
        matches!(self, ConformalFactor::Constant(c) if *c == 1.0)
    }

    /// λ at an ambient point.
    pub fn value(&self, x: &[f64; 4]) -> f64 {
        match self {
            ConformalFactor::Constant(c) => *c,
            ConformalFactor::Affine { a, b } => a + (0..4).map(|i| b[i] * x[i]).sum::<f64>(),
        }
    }

    /// Ambient gradient Dλ at a point.
    pub fn gradient(&self, _x: &[f64; 4]) -> [f64; 4] {
        match self {
            ConformalFactor::Constant(_) => [0.0; 4],
            ConformalFactor::Affine { b, .. } => *b,
        }
    }

    /// λ composed with a jet-valued point.
    pub fn value_jet(&self, x: &[Jet; 4]) -> Jet {
        match self {
            ConformalFactor::Constant(c) => x[0].const_like(*c),
            ConformalFactor::Affine { a, b } => {
                let mut acc = x[0].scale(b[0]) + *a;
                for i in 1..4 {
                    acc += x[i].scale(b[i]);
                }
                acc
            }
        }
    }

    /// Dλ composed with a jet-valued point.
    pub fn gradient_jet(&self, x: &[Jet; 4]) -> [Jet; 4] {
        let g = self.gradient(&super::values(x));
        core::array::from_fn(|i| x[0].const_like(g[i]))
    }

    /// D²λ composed with a jet-valued point.
    pub fn hessian_jet(&self, x: &[Jet; 4]) -> [[Jet; 4]; 4] {
        core::array::from_fn(|_| core::array::from_fn(|_| x[0].const_like(0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_positivity() {
        assert!(ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).is_ok());
        assert!(ConformalFactor::affine(0.1, [0.2, 0.0, 0.0, 0.0]).is_err());
        assert!(ConformalFactor::constant(0.0).is_err());
        let f = ConformalFactor::affine(1.3, [0.2, 0.0, 0.0, 0.0]).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((f.value(&[s, 0.0, s, 0.0]) - 1.441421356).abs() < 1e-9);
    }
}
