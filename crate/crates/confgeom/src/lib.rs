//! Conformal geometry of surfaces in the 3-sphere, computed through the
//! homogeneous lift into Minkowski 5-spacetime R^{1,4}.
//!
//! The crate is `no_std` (it needs `alloc`). Every derivative is taken with
//! truncated Taylor jets, so identities between high-order quantities are
//! checked at machine precision rather than through finite differences.
//!
//! Layout:
//! - [`mink5`]: Lorentz inner product, Lorentz maps, Möbius action on S³.
//! - [`jets`]: multivariate truncated Taylor arithmetic, surface catalog,
//!   conformal factors.
//! - [`classical`]: fundamental forms, conformal change, curvature of λ²g₀.
//! - [`frame`]: conformal Gauss map, y†, y*, ω, Ω, Ω*, Willmore operator.
//! - [`ambient`]: associate 4-surface, ruled 3-surface, scalar invariants.
//! - [`integrability`]: Gauss–Codazzi residuals and the structure equations.
//! - [`reconstruct`]: RK4 reconstruction of a surface from conformal data.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ambient;
pub mod classical;
mod error;
pub mod frame;
pub mod integrability;
pub mod jets;
pub mod linalg;
pub mod mink5;
pub mod reconstruct;

pub use error::{Error, Result};
