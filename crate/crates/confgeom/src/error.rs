use thiserror::Error;

/// Errors raised by the geometric pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("reciprocal of a jet with zero constant term")]
    JetReciprocalOfZero,
    #[error("sqrt or log of a jet with non-positive constant term ({0})")]
    JetNonPositive(f64),
    #[error("requested jet order {requested} exceeds the limit {limit}")]
    JetOrderTooHigh { requested: usize, limit: usize },
    #[error("direction vector is not a unit vector (|dir| = {0})")]
    NonUnitDirection(f64),
    #[error("rotation axes must satisfy 1 <= i < j <= 4, got ({0}, {1})")]
    BadRotationAxes(usize, usize),
    #[error("matrix is not an orthochronous proper Lorentz map: {0}")]
    NotLorentz(&'static str),
    #[error("time component {0} of a light-cone vector is not positive")]
    NonPositiveTime(f64),
    #[error("parameter out of range: {0}")]
    BadParameter(&'static str),
    #[error("degenerate immersion (E = {0})")]
    DegenerateImmersion(f64),
    #[error("conformal factor is not positive ({0})")]
    NonPositiveFactor(f64),
    #[error("umbilic point (|det Omega| = {0})")]
    Umbilic(f64),
    #[error("degenerate ambient point (|det G| = {0})")]
    DegenerateAmbient(f64),
    #[error("integrability residual {0} exceeds tolerance {1}")]
    Integrability(f64, f64),
    #[error("Gram drift {0} exceeds tolerance {1}")]
    GramDrift(f64, f64),
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
