use num_complex::Complex64;

use crate::series::Regulator;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("overflow in {0}")]
    Overflow(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by a series whose leading coefficient vanishes")]
    DivisionByZeroSeries,
    #[error("series labels differ: {0:?} vs {1:?}")]
    LabelMismatch(Regulator, Regulator),
    #[error("kinematics outside the Euclidean region: {0}")]
    EuclideanRegionViolation(String),
    #[error("regulator eps = {0} outside (0, 1)")]
    InvalidRegulator(f64),
    #[error("degenerate kinematics: {0}")]
    DegenerateKinematics(String),
    #[error("no feasible contour: {0}")]
    InfeasibleContour(String),
    #[error("quadrature not converged: delta {delta:e} exceeds tolerance {tol:e}")]
    NotConverged { delta: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects NaN or infinite components.
pub(crate) fn finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow(what))
    }
}
