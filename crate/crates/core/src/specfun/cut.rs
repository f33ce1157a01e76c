use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// How a function is evaluated on its branch cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutPrescription {
    #[default]
    PrincipalValue,
    AboveCut,
    BelowCut,
}

/// Side of a cut approached by a boundary value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    /// +1 above, −1 below.
    pub fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }
}

impl CutPrescription {
    /// Combines one-sided boundary values; PV averages both sides.
    pub fn resolve<F>(self, mut f: F) -> Result<Complex64>
    where
        F: FnMut(Side) -> Result<Complex64>,
    {
        match self {
            CutPrescription::AboveCut => f(Side::Above),
            CutPrescription::BelowCut => f(Side::Below),
            CutPrescription::PrincipalValue => Ok(0.5 * (f(Side::Above)? + f(Side::Below)?)),
        }
    }

    /// The prescription seen after a map that reverses orientation across the cut.
    pub fn flip(self) -> CutPrescription {
        match self {
            CutPrescription::AboveCut => CutPrescription::BelowCut,
            CutPrescription::BelowCut => CutPrescription::AboveCut,
            CutPrescription::PrincipalValue => CutPrescription::PrincipalValue,
        }
    }
}

/// True for real z strictly above `x0`, i.e. on a cut [x0, ∞).
pub(crate) fn on_cut(z: Complex64, x0: f64) -> bool {
    z.im == 0.0 && z.re > x0
}

/// ln of a negative real number approached from the given side of the positive-real cut of the
/// original variable: for z = x ± i0 with x > 0 this is ln(−z) = ln x ∓ iπ.
pub(crate) fn ln_neg(x: f64, side: Side) -> Complex64 {
    Complex64::new(x.ln(), -side.sign() * std::f64::consts::PI)
}
