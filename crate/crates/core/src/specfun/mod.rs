//! Complex special functions: Γ, ψ, Li₂ and the Gauss hypergeometric families
//! ₂F₁(1, ε; 1+ε; z), ₂F₁(1, 1+ε; 2+ε; z), ₂F₁(1, 1; 2−ε; z) with their continuations.

mod bernoulli;
mod cut;
mod dilog;
mod gamma;
mod hyp;
mod lerch;

pub use cut::{CutPrescription, Side};
pub use dilog::li2;
pub use gamma::{digamma, digamma_re, gamma, ln_gamma, ln_gamma_re, polygamma_fd, EULER_GAMMA};
pub use hyp::{
    appell_f2_reduced, continuation_314, continuation_36, continuation_58, f21_11, f21_1e, f21_2e,
    f21_a1, f21_general_series,
};
pub use lerch::lerch_phi;

use num_complex::Complex64;

use crate::error::Result;

/// ln(1 − z) with the cut of z along [1, ∞).
pub fn ln_1m(z: Complex64, cut: CutPrescription) -> Result<Complex64> {
    if cut::on_cut(z, 1.0) {
        cut.resolve(|side| Ok(cut::ln_neg(z.re - 1.0, side)))
    } else {
        Ok((1.0 - z).ln())
    }
}

/// (−x)^p for real x, taking (−1)^p = e^{iπp} when x > 0.
pub fn neg_pow(x: f64, p: f64) -> Complex64 {
    if x < 0.0 {
        Complex64::new((-x).powf(p), 0.0)
    } else {
        Complex64::from_polar(x.powf(p), std::f64::consts::PI * p)
    }
}
