use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::EVEN;
use super::cut::{ln_neg, on_cut, CutPrescription, Side};
use crate::error::{finite, Result};

const ZETA2: f64 = PI * PI / 6.0;

/// Li₂ in the unit disc with Re z ≤ 1/2, via the Bernoulli series in u = −ln(1 − z).
fn li2_bernoulli(z: Complex64) -> Complex64 {
    let u = -(1.0 - z).ln();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut p = u;
    let mut fact = 1.0;
    for (k, &b) in EVEN.iter().enumerate().skip(1).take(22) {
        let n = 2 * k;
        p *= u2;
        fact *= (n * (n + 1)) as f64;
        let term = b * p / fact;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Li₂ off the cut [1, ∞) with principal logarithms.
fn li2_principal(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(ZETA2, 0.0);
    }
    if z.norm() > 1.0 {
        let l = (-z).ln();
        return -li2_principal(1.0 / z) - ZETA2 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        return -li2_principal(1.0 - z) + ZETA2 - z.ln() * (1.0 - z).ln();
    }
    li2_bernoulli(z)
}

/// Boundary value of Li₂ at real x > 1.
fn li2_on_cut(x: f64, side: Side) -> Complex64 {
    let l = ln_neg(x, side);
    -li2_principal(Complex64::new(1.0 / x, 0.0)) - ZETA2 - 0.5 * l * l
}

/// Dilogarithm Σ zⁿ/n² continued to the plane cut along [1, ∞).
pub fn li2(z: Complex64, cut: CutPrescription) -> Result<Complex64> {
    let v = if on_cut(z, 1.0) {
        cut.resolve(|side| Ok(li2_on_cut(z.re, side)))?
    } else {
        li2_principal(z)
    };
    finite(v, "li2")
}
