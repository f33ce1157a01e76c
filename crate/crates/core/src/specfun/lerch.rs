use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::bernoulli;
use super::cut::{ln_neg, on_cut, Side};
use super::gamma::{digamma_re, EULER_GAMMA};
use crate::error::{finite, Error, Result};

const R_DIRECT: f64 = 0.6;
const R_PFAFF: f64 = 0.7;
const MAX_TERMS: usize = 100_000;
const MAX_LOG_TERMS: usize = 60;

/// Sums terms produced by `next` until two successive increments fall below 1e-16·|sum|.
pub(crate) fn sum_series<F>(mut next: F, what: &str) -> Result<Complex64>
where
    F: FnMut(usize) -> Complex64,
{
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let t = next(n);
        sum += t;
        if t.norm() <= 1e-16 * sum.norm() {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Overflow("series"));
        }
    }
    Err(Error::NonConvergence(format!("{what}: {MAX_TERMS} terms")))
}

fn direct(z: Complex64, a: f64) -> Result<Complex64> {
    let mut p = Complex64::new(1.0, 0.0);
    sum_series(
        |n| {
            let t = p / (n as f64 + a);
            p *= z;
            t
        },
        "lerch direct",
    )
}

/// L(z, a) = (1 − z)^{−1} Σ n!/(a)_{n+1} xⁿ with x = z/(z − 1).
fn pfaff(z: Complex64, a: f64) -> Result<Complex64> {
    let x = z / (z - 1.0);
    let mut t = Complex64::new(1.0 / a, 0.0);
    let s = sum_series(
        |n| {
            let out = t;
            t *= x * ((n + 1) as f64 / (a + 1.0 + n as f64));
            out
        },
        "lerch pfaff",
    )?;
    Ok(s / (1.0 - z))
}

/// Bernoulli polynomial B_k(a).
fn bernoulli_poly(k: usize, a: f64) -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        sum += binom * bernoulli(j) * a.powi((k - j) as i32);
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    sum
}

/// Expansion about z = 1:
/// L(z, a) = z^{−a}[−ln(−ln z) − γ − ψ(a) − Σ_k B_k(a)(ln z)^k/(k·k!)].
fn near_one(z: Complex64, a: f64, side: Side) -> Result<Complex64> {
    let lz = z.ln();
    let ln_neg_lz = if on_cut(z, 1.0) {
        ln_neg(lz.re, side)
    } else {
        (-lz).ln()
    };
    let mut sum = -ln_neg_lz - EULER_GAMMA - digamma_re(a)?;
    let mut p = Complex64::new(1.0, 0.0);
    let mut fact = 1.0;
    let mut small = 0;
    for k in 1..=MAX_LOG_TERMS {
        p *= lz;
        fact *= k as f64;
        let t = -bernoulli_poly(k, a) * p / (k as f64 * fact);
        sum += t;
        if t.norm() <= 1e-16 * sum.norm() {
            small += 1;
            if small == 2 {
                return Ok((-a * lz).exp() * sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence(format!("lerch expansion near 1 at z = {z}")))
}

/// ln(−z), with the boundary value for real z > 0.
fn ln_minus(z: Complex64, side: Side) -> Complex64 {
    if on_cut(z, 0.0) {
        ln_neg(z.re, side)
    } else {
        (-z).ln()
    }
}

/// x − sin x without cancellation.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() > 0.5 {
        return x - x.sin();
    }
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0_f64;
    let mut k = 3.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        sum += term;
        term *= -x2 / ((k + 1.0) * (k + 2.0));
        k += 2.0;
    }
    sum
}

/// Large-|z| reflection L(z, a) = z^{−1} L(1/z, 1 − a) + π (−z)^{−a} / sin(πa).
///
/// For a = N + η near a positive integer N the n = N − 1 term of the inner sum and the
/// sine term are each O(1/η); they are combined analytically.
fn reflect(z: Complex64, a: f64, side: Side) -> Result<Complex64> {
    let ell = ln_minus(z, side);
    let n_int = a.round();
    if n_int < 1.0 {
        let inner = direct(1.0 / z, 1.0 - a)?;
        return Ok(inner / z + PI * (-a * ell).exp() / (PI * a).sin());
    }
    let skip = n_int as usize - 1;
    let eta = a - n_int;
    let w = 1.0 / z;
    let mut p = Complex64::new(1.0, 0.0);
    let inner = sum_series(
        |n| {
            let t = if n == skip { Complex64::new(0.0, 0.0) } else { p / (n as f64 + 1.0 - a) };
            p *= w;
            t
        },
        "lerch reflection",
    )?;
    // π(−z)^{−η}/sin(πη) − 1/η
    let bracket = if eta == 0.0 {
        -ell
    } else {
        let s = (PI * eta).sin();
        PI * expm1(-eta * ell) / s + x_minus_sin(PI * eta) / (eta * s)
    };
    Ok(inner / z + bracket * w.powi(n_int as i32))
}

fn expm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        z * (1.0 + z * (0.5 + z / 6.0))
    } else if z.norm() < 0.5 {
        // e^z − 1 = 2 e^{z/2} sinh(z/2)
        let h = 0.5 * z;
        2.0 * h.exp() * h.sinh()
    } else {
        z.exp() - 1.0
    }
}

/// Lerch transcendent Φ(z, 1, a) = Σ_{n≥0} zⁿ/(n + a), continued to the plane cut along [1, ∞).
///
/// `side` selects the boundary value for real z > 1 and is ignored elsewhere.
pub fn lerch_phi(z: Complex64, a: f64, side: Side) -> Result<Complex64> {
    if a <= 0.0 && a.fract() == 0.0 {
        return Err(Error::Domain(format!("lerch_phi parameter a = {a} is a non-positive integer")));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain("lerch_phi diverges at z = 1".into()));
    }
    let v = if z.norm() <= R_DIRECT {
        direct(z, a)?
    } else if z.re < 0.5 && (z / (z - 1.0)).norm() <= R_PFAFF {
        pfaff(z, a)?
    } else if z.norm() >= 1.0 / R_DIRECT {
        reflect(z, a, side)?
    } else {
        near_one(z, a, side)?
    };
    finite(v, "lerch_phi")
}
