use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{finite, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Analytic branch of ln Γ(z), continuous away from the negative real axis.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    let v = if z.re >= 0.5 {
        ln_gamma_lanczos(z)
    } else if z.re >= -40.0 {
        // upward recurrence keeps the analytic branch
        let n = (0.5 - z.re).ceil() as usize;
        let mut acc = ln_gamma_lanczos(z + n as f64);
        for k in 0..n {
            acc -= (z + k as f64).ln();
        }
        acc
    } else {
        let s = (PI * z).sin();
        Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_lanczos(1.0 - z)
    };
    finite(v, "ln_gamma")
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    finite(ln_gamma(z)?.exp(), "gamma")
}

/// ln Γ for real arguments; complex because Γ may be negative.
pub fn ln_gamma_re(x: f64) -> Result<Complex64> {
    ln_gamma(Complex64::new(x, 0.0))
}

pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        // ψ(z) = ψ(1 − z) − π cot(πz)
        let w = PI * z;
        let v = digamma(1.0 - z)? - PI * w.cos() / w.sin();
        return finite(v, "digamma");
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let r = 1.0 / (z * z);
    // Bernoulli asymptotic tail B_2k / (2k z^2k)
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut tail = Complex64::new(0.0, 0.0);
    for &c in C.iter().rev() {
        tail = (tail + c) * r;
    }
    finite(acc + z.ln() - 0.5 / z - tail, "digamma")
}

pub fn digamma_re(x: f64) -> Result<f64> {
    digamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

/// d^k ψ / dx^k at real x for k ≤ 3, by Richardson-extrapolated central differences.
pub fn polygamma_fd(k: usize, x: f64) -> Result<f64> {
    if k == 0 {
        return digamma_re(x);
    }
    let stencil = |h: f64| -> Result<f64> {
        let f = |d: f64| digamma_re(x + d);
        Ok(match k {
            1 => (f(h)? - f(-h)?) / (2.0 * h),
            2 => (f(h)? - 2.0 * f(0.0)? + f(-h)?) / (h * h),
            3 => (f(2.0 * h)? - 2.0 * f(h)? + 2.0 * f(-h)? - f(-2.0 * h)?) / (2.0 * h * h * h),
            _ => return Err(Error::Domain(format!("polygamma order {k} unsupported"))),
        })
    };
    let h = match k {
        1 => 1e-4,
        2 => 2e-3,
        _ => 1e-2,
    };
    let d1 = stencil(h)?;
    let d2 = stencil(h / 2.0)?;
    Ok((4.0 * d2 - d1) / 3.0)
}
