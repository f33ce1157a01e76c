//! Brute-force references that share no code with the closed forms or the MB engine:
//! direct Feynman-parameter quadrature, Euler and Beta integrals, and the Appell F₂
//! double series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{BoxValue, Kinematics, Method};
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_re, CutPrescription};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 4000;
pub const DEFAULT_TOL: f64 = 1e-12;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature; returns (value, error estimate).
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let (v, e) = kronrod(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::Overflow("adaptive quadrature"));
        }
        if err <= tol * total.abs() || err < 1e-300 {
            return Ok((total, err));
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::NotConverged { delta: err / total.abs().max(1e-300), tol });
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (a, b, _, _) = parts.swap_remove(idx);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Err(Error::NotConverged { delta: err / total.abs().max(1e-300), tol });
        }
        let (v1, e1) = kronrod(&f, a, m);
        let (v2, e2) = kronrod(&f, m, b);
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrandKind {
    /// Massless box after the x- and y-integrations, in the Feynman parameter z.
    MasslessZ,
    /// One-mass box in the same parametrisation.
    OneMassZ,
    /// z^{ε−1}/(1 − w z), the Euler kernel of ₂F₁(1, ε; 1+ε; w).
    EulerF21,
    /// (y(1−y))^{ε−1}, the Beta-function kernel.
    BetaY,
}

/// A one-dimensional integrand on [0, 1] with power-law behaviour at its endpoints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub kind: IntegrandKind,
    pub kinematics: Option<Kinematics>,
    pub eps: f64,
    pub w_arg: f64,
    /// (endpoint, exponent p) with integrand ~ |z − endpoint|^p.
    pub singular_exponents: Vec<(f64, f64)>,
}

impl IntegrandSpec {
    pub fn massless(k: Kinematics) -> Self {
        let p = k.eps - 1.0;
        IntegrandSpec {
            kind: IntegrandKind::MasslessZ,
            kinematics: Some(k),
            eps: k.eps,
            w_arg: 0.0,
            singular_exponents: vec![(0.0, p), (1.0, p)],
        }
    }

    pub fn onemass(k: Kinematics) -> Self {
        IntegrandSpec {
            kind: IntegrandKind::OneMassZ,
            kinematics: Some(k),
            eps: k.eps,
            w_arg: 0.0,
            singular_exponents: vec![(1.0, k.eps - 1.0)],
        }
    }

    pub fn euler(eps: f64, w_arg: f64) -> Self {
        IntegrandSpec {
            kind: IntegrandKind::EulerF21,
            kinematics: None,
            eps,
            w_arg,
            singular_exponents: vec![(0.0, eps - 1.0)],
        }
    }

    pub fn beta(eps: f64) -> Self {
        IntegrandSpec {
            kind: IntegrandKind::BetaY,
            kinematics: None,
            eps,
            w_arg: 0.0,
            singular_exponents: vec![(0.0, eps - 1.0), (1.0, eps - 1.0)],
        }
    }

    fn exponent_at(&self, endpoint: f64) -> Option<f64> {
        self.singular_exponents.iter().find(|e| e.0 == endpoint).map(|e| e.1)
    }

    /// Integrand at z, given z and 1 − z separately so both endpoints keep full precision.
    pub fn eval(&self, z: f64, zc: f64) -> f64 {
        let eps = self.eps;
        match self.kind {
            IntegrandKind::MasslessZ | IntegrandKind::OneMassZ => {
                let k = self.kinematics.expect("kinematic integrand");
                let a = match k.msq {
                    Some(m) if self.kind == IntegrandKind::OneMassZ => z * (-k.s) + zc * (-m),
                    _ => z * (-k.s),
                };
                let b = zc * (-k.t);
                power_difference(a, b, eps)
            }
            IntegrandKind::EulerF21 => z.powf(eps - 1.0) / (1.0 - self.w_arg * z),
            IntegrandKind::BetaY => (z * zc).powf(eps - 1.0),
        }
    }

    /// ∫ over [lo, hi] ⊂ [0, 1]; an endpoint listed in `singular_exponents` is absorbed by
    /// the substitution |z − endpoint| = u^{1/(1+p)} when `substitute` is set.
    pub fn integrate_range(&self, lo: f64, hi: f64, substitute: bool, tol: f64) -> Result<(f64, f64)> {
        let near_zero = if lo == 0.0 { self.exponent_at(0.0) } else { None };
        let near_one = if hi == 1.0 { self.exponent_at(1.0) } else { None };
        match (substitute, near_zero, near_one) {
            (true, Some(p), None) => {
                let q = 1.0 / (1.0 + p);
                adaptive_gk(
                    |u| {
                        if u <= 0.0 {
                            return 0.0;
                        }
                        let z = u.powf(q).max(f64::MIN_POSITIVE);
                        self.eval(z, 1.0 - z) * q * z.powf(-p)
                    },
                    lo.powf(1.0 + p),
                    hi.powf(1.0 + p),
                    tol,
                )
            }
            (true, None, Some(p)) => {
                let q = 1.0 / (1.0 + p);
                adaptive_gk(
                    |u| {
                        if u <= 0.0 {
                            return 0.0;
                        }
                        let zc = u.powf(q).max(f64::MIN_POSITIVE);
                        self.eval(1.0 - zc, zc) * q * zc.powf(-p)
                    },
                    (1.0 - hi).powf(1.0 + p),
                    (1.0 - lo).powf(1.0 + p),
                    tol,
                )
            }
            (true, Some(_), Some(_)) => {
                let (a, ea) = self.integrate_range(lo, 0.5 * (lo + hi), true, tol)?;
                let (b, eb) = self.integrate_range(0.5 * (lo + hi), hi, true, tol)?;
                Ok((a + b, ea + eb))
            }
            _ => adaptive_gk(
                |z| {
                    if z <= 0.0 || z >= 1.0 {
                        return 0.0;
                    }
                    self.eval(z, 1.0 - z)
                },
                lo,
                hi,
                tol,
            ),
        }
    }

    pub fn integrate(&self, substitute: bool, tol: f64) -> Result<(f64, f64)> {
        let (a, ea) = self.integrate_range(0.0, 0.5, substitute, tol)?;
        let (b, eb) = self.integrate_range(0.5, 1.0, substitute, tol)?;
        Ok((a + b, ea + eb))
    }
}

/// (A^{ε−1} − B^{ε−1})/(B − A), continuous through A = B.
fn power_difference(a: f64, b: f64, eps: f64) -> f64 {
    let r = (b / a).ln();
    if r == 0.0 {
        return (1.0 - eps) * a.powf(eps - 2.0);
    }
    if r.abs() > 1.0 {
        return (a.powf(eps - 1.0) - b.powf(eps - 1.0)) / (b - a);
    }
    -a.powf(eps - 2.0) * ((eps - 1.0) * r).exp_m1() / r.exp_m1()
}

fn box_prefactor(eps: f64) -> Result<f64> {
    Ok((2.0 * ln_gamma_re(eps)? - ln_gamma_re(2.0 * eps)? + ln_gamma_re(1.0 - eps)?).re.exp())
}

fn feynman(spec: IntegrandSpec, tol: f64) -> Result<BoxValue> {
    let (v, err) = spec.integrate(true, tol)?;
    let pre = box_prefactor(spec.eps)?;
    let mut out = BoxValue::new(Complex64::new(pre * v, 0.0), Method::Feynman);
    out.diagnostics.insert("error_estimate".into(), pre * err);
    Ok(out)
}

/// Massless box from the one-dimensional Feynman-parameter integral.
pub fn feynman_1d_massless(k: &Kinematics) -> Result<BoxValue> {
    feynman_1d_massless_tol(k, DEFAULT_TOL)
}

pub fn feynman_1d_massless_tol(k: &Kinematics, tol: f64) -> Result<BoxValue> {
    k.validate()?;
    if k.msq.is_some() {
        return Err(Error::Domain("massless oracle given an external mass".into()));
    }
    feynman(IntegrandSpec::massless(*k), tol)
}

/// One-mass box from the one-dimensional Feynman-parameter integral.
pub fn feynman_1d_onemass(k: &Kinematics) -> Result<BoxValue> {
    feynman_1d_onemass_tol(k, DEFAULT_TOL)
}

pub fn feynman_1d_onemass_tol(k: &Kinematics, tol: f64) -> Result<BoxValue> {
    k.validate()?;
    if k.msq.is_none() {
        return Err(Error::Domain("one-mass oracle needs msq".into()));
    }
    feynman(IntegrandSpec::onemass(*k), tol)
}

/// Excision radii used for the principal value.
pub const PV_RADII: [f64; 3] = [1e-3, 1e-4, 1e-5];

/// ∫₀¹ z^{ε−1}(1 − w z)^{−1} dz, which equals ₂F₁(1, ε; 1+ε; w)/ε.
///
/// For w > 1 the pole at z = 1/w is excised symmetrically with radii [`PV_RADII`] and the
/// excision error (odd in the radius) is removed by Richardson extrapolation; the cut
/// prescription then adds ±iπ times the residue.
pub fn euler_f21_oracle(eps: f64, w_arg: f64, cut: CutPrescription) -> Result<Complex64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidRegulator(eps));
    }
    if w_arg == 1.0 {
        return Err(Error::Domain("Euler integral diverges at w = 1".into()));
    }
    let spec = IntegrandSpec::euler(eps, w_arg);
    if w_arg < 1.0 {
        return Ok(Complex64::new(spec.integrate(true, DEFAULT_TOL)?.0, 0.0));
    }
    let z0 = 1.0 / w_arg;
    let big = 0.5 * z0.min(1.0 - z0);
    let outer = spec.integrate_range(0.0, z0 - big, true, DEFAULT_TOL)?.0
        + spec.integrate_range(z0 + big, 1.0, false, DEFAULT_TOL)?.0;
    // ∫_r^R [f(z0 + x) + f(z0 − x)] dx has a smooth integrand, so only the excised core is O(r)
    let f = |z: f64| z.powf(eps - 1.0) / (1.0 - w_arg * z);
    let paired = |x: f64| f(z0 + x) + f(z0 - x);
    let vals: Vec<f64> = PV_RADII
        .iter()
        .map(|&r| adaptive_gk(paired, r, big, DEFAULT_TOL).map(|v| outer + v.0))
        .collect::<Result<_>>()?;
    let pv = richardson_odd(&PV_RADII, &vals);
    // pole residue of the kernel: z0^{ε−1}/w = z0^ε
    let jump = std::f64::consts::PI * z0.powf(eps);
    Ok(match cut {
        CutPrescription::PrincipalValue => Complex64::new(pv, 0.0),
        CutPrescription::AboveCut => Complex64::new(pv, jump),
        CutPrescription::BelowCut => Complex64::new(pv, -jump),
    })
}

/// Extrapolates V(r) = V₀ + a r + b r³ to r = 0 from three samples.
pub fn richardson_odd(r: &[f64; 3], v: &[f64]) -> f64 {
    // Lagrange-type elimination in the basis {1, r, r³}
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let row = |i: usize| [1.0, r[i], r[i].powi(3)];
    let a = [row(0), row(1), row(2)];
    let mut a0 = a;
    for i in 0..3 {
        a0[i][0] = v[i];
    }
    det(a0) / det(a)
}

/// ∫₀¹ (y(1−y))^{ε−1} dy = Γ²(ε)/Γ(2ε), for 0 < ε ≤ 1.
pub fn beta_oracle(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidRegulator(eps));
    }
    Ok(IntegrandSpec::beta(eps).integrate(true, DEFAULT_TOL)?.0)
}

/// Appell F₂(α; β, β′; γ, γ′; x, y) = Σ (α)_{k+n}(β)_k(β′)_n/((γ)_k(γ′)_n k! n!) x^k yⁿ,
/// summed term by term for |x| + |y| < 1.
pub fn f2_double_series(alpha: f64, beta: f64, beta_p: f64, gamma1: f64, gamma2: f64, x: f64, y: f64) -> Result<Complex64> {
    if x.abs() + y.abs() >= 1.0 {
        return Err(Error::NonConvergence(format!("F2 series needs |x| + |y| < 1, got {}", x.abs() + y.abs())));
    }
    const MAX_ROWS: usize = 20_000;
    let mut total = 0.0;
    let mut row_lead = 1.0;
    let mut quiet = 0;
    for k in 0..MAX_ROWS {
        let kf = k as f64;
        let mut term = row_lead;
        let mut row = 0.0;
        let mut n = 0usize;
        loop {
            row += term;
            let nf = n as f64;
            term *= (alpha + kf + nf) * (beta_p + nf) / ((gamma2 + nf) * (nf + 1.0)) * y;
            n += 1;
            if term.abs() <= 1e-17 * row.abs().max(1e-300) || term == 0.0 {
                break;
            }
            if n > MAX_ROWS {
                return Err(Error::NonConvergence("F2 inner series".into()));
            }
        }
        total += row;
        if !total.is_finite() {
            return Err(Error::Overflow("F2 series"));
        }
        if row.abs() <= 1e-13 * 1e-3 * total.abs() {
            quiet += 1;
            if quiet == 3 {
                return Ok(Complex64::new(total, 0.0));
            }
        } else {
            quiet = 0;
        }
        row_lead *= (alpha + kf) * (beta + kf) / ((gamma1 + kf) * (kf + 1.0)) * x;
        if row_lead == 0.0 {
            return Ok(Complex64::new(total, 0.0));
        }
    }
    Err(Error::NonConvergence("F2 outer series".into()))
}
