//! Hypergeometric closed forms of the massless and one-mass boxes and their ε-expansions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{f21_2e_expansion, gamma_series, power_series, Regulator, RegulatorSeries};
use crate::specfun::{f21_1e, f21_2e, li2, ln_gamma_re, CutPrescription};

/// One evaluation point: invariants s, t, optional external mass m², regulator ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kinematics {
    pub s: f64,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msq: Option<f64>,
    pub eps: f64,
}

const DEGENERACY_TOL: f64 = 1e-12;

impl Kinematics {
    pub fn massless(s: f64, t: f64, eps: f64) -> Self {
        Kinematics { s, t, msq: None, eps }
    }

    pub fn onemass(s: f64, t: f64, msq: f64, eps: f64) -> Self {
        Kinematics { s, t, msq: Some(msq), eps }
    }

    pub fn with_eps(self, eps: f64) -> Self {
        Kinematics { eps, ..self }
    }

    /// All invariants multiplied by λ.
    pub fn scaled(self, lambda: f64) -> Self {
        Kinematics {
            s: lambda * self.s,
            t: lambda * self.t,
            msq: self.msq.map(|m| lambda * m),
            eps: self.eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [Some(self.s), Some(self.t), self.msq, Some(self.eps)];
        if vals.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite kinematic input".into()));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidRegulator(self.eps));
        }
        if self.s >= 0.0 || self.t >= 0.0 {
            return Err(Error::EuclideanRegionViolation(format!(
                "need s < 0 and t < 0, got s = {}, t = {}",
                self.s, self.t
            )));
        }
        if let Some(m) = self.msq {
            if m >= 0.0 {
                return Err(Error::EuclideanRegionViolation(format!("need m² < 0, got {m}")));
            }
            let scale = self.s.abs().max(self.t.abs()).max(m.abs());
            let tol = DEGENERACY_TOL * scale;
            for (v, what) in [(self.s + self.t - m, "s + t = m²"), (self.s - m, "s = m²"), (self.t - m, "t = m²")] {
                if v.abs() < tol {
                    return Err(Error::DegenerateKinematics(what.into()));
                }
            }
        }
        Ok(())
    }

    fn require_massless(&self) -> Result<()> {
        self.validate()?;
        match self.msq {
            None => Ok(()),
            Some(_) => Err(Error::Domain("massless evaluator given an external mass".into())),
        }
    }

    fn require_mass(&self) -> Result<f64> {
        self.validate()?;
        self.msq.ok_or_else(|| Error::Domain("one-mass evaluator needs msq".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    ClosedAlt,
    Mb,
    Residue,
    Feynman,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Closed, Method::ClosedAlt, Method::Mb, Method::Residue, Method::Feynman];

    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::ClosedAlt => "closed_alt",
            Method::Mb => "mb",
            Method::Residue => "residue",
            Method::Feynman => "feynman",
        }
    }
}

/// A box value with its method tag, numeric diagnostics and named partial pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxValue {
    pub value: Complex64,
    pub method: Method,
    #[serde(default)]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default)]
    pub pieces: BTreeMap<String, Complex64>,
}

impl BoxValue {
    pub fn new(value: Complex64, method: Method) -> Self {
        BoxValue { value, method, diagnostics: BTreeMap::new(), pieces: BTreeMap::new() }
    }
}

/// Auxiliary ratios of the one-mass Feynman-parameter integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneMassAux {
    pub z0: f64,
    pub z1: f64,
}

/// ln[Γ²(ε)/Γ(2ε)·Γ(1−ε)]; real since every factor is positive for 0 < ε < 1.
fn ln_box_prefactor(eps: f64) -> Result<f64> {
    Ok((2.0 * ln_gamma_re(eps)? - ln_gamma_re(2.0 * eps)? + ln_gamma_re(1.0 - eps)?).re)
}

/// e^{lnk} (−x)^ε, assembled in log space.
fn scaled_power(lnk: f64, x: f64, eps: f64) -> Complex64 {
    Complex64::new((lnk + eps * (-x).ln()).exp(), 0.0)
}

/// Massless box as the sum of two ₂F₁(1, ε; 1+ε; ·) terms.
pub fn massless_box(k: &Kinematics, cut: CutPrescription) -> Result<BoxValue> {
    k.require_massless()?;
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lnk = ln_box_prefactor(eps)? - eps.ln();
    let a = scaled_power(lnk, s, eps) * f21_1e(Complex64::new(1.0 + s / t, 0.0), eps, cut)?;
    let b = scaled_power(lnk, t, eps) * f21_1e(Complex64::new(1.0 + t / s, 0.0), eps, cut)?;
    Ok(BoxValue::new((a + b) / (s * t), Method::Closed))
}

/// (−x)^ε [1/ε + w/(1+ε) ₂F₁(1, 1+ε; 2+ε; w)], the split form of one ₂F₁(1, ε; 1+ε; w) term.
fn split_term(lng: f64, x: f64, w: f64, eps: f64, cut: CutPrescription) -> Result<Complex64> {
    let p = scaled_power(lng, x, eps);
    let h = w / (1.0 + eps) * f21_2e(Complex64::new(w, 0.0), eps, cut)?;
    Ok(p / eps + p * h)
}

/// Massless box in the form that separates the pure pole terms.
pub fn massless_box_alt(k: &Kinematics, cut: CutPrescription) -> Result<BoxValue> {
    k.require_massless()?;
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lng = ln_box_prefactor(eps)?;
    let v = split_term(lng, s, 1.0 + s / t, eps, cut)? + split_term(lng, t, 1.0 + t / s, eps, cut)?;
    Ok(BoxValue::new(v / (s * t), Method::ClosedAlt))
}

pub fn onemass_aux(k: &Kinematics) -> Result<OneMassAux> {
    let m = k.require_mass()?;
    Ok(OneMassAux { z0: (m - k.t) / (m - k.t - k.s), z1: m / (m - k.s) })
}

/// The three ₂F₁ arguments of the one-mass box: (s+t−m²)/t, m²(s+t−m²)/(st), (s+t−m²)/s.
pub fn onemass_arguments(s: f64, t: f64, m: f64) -> [f64; 3] {
    let u = s + t - m;
    [u / t, m * u / (s * t), u / s]
}

/// One-mass box: I^m₁ ((−s)^ε and (−m²)^ε terms) plus I^m₂ ((−t)^ε term).
pub fn onemass_box(k: &Kinematics, cut: CutPrescription) -> Result<BoxValue> {
    let m = k.require_mass()?;
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lnk = ln_box_prefactor(eps)? - eps.ln();
    let [w1, w2, w3] = onemass_arguments(s, t, m);
    let f = |w: f64| f21_1e(Complex64::new(w, 0.0), eps, cut);
    let im1 = (scaled_power(lnk, s, eps) * f(w1)? - scaled_power(lnk, m, eps) * f(w2)?) / (s * t);
    let im2 = scaled_power(lnk, t, eps) * f(w3)? / (s * t);
    let mut out = BoxValue::new(im1 + im2, Method::Closed);
    out.pieces.insert("Im1".into(), im1);
    out.pieces.insert("Im2".into(), im2);
    Ok(out)
}

/// One-mass box in the three-term pole-separated form.
pub fn onemass_box_alt(k: &Kinematics, cut: CutPrescription) -> Result<BoxValue> {
    let m = k.require_mass()?;
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lng = ln_box_prefactor(eps)?;
    let [w1, w2, w3] = onemass_arguments(s, t, m);
    let v = split_term(lng, s, w1, eps, cut)? + split_term(lng, t, w3, eps, cut)? - split_term(lng, m, w2, eps, cut)?;
    Ok(BoxValue::new(v / (s * t), Method::ClosedAlt))
}

fn eps_const(c: f64, order: i32) -> RegulatorSeries {
    RegulatorSeries::constant(Regulator::Epsilon, Complex64::new(c, 0.0), order)
}

/// Γ²(1+ε)Γ(1−ε)/Γ(1+2ε) through ε².
fn gamma_ratio_series() -> Result<RegulatorSeries> {
    let g = gamma_series(1.0, 2, Regulator::Epsilon)?;
    g.mul(&g)?.mul(&g.scale_var(-1.0))?.div(&g.scale_var(2.0))
}

/// 2/(s t ε²)·Γ²(1+ε)Γ(1−ε)/Γ(1+2ε)·bracket, through ε⁰.
fn with_pole_prefactor(s: f64, t: f64, bracket: &RegulatorSeries) -> Result<RegulatorSeries> {
    let pre = RegulatorSeries::monomial(Regulator::Epsilon, -2, Complex64::new(2.0 / (s * t), 0.0), 3);
    pre.mul(&gamma_ratio_series()?)?.mul(bracket).map(|r| r.truncate(1))
}

/// Laurent coefficients ε⁻², ε⁻¹, ε⁰ of the massless box from the dilogarithm-simplified form.
pub fn massless_box_laurent(k: &Kinematics) -> Result<RegulatorSeries> {
    k.require_massless()?;
    let (s, t) = (k.s, k.t);
    let l = (s / t).ln();
    let finite = -0.5 * l * l - PI * PI / 6.0 - PI * PI / 3.0;
    let bracket = power_series(Complex64::new(-s, 0.0), 2, Regulator::Epsilon)?
        .add(&power_series(Complex64::new(-t, 0.0), 2, Regulator::Epsilon)?)?
        .add(&RegulatorSeries::monomial(Regulator::Epsilon, 2, Complex64::new(finite, 0.0), 3))?;
    with_pole_prefactor(s, t, &bracket)
}

/// Σ_j σ_j (−x_j)^ε [1 + ε·w_j/(1+ε)·₂F₁(1, 1+ε; 2+ε; w_j)], expanded through ε².
fn split_bracket(terms: &[(f64, f64, f64)]) -> Result<RegulatorSeries> {
    let mut acc = eps_const(0.0, 3);
    for &(sign, x, w) in terms {
        let p = power_series(Complex64::new(-x, 0.0), 2, Regulator::Epsilon)?;
        let h = f21_2e_expansion(Complex64::new(w, 0.0), 1, CutPrescription::PrincipalValue)?;
        let eh = RegulatorSeries::monomial(Regulator::Epsilon, 1, Complex64::new(1.0, 0.0), 3).mul(&h)?;
        let term = p.mul(&eh.add_const(Complex64::new(1.0, 0.0)))?;
        acc = acc.add(&term.scale(Complex64::new(sign, 0.0)))?;
    }
    Ok(acc)
}

/// Massless Laurent coefficients through the split form and the Li₂ expansion, without the
/// dilogarithm simplification; agrees with [`massless_box_laurent`].
pub fn massless_box_laurent_split(k: &Kinematics) -> Result<RegulatorSeries> {
    k.require_massless()?;
    let (s, t) = (k.s, k.t);
    let bracket = split_bracket(&[(1.0, s, 1.0 + s / t), (1.0, t, 1.0 + t / s)])?;
    with_pole_prefactor(s, t, &bracket)
}

/// Laurent coefficients ε⁻², ε⁻¹, ε⁰ of the one-mass box.
pub fn onemass_box_laurent(k: &Kinematics) -> Result<RegulatorSeries> {
    let m = k.require_mass()?;
    let (s, t) = (k.s, k.t);
    let [w1, w2, w3] = onemass_arguments(s, t, m);
    let bracket = split_bracket(&[(1.0, s, w1), (1.0, t, w3), (-1.0, m, w2)])?;
    with_pole_prefactor(s, t, &bracket)
}

/// Li₂(−s/t) + Li₂(−t/s) and its closed form −½ln²(s/t) − π²/6.
pub fn massless_dilog_pair(s: f64, t: f64) -> Result<(f64, f64)> {
    let pv = CutPrescription::PrincipalValue;
    let lhs = li2(Complex64::new(-s / t, 0.0), pv)?.re + li2(Complex64::new(-t / s, 0.0), pv)?.re;
    let l = (s / t).ln();
    Ok((lhs, -0.5 * l * l - PI * PI / 6.0))
}

/// Li₂((m²−t)/s) + Li₂((m²−s)/t) − Li₂((m²−s)(m²−t)/(st)) − π²/6, summed directly.
pub fn onemass_dilog_combination(s: f64, t: f64, m: f64) -> Result<f64> {
    let pv = CutPrescription::PrincipalValue;
    let l = |x: f64| li2(Complex64::new(x, 0.0), pv).map(|v| v.re);
    Ok(l((m - t) / s)? + l((m - s) / t)? - l((m - s) * (m - t) / (s * t))? - PI * PI / 6.0)
}

/// The same combination with every Li₂(x) replaced through Li₂(x) = π²/6 − ln x ln(1−x) − Li₂(1−x),
/// real parts taken.
pub fn onemass_dilog_combination_reflected(s: f64, t: f64, m: f64) -> Result<f64> {
    let pv = CutPrescription::PrincipalValue;
    let l = |x: f64| -> Result<f64> {
        let r = li2(Complex64::new(1.0 - x, 0.0), pv)?.re;
        Ok(PI * PI / 6.0 - x.abs().ln() * (1.0 - x).abs().ln() - r)
    };
    Ok(l((m - t) / s)? + l((m - s) / t)? - l((m - s) * (m - t) / (s * t))? - PI * PI / 6.0)
}

/// Order-ε² coefficient of the one-mass split bracket, written through the dilogarithm
/// combination above and the surviving logarithms.
pub fn onemass_bracket_eps2(s: f64, t: f64, m: f64) -> Result<f64> {
    let [w1, w2, w3] = onemass_arguments(s, t, m);
    let (ls, lt, lm) = ((-s).ln(), (-t).ln(), (-m).ln());
    let h = |w: f64| -(1.0 - w).abs().ln();
    let logs = 0.5 * (ls * ls + lt * lt - lm * lm) + ls * h(w1) + lt * h(w3) - lm * h(w2);
    let lnp = |w: f64| w.abs().ln() * (1.0 - w).abs().ln();
    let reflected = onemass_dilog_combination(s, t, m)? + lnp(w1) + lnp(w3) - lnp(w2);
    Ok(logs + reflected)
}

/// ε²·I at one ε, the smooth function used for numeric Laurent extraction.
pub fn box_times_eps2(k: &Kinematics) -> Result<Complex64> {
    let v = match k.msq {
        None => massless_box(k, CutPrescription::PrincipalValue)?,
        Some(_) => onemass_box(k, CutPrescription::PrincipalValue)?,
    };
    Ok(v.value * k.eps * k.eps)
}

/// Leading Laurent coefficients c₋₂, c₋₁, c₀ read off the polynomial interpolating ε²·I
/// through the given ε samples (Richardson extrapolation to ε = 0).
///
/// With n samples the truncation error of c₀ scales like the product of the n − 2 smallest
/// sample spacings times c_{n−2}, so three samples only remove the leading term.
pub fn laurent_from_samples(k: &Kinematics, eps: &[f64]) -> Result<[Complex64; 3]> {
    if eps.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 ε samples, got {}", eps.len())));
    }
    let vals: Vec<Complex64> = eps.iter().map(|&e| box_times_eps2(&k.with_eps(e))).collect::<Result<_>>()?;
    // Newton divided differences, then expand the Newton form in powers of ε
    let n = eps.len();
    let mut dd = vals.clone();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (eps[i] - eps[i - j]);
        }
    }
    let mut poly = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        // poly ← poly·(ε − eps[i]) + dd[i]
        for p in (1..n).rev() {
            poly[p] = poly[p - 1] - eps[i] * poly[p];
        }
        poly[0] = dd[i] - eps[i] * poly[0];
    }
    Ok([poly[0], poly[1], poly[2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    const PV: CutPrescription = CutPrescription::PrincipalValue;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn frozen_massless_values() {
        // hypergeometric closed form evaluated in mpmath at 30 digits
        for &(s, t, eps, want) in &[
            (-1.0, -2.0, 0.3, 24.077_761_462_512_46),
            (-1.0, -1.0, 0.3, 43.528_169_792_146_56),
            (-0.5, -3.0, 0.2, 69.931_564_137_793_85),
        ] {
            let v = massless_box(&Kinematics::massless(s, t, eps), PV).unwrap().value;
            assert!(rel(v, Complex64::new(want, 0.0)) < 1e-13, "{s} {t} {eps}: {v}");
            assert!(v.im.abs() <= 1e-9 * v.norm());
        }
    }

    #[test]
    fn frozen_onemass_value() {
        let k = Kinematics::onemass(-1.0, -2.0, -0.5, 0.3);
        let v = onemass_box(&k, PV).unwrap();
        assert!(rel(v.value, Complex64::new(14.900_294_390_044_482, 0.0)) < 1e-13);
        assert!(v.pieces.contains_key("Im1") && v.pieces.contains_key("Im2"));
    }

    #[test]
    fn swap_symmetry() {
        let a = massless_box(&Kinematics::massless(-1.0, -2.0, 0.3), PV).unwrap().value;
        let b = massless_box(&Kinematics::massless(-2.0, -1.0, 0.3), PV).unwrap().value;
        assert!(rel(a, b) < 1e-13);
        let a = onemass_box(&Kinematics::onemass(-1.0, -2.0, -0.5, 0.3), PV).unwrap().value;
        let b = onemass_box(&Kinematics::onemass(-2.0, -1.0, -0.5, 0.3), PV).unwrap().value;
        assert!(rel(a, b) < 1e-13, "{a} {b}");
    }

    #[test]
    fn alternative_forms_agree() {
        for &(s, t, eps) in &[(-1.0, -1.0, 0.3), (-0.5, -2.0, 0.45), (-1.0, -2.0, 0.01)] {
            let k = Kinematics::massless(s, t, eps);
            let a = massless_box(&k, PV).unwrap().value;
            let b = massless_box_alt(&k, PV).unwrap().value;
            assert!(rel(a, b) < 1e-12, "{s} {t} {eps}");
        }
        for &eps in &[0.3, 0.05] {
            let k = Kinematics::onemass(-1.0, -2.0, -0.5, eps);
            let a = onemass_box(&k, PV).unwrap().value;
            let b = onemass_box_alt(&k, PV).unwrap().value;
            assert!(rel(a, b) < 1e-11);
        }
    }

    #[test]
    fn validation() {
        let bad = Kinematics::massless(1.0, -1.0, 0.3);
        assert!(matches!(massless_box(&bad, PV), Err(Error::EuclideanRegionViolation(_))));
        let bad = Kinematics::massless(-1.0, -1.0, 1.0);
        assert!(matches!(massless_box(&bad, PV), Err(Error::InvalidRegulator(_))));
        let degenerate = Kinematics::onemass(-1.0, -1.0, -2.0, 0.3);
        assert!(matches!(onemass_box(&degenerate, PV), Err(Error::DegenerateKinematics(_))));
        let degenerate = Kinematics::onemass(-1.0, -0.5, -1.0, 0.3);
        assert!(matches!(onemass_box(&degenerate, PV), Err(Error::DegenerateKinematics(_))));
        assert!(onemass_box(&Kinematics::massless(-1.0, -1.0, 0.3), PV).is_err());
        assert!(massless_box(&Kinematics::onemass(-1.0, -2.0, -0.5, 0.3), PV).is_err());
    }

    #[test]
    fn aux_ratios() {
        let a = onemass_aux(&Kinematics::onemass(-1.0, -1.0, -0.5, 0.3)).unwrap();
        assert!((a.z0 - 1.0 / 3.0).abs() < 1e-15);
        let a = onemass_aux(&Kinematics::onemass(-2.0, -1.0, -0.5, 0.3)).unwrap();
        assert!((a.z1 + 1.0 / 3.0).abs() < 1e-15);
        let a = onemass_aux(&Kinematics::onemass(-2.0, -1.0, -1e-10, 0.3)).unwrap();
        assert!(a.z1.abs() < 1e-10);
    }

    #[test]
    fn massless_laurent_reference() {
        // expansion coefficients from an independent mpmath series computation
        for &(s, t, want) in &[
            (-1.0, -1.0, [4.0, 2.308_862_659_61, -12.493_116_687_2]),
            (-1.0, -2.0, [2.0, 1.847_578_510_36, -5.846_462_932_88]),
            (-0.5, -3.0, [2.666_666_666_67, 2.079_861_917_21, -9.032_023_389_38]),
        ] {
            let k = Kinematics::massless(s, t, 0.3);
            let a = massless_box_laurent(&k).unwrap();
            let b = massless_box_laurent_split(&k).unwrap();
            assert_eq!(a.order(), 1);
            for (i, w) in want.iter().enumerate() {
                let p = i as i32 - 2;
                let (ca, cb) = (a.coeff(p).unwrap(), b.coeff(p).unwrap());
                assert!((ca.re - w).abs() < 1e-9 * w.abs().max(1.0), "{s} {t} ε^{p}: {ca}");
                assert!((ca - cb).norm() < 1e-12 * w.abs().max(1.0));
            }
        }
    }

    #[test]
    fn onemass_laurent_reference() {
        for &(s, t, m, want) in &[
            (-1.0, -2.0, -0.5, [1.0, 1.963_510_026_02, -3.301_557_743_32]),
            (-1.0, -1.0, -0.5, [2.0, 2.540_725_690_92, -6.610_848_575_11]),
            (-2.0, -0.5, -1.0, [2.0, 1.154_431_329_8, -5.082_077_290_66]),
        ] {
            let r = onemass_box_laurent(&Kinematics::onemass(s, t, m, 0.3)).unwrap();
            for (i, w) in want.iter().enumerate() {
                let c = r.coeff(i as i32 - 2).unwrap();
                assert!((c.re - w).abs() < 1e-9 * w.abs().max(1.0), "{s} {t} {m}: {c}");
                assert!(c.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn onemass_finite_part_carries_dilog_combination() {
        let (s, t, m) = (-1.0, -2.0, -0.5);
        let direct = onemass_dilog_combination(s, t, m).unwrap();
        let reflected = onemass_dilog_combination_reflected(s, t, m).unwrap();
        assert!((direct - reflected).abs() < 1e-12);
        // c₀ = 2/(st)·[B₂ + γ B₁ + R₂ B₀] with B₀ = 1 and B₁ = ln(−s) + ln(−t) − ln(−m²)
        let r = onemass_box_laurent(&Kinematics::onemass(s, t, m, 0.3)).unwrap();
        let g = gamma_ratio_series().unwrap();
        let b1 = (-s).ln() + (-t).ln() - (-m).ln();
        let b2 = onemass_bracket_eps2(s, t, m).unwrap();
        let want = 2.0 / (s * t) * (b2 + g.coeff(1).unwrap().re * b1 + g.coeff(2).unwrap().re);
        assert!((r.coeff(0).unwrap().re - want).abs() < 1e-12);
    }

    #[test]
    fn scaling_law() {
        let k = Kinematics::onemass(-1.0, -2.0, -0.5, 0.3);
        let lam: f64 = 3.7;
        let a = onemass_box(&k.scaled(lam), PV).unwrap().value;
        let b = onemass_box(&k, PV).unwrap().value * lam.powf(0.3 - 2.0);
        assert!(rel(a, b) < 1e-11);
    }

    fn grid() -> Vec<(f64, f64, f64)> {
        let v = [-0.3, -1.0, -2.7];
        let mut out = Vec::new();
        for &s in &v {
            for &t in &v {
                for &m in &[-0.45, -1.7, -4.1] {
                    out.push((s, t, m));
                }
            }
        }
        out
    }

    #[test]
    fn alternative_forms_on_grid() {
        for (s, t, m) in grid() {
            let k = Kinematics::onemass(s, t, m, 0.37);
            let a = onemass_box(&k, PV).unwrap().value;
            let b = onemass_box_alt(&k, PV).unwrap().value;
            assert!(rel(a, b) < 1e-11, "{s} {t} {m}");
            assert!(a.im.abs() <= 1e-9 * a.norm());
            let k = Kinematics::massless(s, t, 0.37);
            let a = massless_box(&k, PV).unwrap().value;
            let b = massless_box_alt(&k, PV).unwrap().value;
            assert!(rel(a, b) < 1e-11);
        }
    }

    #[test]
    fn massless_limit_slope() {
        let eps = 0.3;
        let base = massless_box(&Kinematics::massless(-1.0, -2.0, eps), PV).unwrap().value;
        let pts: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&m| {
                let v = onemass_box(&Kinematics::onemass(-1.0, -2.0, -m, eps), PV).unwrap().value;
                (m.ln(), (v - base).norm().ln())
            })
            .collect();
        let slope = (pts[2].1 - pts[0].1) / (pts[2].0 - pts[0].0);
        assert!((slope - eps).abs() < 0.05, "{slope}");
        let tiny = onemass_box(&Kinematics::onemass(-1.0, -2.0, -1e-8, eps), PV).unwrap().value;
        assert!(rel(tiny, base) < 1e-2);
    }

    #[test]
    fn dilog_pair_identity() {
        let (a, b) = massless_dilog_pair(-1.0, -2.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sampled_laurent_converges_with_ladder_length() {
        let k = Kinematics::massless(-1.0, -2.0, 0.3);
        let exact = massless_box_laurent(&k).unwrap();
        let err = |eps: &[f64]| {
            let got = laurent_from_samples(&k, eps).unwrap();
            (0..3).map(|i| rel(got[i], exact.coeff(i as i32 - 2).unwrap())).fold(0.0, f64::max)
        };
        let three = err(&[0.02, 0.01, 0.005]);
        let ladder: Vec<f64> = (0..8).map(|i| 0.08 * 0.7f64.powi(i)).collect();
        let long = err(&ladder);
        eprintln!("three {three:e} long {long:e}");
        assert!(long < 1e-7 && long < three);
    }
}
