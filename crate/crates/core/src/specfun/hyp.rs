use std::f64::consts::PI;

use num_complex::Complex64;

use super::cut::{ln_neg, on_cut, CutPrescription, Side};
use super::gamma::{gamma, ln_gamma_re};
use super::lerch::{lerch_phi, sum_series};
use crate::error::{finite, Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRegulator(eps))
    }
}

fn non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Runs `f` on both sides when z sits on the cut [1, ∞), once otherwise.
fn on_cut_resolve<F>(z: Complex64, cut: CutPrescription, mut f: F) -> Result<Complex64>
where
    F: FnMut(Side) -> Result<Complex64>,
{
    if on_cut(z, 1.0) {
        cut.resolve(f)
    } else {
        f(Side::Above)
    }
}

/// Plain Gauss series Σ (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ for |z| < 1.
pub fn f21_general_series(a: f64, b: f64, c: f64, z: Complex64) -> Result<Complex64> {
    if non_positive_integer(c) {
        return Err(Error::Domain(format!("c = {c} is a non-positive integer")));
    }
    if z.norm() >= 1.0 {
        return Err(Error::NonConvergence(format!("|z| = {} outside the unit disc", z.norm())));
    }
    let mut t = ONE;
    let v = sum_series(
        |n| {
            let out = t;
            let n = n as f64;
            t *= z * ((a + n) * (b + n) / ((c + n) * (n + 1.0)));
            out
        },
        "2F1 series",
    )?;
    finite(v, "f21_general_series")
}

/// ₂F₁(1, ε; 1+ε; z) = ε Φ(z, 1, ε).
pub fn f21_1e(z: Complex64, eps: f64, cut: CutPrescription) -> Result<Complex64> {
    check_eps(eps)?;
    on_cut_resolve(z, cut, |side| Ok(eps * lerch_phi(z, eps, side)?))
}

/// ₂F₁(1, 1+ε; 2+ε; z) = (1+ε) Φ(z, 1, 1+ε).
pub fn f21_2e(z: Complex64, eps: f64, cut: CutPrescription) -> Result<Complex64> {
    check_eps(eps)?;
    on_cut_resolve(z, cut, |side| Ok((1.0 + eps) * lerch_phi(z, 1.0 + eps, side)?))
}

/// ₂F₁(1, 1; 2−ε; z) = (1−ε)(1−z)^{−1} Φ(z/(z−1), 1, 1−ε).
pub fn f21_11(z: Complex64, eps: f64, cut: CutPrescription) -> Result<Complex64> {
    check_eps(eps)?;
    if z == ONE {
        return Err(Error::Domain("f21_11 diverges at z = 1".into()));
    }
    let x = z / (z - 1.0);
    let pre = (1.0 - eps) / (1.0 - z);
    // z/(z−1) reverses orientation across the cut
    on_cut_resolve(z, cut, |side| Ok(pre * lerch_phi(x, 1.0 - eps, side.flip())?))
}

/// ₂F₁(1, b; c; z) for real b, c away from |z| ≈ 1.
pub fn f21_a1(b: f64, c: f64, z: Complex64, cut: CutPrescription) -> Result<Complex64> {
    const R: f64 = 0.75;
    if z.norm() <= R {
        return f21_general_series(1.0, b, c, z);
    }
    if z.re < 0.5 && (z / (z - 1.0)).norm() <= R {
        return Ok(f21_general_series(1.0, c - b, c, z / (z - 1.0))? / (1.0 - z));
    }
    if z.norm() >= 1.0 / R {
        if (b - 1.0).fract() == 0.0 || non_positive_integer(c - b) {
            return Err(Error::Domain(format!("inversion of 2F1(1, {b}; {c}; z) is degenerate")));
        }
        let w = 1.0 / z;
        let first = (c - 1.0) / (b - 1.0) * (-w) * f21_general_series(1.0, 2.0 - c, 2.0 - b, w)?;
        let k = (ln_gamma_re(c)? + ln_gamma_re(1.0 - b)? - ln_gamma_re(c - b)?).exp();
        let tail = (1.0 - w).powf(c - b - 1.0);
        let v = on_cut_resolve(z, cut, |side| {
            let ln_mz = if on_cut(z, 0.0) { ln_neg(z.re, side) } else { (-z).ln() };
            Ok(first + k * (-b * ln_mz).exp() * tail)
        })?;
        return finite(v, "f21_a1");
    }
    f21_general_series(1.0, b, c, z)
}

/// Continuation of ₂F₁(1, 1; 2−ε; z) about 1 − 1/z:
/// ((ε−1)/ε) z^{−1} ₂F₁(1, ε; 1+ε; 1 − 1/z) − (ε−1) Γ(ε)Γ(1−ε) z^{ε−1} (1−z)^{−ε}.
///
/// Returns the hypergeometric and algebraic pieces. For real z < 0 the pieces have
/// compensating cuts and `cut` selects the side of z; for real z > 1 it selects the side
/// of (1 − z)^{−ε}.
pub fn continuation_58(z: Complex64, eps: f64, cut: CutPrescription) -> Result<(Complex64, Complex64)> {
    check_eps(eps)?;
    if z == Complex64::new(0.0, 0.0) || z == ONE {
        return Err(Error::Domain(format!("continuation about 1 − 1/z undefined at z = {z}")));
    }
    // Γ²(ε)/(Γ(1+ε)Γ(ε−1)) and Γ²(ε)Γ(1−ε)/Γ(ε−1) reduce exactly via Γ(1+ε) = εΓ(ε)
    let k1 = (eps - 1.0) / eps;
    let k2 = (eps - 1.0) * PI / (PI * eps).sin();
    let w = 1.0 - 1.0 / z;
    let real = z.im == 0.0;
    let side_of = |side: Side| {
        let cp = match side {
            Side::Above => CutPrescription::AboveCut,
            Side::Below => CutPrescription::BelowCut,
        };
        let hyp = k1 / z * f21_1e(w, eps, cp)?;
        let ln_z = if real && z.re < 0.0 { ln_neg(-z.re, side.flip()) } else { z.ln() };
        let ln_1mz = if real && z.re > 1.0 { ln_neg(z.re - 1.0, side) } else { (1.0 - z).ln() };
        let alg = -k2 * ((eps - 1.0) * ln_z - eps * ln_1mz).exp();
        Ok((hyp, alg))
    };
    if real && (z.re < 0.0 || z.re > 1.0) {
        let (ha, aa) = side_of(Side::Above)?;
        match cut {
            CutPrescription::AboveCut => Ok((ha, aa)),
            CutPrescription::BelowCut => side_of(Side::Below),
            CutPrescription::PrincipalValue => {
                let (hb, ab) = side_of(Side::Below)?;
                Ok((0.5 * (ha + hb), 0.5 * (aa + ab)))
            }
        }
    } else {
        side_of(Side::Above)
    }
}

/// The continuation about 1 + t/s of ₂F₁(1, 1; 2−ε; −s/t), given t/s.
pub fn continuation_36(t_over_s: Complex64, eps: f64, cut: CutPrescription) -> Result<(Complex64, Complex64)> {
    continuation_58(-1.0 / t_over_s, eps, cut)
}

/// Continuation about 1 − x of ₂F₁(1, ε−δ; 1−δ; x) for real x < 0 at finite δ:
/// Γ(1−δ)Γ(−ε)/(Γ(−δ)Γ(1−ε)) ₂F₁(1, ε−δ; 1+ε; 1−x) + Γ(1−δ)Γ(ε)/Γ(ε−δ) (1−x)^{−ε} x^δ.
///
/// `cut` selects the side of 1 − x > 1; x is then on the opposite side of its own cut.
pub fn continuation_314(x: f64, eps: f64, delta: f64, cut: CutPrescription) -> Result<(Complex64, Complex64)> {
    check_eps(eps)?;
    if x >= 0.0 || delta == 0.0 {
        return Err(Error::Domain(format!("continuation_314 needs x < 0 and δ ≠ 0, got x = {x}, δ = {delta}")));
    }
    let b = eps - delta;
    let k1 = gamma(Complex64::new(1.0 - delta, 0.0))? * gamma(Complex64::new(-eps, 0.0))?
        / (gamma(Complex64::new(-delta, 0.0))? * gamma(Complex64::new(1.0 - eps, 0.0))?);
    let k2 = (ln_gamma_re(1.0 - delta)? + ln_gamma_re(eps)? - ln_gamma_re(b)?).exp();
    let first = k1 * f21_a1(b, 1.0 + eps, Complex64::new(1.0 - x, 0.0), cut)?;
    let second = cut.resolve(|side| {
        let ln_x = ln_neg(-x, side);
        Ok(k2 * (1.0 - x).powf(-eps) * (delta * ln_x).exp())
    })?;
    Ok((first, second))
}

/// F₂(α; β, β′; α, α; x, y) = (1−x)^{−β}(1−y)^{−β′} ₂F₁(β, β′; α; xy/((1−x)(1−y))).
pub fn appell_f2_reduced(
    beta: f64,
    beta_p: f64,
    alpha: f64,
    x: Complex64,
    y: Complex64,
    cut: CutPrescription,
) -> Result<Complex64> {
    if x == ONE || y == ONE {
        return Err(Error::Domain("appell_f2_reduced singular at x = 1 or y = 1".into()));
    }
    let arg = x * y / ((1.0 - x) * (1.0 - y));
    let f = if beta == 1.0 && beta_p == 1.0 && alpha > 1.0 && alpha < 2.0 {
        f21_11(arg, 2.0 - alpha, cut)?
    } else if beta == 1.0 {
        f21_a1(beta_p, alpha, arg, cut)?
    } else if beta_p == 1.0 {
        f21_a1(beta, alpha, arg, cut)?
    } else {
        f21_general_series(beta, beta_p, alpha, arg)?
    };
    let pre = (-beta * (1.0 - x).ln() - beta_p * (1.0 - y).ln()).exp();
    finite(pre * f, "appell_f2_reduced")
}

#[cfg(test)]
mod tests {
    use super::*;

    const PV: CutPrescription = CutPrescription::PrincipalValue;
    const UP: CutPrescription = CutPrescription::AboveCut;
    const DOWN: CutPrescription = CutPrescription::BelowCut;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn general_series_collapses() {
        let v = f21_general_series(1.0, 1.0, 2.0, r(0.5)).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-15);
        let v = f21_general_series(1.7, 1.0, 1.7, r(0.2)).unwrap();
        assert!((v.re - 1.25).abs() < 1e-15);
        let e = f21_1e(r(0.3), 0.4, PV).unwrap();
        assert!(rel(f21_general_series(1.0, 0.4, 1.4, r(0.3)).unwrap(), e) < 1e-15);
        assert!(matches!(f21_general_series(1.0, 1.0, 2.0, r(1.0)), Err(Error::NonConvergence(_))));
        assert!(matches!(f21_general_series(1.0, 1.0, -2.0, r(0.1)), Err(Error::Domain(_))));
    }

    #[test]
    fn families_at_zero() {
        for f in [f21_1e, f21_2e, f21_11] {
            assert_eq!(f(r(0.0), 0.3, PV).unwrap(), r(1.0));
        }
    }

    #[test]
    fn frozen_family_values() {
        // mpmath hyp2f1, with z = x + 1e-40 i for the cut values
        let cases: [(fn(Complex64, f64, CutPrescription) -> Result<Complex64>, Complex64, f64, CutPrescription, Complex64); 10] = [
            (f21_1e, r(0.6), 0.3, PV, r(1.223_194_757_783_397_5)),
            (f21_1e, c(0.9, 0.8), 0.05, PV, c(1.009_149_172_143_639_4, 0.069_416_432_822_659_77)),
            (f21_1e, r(1.5), 0.3, UP, c(1.038_851_247_584_317_9, 0.834_533_451_578_966_5)),
            (f21_1e, r(1.5), 0.3, PV, r(1.038_851_247_584_317_9)),
            (f21_1e, r(-7.0), 0.2, PV, r(0.690_703_253_739_459_9)),
            (f21_2e, r(-0.8), 0.25, PV, r(0.709_721_440_178_321_1)),
            (f21_2e, r(3.0), 0.4, DOWN, c(-0.559_212_835_615_318_1, -0.944_730_968_285_894_2)),
            (f21_11, r(-2.0), 0.3, PV, r(0.504_615_071_297_278_6)),
            (f21_11, r(0.97), 0.45, PV, r(7.370_988_218_493_998_5)),
            (f21_11, r(2.5), 0.3, UP, c(-0.396_704_538_261_120_7, 1.025_327_318_941_500_9)),
        ];
        for (i, (f, z, eps, cut, want)) in cases.into_iter().enumerate() {
            let got = f(z, eps, cut).unwrap();
            assert!(rel(got, want) < 1e-13, "case {i}: {got} vs {want}");
        }
    }

    #[test]
    fn contact_identity() {
        // (1/ε) F1e(z) = 1/ε + z/(1+ε) F2e(z)
        for &(z, eps) in &[(r(0.6), 0.3), (r(0.5), 0.4), (r(-3.0), 0.2), (c(1.4, 0.9), 0.7), (r(2.5), 0.45)] {
            for cut in [PV, UP, DOWN] {
                let lhs = f21_1e(z, eps, cut).unwrap() / eps;
                let rhs = 1.0 / eps + z / (1.0 + eps) * f21_2e(z, eps, cut).unwrap();
                assert!(rel(lhs, rhs) < 1e-12, "{z} {eps} {cut:?}");
            }
        }
    }

    #[test]
    fn pv_is_mean_of_sides() {
        for z in [1.01, 1.5, 2.0, 5.0, 40.0] {
            let z = r(z);
            for f in [f21_1e, f21_2e, f21_11] {
                let mean = 0.5 * (f(z, 0.3, UP).unwrap() + f(z, 0.3, DOWN).unwrap());
                assert!(rel(f(z, 0.3, PV).unwrap(), mean) < 1e-13);
            }
        }
    }

    #[test]
    fn continuation_58_two_sided() {
        for &(z, eps) in &[(r(0.5), 0.3), (r(-2.0), 0.3), (r(-0.4), 0.7), (c(0.3, 1.2), 0.45), (r(3.0), 0.25)] {
            for cut in [PV, UP, DOWN] {
                let (h, a) = continuation_58(z, eps, cut).unwrap();
                let want = f21_11(z, eps, cut).unwrap();
                assert!(rel(h + a, want) < 1e-11, "{z} {eps} {cut:?}: {} vs {want}", h + a);
            }
        }
    }

    #[test]
    fn continuation_36_pieces() {
        // s = −1, t = −2 and s = −3, t = −1
        for &(s, t, eps) in &[(-1.0, -2.0, 0.3), (-3.0, -1.0, 0.45)] {
            let (h, a) = continuation_36(r(t / s), eps, PV).unwrap();
            let want = f21_11(r(-s / t), eps, PV).unwrap();
            assert!(rel(h + a, want) < 1e-12);
        }
        // s/t → 0⁺: the pieces recombine into ₂F₁(…, 0) = 1
        let ts = 1e8;
        let (h, a) = continuation_36(r(ts), 0.3, PV).unwrap();
        assert!((h + a - 1.0).norm() < 1e-7);
    }

    #[test]
    fn continuation_314_matches_direct() {
        for &(x, eps, delta) in &[(-0.5, 0.3, 0.1), (-2.0, 0.3, 0.05), (-3.0, 0.45, -0.07), (-1.2, 0.2, 0.15), (-0.4, 0.6, 0.03)] {
            let lhs = f21_a1(eps - delta, 1.0 - delta, r(x), PV).unwrap();
            for cut in [PV, UP, DOWN] {
                let (a, b) = continuation_314(x, eps, delta, cut).unwrap();
                assert!(rel(a + b, lhs) < 1e-11, "{x} {eps} {delta} {cut:?}");
            }
        }
    }

    #[test]
    fn pfaff_and_continuation_routes_agree() {
        let direct = f21_11(r(-2.0), 0.3, PV).unwrap();
        let (h, a) = continuation_58(r(-2.0), 0.3, PV).unwrap();
        assert!(rel(h + a, direct) < 1e-12);
        let via_a1 = f21_a1(1.0, 1.7, r(-2.0), PV).unwrap();
        assert!(rel(via_a1, direct) < 1e-13);
    }

    #[test]
    fn appell_reduction() {
        let v = appell_f2_reduced(1.0, 1.0, 1.7, r(0.0), r(0.3), PV).unwrap();
        assert!((v.re - 1.0 / 0.7).abs() < 1e-14);
        let a = appell_f2_reduced(0.6, 1.3, 1.9, r(0.25), r(0.25), PV).unwrap();
        let b = appell_f2_reduced(1.3, 0.6, 1.9, r(0.25), r(0.25), PV).unwrap();
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn invalid_regulator() {
        assert!(matches!(f21_1e(r(0.2), 1.0, PV), Err(Error::InvalidRegulator(_))));
        assert!(matches!(f21_11(r(0.2), 0.0, PV), Err(Error::InvalidRegulator(_))));
    }
}
