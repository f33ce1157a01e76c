//! Fixed verification grids and identity checks behind `mbbox verify`.

use std::f64::consts::PI;

use mbbox_core::closed_form::{
    massless_box, massless_dilog_pair, onemass_box, onemass_dilog_combination, onemass_dilog_combination_reflected,
    Kinematics, Method,
};
use mbbox_core::mb_engine::{residue_massless, residue_onemass, EvalBreakdown};
use mbbox_core::oracles::{beta_oracle, f2_double_series};
use mbbox_core::specfun::{
    appell_f2_reduced, continuation_314, continuation_36, continuation_58, f21_11, f21_1e, f21_2e, f21_a1, li2,
    ln_gamma_re, CutPrescription,
};
use mbbox_core::{Complex64, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{QuadOverrides, Tolerances};
use crate::report::{Check, Deviation, PointRecord, Report, Status};
use crate::run::compare_methods;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Massless,
    Onemass,
    All,
}

pub const INVARIANTS: [f64; 3] = [-0.5, -1.0, -3.0];
pub const MASSLESS_EPS: [f64; 3] = [0.2, 0.3, 0.45];
pub const ONEMASS_INVARIANTS: [f64; 3] = [-0.5, -1.0, -2.0];
pub const ONEMASS_EPS: [f64; 2] = [0.25, 0.4];

const PV: CutPrescription = CutPrescription::PrincipalValue;
const CUTS: [CutPrescription; 3] = [PV, CutPrescription::AboveCut, CutPrescription::BelowCut];

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn cut_tag(cut: CutPrescription) -> &'static str {
    match cut {
        CutPrescription::PrincipalValue => "pv",
        CutPrescription::AboveCut => "above",
        CutPrescription::BelowCut => "below",
    }
}

/// Every (s, t) pair of [`INVARIANTS`] at every ε of [`MASSLESS_EPS`].
pub fn massless_grid() -> Vec<Kinematics> {
    let mut out = Vec::new();
    for &eps in &MASSLESS_EPS {
        for &s in &INVARIANTS {
            for &t in &INVARIANTS {
                out.push(Kinematics::massless(s, t, eps));
            }
        }
    }
    out
}

/// Every (s, t, m²) triple of [`ONEMASS_INVARIANTS`] at every ε of [`ONEMASS_EPS`],
/// degenerate ones included (they are reported as skipped).
pub fn onemass_grid() -> Vec<Kinematics> {
    let mut out = Vec::new();
    for &eps in &ONEMASS_EPS {
        for &s in &ONEMASS_INVARIANTS {
            for &t in &ONEMASS_INVARIANTS {
                for &m in &ONEMASS_INVARIANTS {
                    out.push(Kinematics::onemass(s, t, m, eps));
                }
            }
        }
    }
    out
}

fn ratio(name: &str, num: f64, den: f64, tol: f64) -> Deviation {
    let rel = num / den;
    Deviation { a: name.into(), b: "total".into(), rel, tol, pass: rel <= tol }
}

/// Residue reconstructions at every cut prescription against the principal-value closed
/// form, plus the cancellation checks. The one-sided prescriptions only choose how the
/// individual continuations are split, so the total must not depend on them.
fn residue_checks(
    rec: &mut PointRecord,
    k: &Kinematics,
    tol: &Tolerances,
    closed: fn(&Kinematics, CutPrescription) -> Result<mbbox_core::closed_form::BoxValue>,
    residue: fn(&Kinematics, CutPrescription) -> Result<EvalBreakdown>,
) {
    let want = match closed(k, PV) {
        Ok(v) => v.value,
        Err(e) => {
            rec.status = Status::Error;
            rec.message = Some(format!("closed: {e}"));
            return;
        }
    };
    for cut in CUTS {
        let tag = cut_tag(cut);
        match residue(k, cut) {
            Ok(b) => {
                let total = b.total();
                if cut != PV {
                    rec.deviations.push(Deviation::new("closed", &format!("residue[{tag}]"), want, total, tol.analytic));
                }
                let split = b.pieces.get("spurious_sum").copied().unwrap_or_default();
                rec.deviations.push(ratio(&format!("spurious_sum[{tag}]"), split.norm(), total.norm(), tol.cancellation));
                rec.deviations.push(ratio(
                    &format!("delta_pole[{tag}]"),
                    b.delta_pole_coefficient.norm(),
                    total.norm(),
                    tol.delta_pole,
                ));
                if cut == PV {
                    rec.breakdown = b.pieces.iter().map(|(key, z)| (key.clone(), (*z).into())).collect();
                }
            }
            Err(e) => {
                rec.status = Status::Error;
                rec.message = Some(format!("residue[{tag}]: {e}"));
            }
        }
    }
}

/// MB node doubling must stay below the reported error estimate.
fn node_doubling_check(rec: &mut PointRecord) {
    let (Some(&delta), Some(&err)) = (rec.diagnostics.get("mb.node_doubling_delta"), rec.diagnostics.get("mb.error_estimate"))
    else {
        return;
    };
    let rel = delta / err;
    rec.deviations.push(Deviation { a: "mb.node_doubling_delta".into(), b: "mb.error_estimate".into(), rel, tol: 1.0, pass: rel <= 1.0 });
}

/// closed vs closed_alt, residue, feynman and mb at one massless point.
pub fn massless_point(index: usize, k: &Kinematics, tol: &Tolerances, quad: &QuadOverrides) -> PointRecord {
    let methods = [Method::Closed, Method::ClosedAlt, Method::Residue, Method::Feynman, Method::Mb];
    let mut rec = compare_methods(index, k, &methods, PV, tol, quad);
    if rec.status == Status::Pass {
        residue_checks(&mut rec, k, tol, massless_box, residue_massless);
        node_doubling_check(&mut rec);
        rec.settle();
    }
    rec
}

/// The same comparisons at one one-mass point; the double MB quadrature is optional as it
/// dominates the run time.
pub fn onemass_point(index: usize, k: &Kinematics, tol: &Tolerances, quad: &QuadOverrides, with_mb: bool) -> PointRecord {
    let mut methods = vec![Method::Closed, Method::ClosedAlt, Method::Residue, Method::Feynman];
    if with_mb {
        methods.push(Method::Mb);
    }
    let mut rec = compare_methods(index, k, &methods, PV, tol, quad);
    if rec.status == Status::Pass {
        residue_checks(&mut rec, k, tol, onemass_box, residue_onemass);
        node_doubling_check(&mut rec);
        rec.settle();
    }
    rec
}

/// Log-log slope of |onemass − massless| against |m²| over m² ∈ {−10⁻², −10⁻³, −10⁻⁴}
/// (least squares); the difference vanishes like (−m²)^ε.
pub fn massless_limit_slope(s: f64, t: f64, eps: f64) -> Result<f64> {
    let base = massless_box(&Kinematics::massless(s, t, eps), PV)?.value;
    let pts: Vec<(f64, f64)> = [-1e-2, -1e-3, -1e-4]
        .iter()
        .map(|&m: &f64| Ok(((-m).ln(), (onemass_box(&Kinematics::onemass(s, t, m, eps), PV)?.value - base).norm().ln())))
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Pushes a check built from a fallible pair of sides.
fn push(checks: &mut Vec<Check>, name: &str, point: String, tol: f64, sides: Result<(Complex64, Complex64)>) {
    checks.push(match sides {
        Ok((l, rhs)) => Check::new(name, point, l, rhs, tol),
        Err(e) => Check::errored(name, point, &e, tol),
    });
}

/// Two-sided numeric identities, each at five or more samples. Checks that average over a
/// cut or go through quadrature use ten times `tol`.
pub fn identity_checks(tol: f64) -> Vec<Check> {
    let loose = 10.0 * tol;
    let mut out = Vec::new();
    let tol_for = |cut: CutPrescription| if cut == PV { loose } else { tol };

    // Li₂(−s/t) + Li₂(−t/s) = −½ln²(s/t) − π²/6
    for (s, t) in [(-1.0, -2.0), (-1.0, -1.0), (-0.5, -3.0), (-3.0, -0.5), (-0.2, -7.0)] {
        push(&mut out, "dilog_inversion", format!("s={s} t={t}"), tol, massless_dilog_pair(s, t).map(|(a, b)| (r(a), r(b))));
    }

    // (1/ε) F(1, ε; 1+ε; z) = 1/ε + z/(1+ε) F(1, 1+ε; 2+ε; z), including the cut z > 1
    let contact = [(0.3, r(0.6)), (0.4, r(0.5)), (0.25, r(-3.0)), (0.45, Complex64::new(0.7, 1.3)), (0.3, r(-0.9))];
    for (eps, z) in contact {
        push(&mut out, "contact", format!("eps={eps} z={z}"), tol, contact_sides(eps, z, PV));
    }
    for cut in CUTS {
        for (eps, z) in [(0.3, 2.5), (0.2, 1.5)] {
            let point = format!("eps={eps} z={z} cut={}", cut_tag(cut));
            push(&mut out, "contact", point, tol_for(cut), contact_sides(eps, r(z), cut));
        }
    }

    // continuation of F(1, 1; 2−ε; −s/t) about 1 + t/s, summed back
    for (s, t, eps) in [(-1.0, -2.0, 0.3), (-3.0, -1.0, 0.45), (-0.5, -0.5, 0.2), (-1.0, -3.0, 0.25), (-2.0, -0.7, 0.4)] {
        for cut in CUTS {
            let sides = continuation_36(r(t / s), eps, cut).and_then(|(h, a)| Ok((h + a, f21_11(r(-s / t), eps, cut)?)));
            push(&mut out, "continuation_about_1_plus_t_over_s", format!("s={s} t={t} eps={eps} cut={}", cut_tag(cut)), tol_for(cut), sides);
        }
    }

    // continuation of F(1, 1; 2−ε; z) about 1 − 1/z
    for (z, eps) in [(r(0.5), 0.3), (r(-2.0), 0.3), (r(-0.4), 0.7), (Complex64::new(0.3, 1.2), 0.45), (r(3.0), 0.25), (r(1.6), 0.4)] {
        for cut in CUTS {
            let sides = continuation_58(z, eps, cut).and_then(|(h, a)| Ok((h + a, f21_11(z, eps, cut)?)));
            push(&mut out, "continuation_about_1_minus_inv_z", format!("z={z} eps={eps} cut={}", cut_tag(cut)), tol_for(cut), sides);
        }
    }

    // continuation of F(1, ε−δ; 1−δ; x) about 1 − x at finite δ
    for (x, eps, delta) in [(-0.5, 0.3, 0.1), (-2.0, 0.3, 0.05), (-3.0, 0.45, -0.07), (-1.2, 0.2, 0.15), (-0.4, 0.6, 0.03)] {
        for cut in CUTS {
            let sides = continuation_314(x, eps, delta, cut)
                .and_then(|(a, b)| Ok((a + b, f21_a1(eps - delta, 1.0 - delta, r(x), PV)?)));
            push(&mut out, "continuation_about_1_minus_x", format!("x={x} eps={eps} delta={delta} cut={}", cut_tag(cut)), tol_for(cut), sides);
        }
    }

    // Li₂(1−x) = π²/6 − ln x ln(1−x) − Li₂(x)
    for x in [0.1, 0.25, 0.5, 0.7, 0.93] {
        let sides = (|| {
            let lhs = li2(r(1.0 - x), PV)?;
            Ok((lhs, r(PI * PI / 6.0 - x.ln() * (1.0 - x).ln()) - li2(r(x), PV)?))
        })();
        push(&mut out, "dilog_reflection", format!("x={x}"), tol, sides);
    }
    // the one-mass dilog combination, direct and through the reflection
    for (s, t, m) in [(-1.0, -2.0, -0.5), (-1.0, -1.0, -0.5), (-2.0, -0.5, -1.0), (-0.5, -0.5, -2.0), (-3.0, -1.0, -0.2)] {
        let sides = onemass_dilog_combination(s, t, m).and_then(|a| Ok((r(a), r(onemass_dilog_combination_reflected(s, t, m)?))));
        push(&mut out, "onemass_dilog_combination", format!("s={s} t={t} msq={m}"), tol, sides);
    }

    // Appell F₂(α; β, β′; α, α; x, y) reduced to one ₂F₁, against the double series
    for (beta, beta_p, alpha, x, y) in [
        (1.0, 1.0, 1.7, 0.2, 0.3),
        (1.0, 1.0, 1.55, -0.3, 0.25),
        (1.0, 1.0, 1.8, 0.1, -0.6),
        (0.6, 1.3, 1.9, 0.25, 0.25),
        (1.0, 0.4, 1.2, -0.35, -0.4),
    ] {
        let sides = f2_double_series(alpha, beta, beta_p, alpha, alpha, x, y)
            .and_then(|a| Ok((a, appell_f2_reduced(beta, beta_p, alpha, r(x), r(y), PV)?)));
        push(&mut out, "appell_f2_reduction", format!("beta={beta} beta'={beta_p} alpha={alpha} x={x} y={y}"), tol, sides);
    }

    // ∫₀¹ (y(1−y))^{ε−1} dy = Γ²(ε)/Γ(2ε), by quadrature
    for eps in [0.2, 0.3, 0.4, 0.45, 0.7] {
        let sides = (|| Ok((r(beta_oracle(eps)?), r((2.0 * ln_gamma_re(eps)?.re - ln_gamma_re(2.0 * eps)?.re).exp()))))();
        push(&mut out, "beta_integral", format!("eps={eps}"), loose, sides);
    }
    out
}

fn contact_sides(eps: f64, z: Complex64, cut: CutPrescription) -> Result<(Complex64, Complex64)> {
    let lhs = f21_1e(z, eps, cut)? / eps;
    let rhs = 1.0 / eps + z / (1.0 + eps) * f21_2e(z, eps, cut)?;
    Ok((lhs, rhs))
}

/// Runs a verification suite; `tol` replaces the identity tolerance for `identities` and the
/// cross-method tolerance for the grids.
pub fn cmd_verify(suite: Suite, tol: Option<f64>, quad: &QuadOverrides) -> Report {
    let mut t = Tolerances::default();
    let mut records = Vec::new();
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(identity_checks(tol.unwrap_or(t.identities)));
    }
    if let Some(v) = tol {
        if suite != Suite::Identities {
            t.cross_method = v;
        }
    }
    if matches!(suite, Suite::Massless | Suite::All) {
        let grid = massless_grid();
        records.extend(grid.par_iter().enumerate().map(|(i, k)| massless_point(i, k, &t, quad)).collect::<Vec<_>>());
    }
    if matches!(suite, Suite::Onemass | Suite::All) {
        let offset = records.len();
        let grid = onemass_grid();
        records.extend(grid.par_iter().enumerate().map(|(i, k)| onemass_point(offset + i, k, &t, quad, true)).collect::<Vec<_>>());
        for (s, t_, eps) in [(-1.0, -2.0, 0.3), (-1.0, -1.0, 0.25), (-0.5, -3.0, 0.4)] {
            let point = format!("s={s} t={t_} eps={eps}");
            checks.push(match massless_limit_slope(s, t_, eps) {
                Ok(slope) => Check::absolute("massless_limit_slope", point, slope, eps, 0.05),
                Err(e) => Check::errored("massless_limit_slope", point, &e, 0.05),
            });
        }
    }
    Report::new(&format!("verify {suite:?}").to_lowercase(), records, checks)
}
