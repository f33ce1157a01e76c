use mbbox_core::closed_form::{
    massless_box, massless_box_alt, massless_box_laurent, onemass_box, onemass_box_alt, onemass_box_laurent, Kinematics,
};
use mbbox_core::mb_engine::{mb_massless_eval, residue_massless, residue_onemass, select_contour_massless};
use mbbox_core::series::{Regulator, RegulatorSeries};
use mbbox_core::specfun::{f21_1e, li2, CutPrescription};
use mbbox_core::Complex64;
use proptest::prelude::*;

const PV: CutPrescription = CutPrescription::PrincipalValue;
const UP: CutPrescription = CutPrescription::AboveCut;
const DOWN: CutPrescription = CutPrescription::BelowCut;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn invariant() -> impl Strategy<Value = f64> {
    // log-uniform over two decades
    (-1.0f64..1.0).prop_map(|x| -(10f64.powf(x)))
}

fn regulator() -> impl Strategy<Value = f64> {
    0.1f64..0.6
}

/// One-mass points away from the s = m², t = m² and s + t = m² lines.
fn onemass_point() -> impl Strategy<Value = Kinematics> {
    (invariant(), invariant(), invariant(), regulator())
        .prop_filter("degenerate", |&(s, t, m, _)| {
            let scale = s.abs().max(t.abs()).max(m.abs());
            [s - m, t - m, s + t - m].iter().all(|v| v.abs() > 0.05 * scale)
        })
        .prop_map(|(s, t, m, e)| Kinematics::onemass(s, t, m, e))
}

fn series(label: Regulator) -> impl Strategy<Value = RegulatorSeries> {
    (-2i32..1, prop::collection::vec(-2.0f64..2.0, 4)).prop_map(move |(lo, c)| {
        let mut coeffs: Vec<Complex64> = c.into_iter().map(|x| Complex64::new(x, 0.3 * x)).collect();
        // keep the leading coefficient away from zero so division is well conditioned
        coeffs[0] += Complex64::new(2.5, 0.0);
        RegulatorSeries::with_order(label, lo, coeffs, lo + 4)
    })
}

fn series_close(a: &RegulatorSeries, b: &RegulatorSeries, tol: f64) -> bool {
    let hi = a.order().min(b.order());
    let lo = a.min_power().min(b.min_power());
    (lo..hi).all(|p| (a.coeff(p).unwrap() - b.coeff(p).unwrap()).norm() <= tol * (1.0 + b.coeff(p).unwrap().norm()))
}

/// ε²I − (c₋₂ + c₋₁ε + c₀ε²) = ε³(c₁ + c₂ε + …): the remainder over ε³ must be linear in ε
/// at small ε, checked at ε = 0.004, 0.002, 0.001.
fn cubic_remainder(k: &Kinematics, l: &RegulatorSeries) -> bool {
    let (cm2, cm1, c0) = (l.coeff(-2).unwrap(), l.coeff(-1).unwrap(), l.coeff(0).unwrap());
    let q = |e: f64| {
        let v = if k.msq.is_some() { onemass_box(&k.with_eps(e), PV) } else { massless_box(&k.with_eps(e), PV) };
        (v.unwrap().value * e * e - cm2 - cm1 * e - c0 * e * e) / (e * e * e)
    };
    let (q4, q2, q1) = (q(0.004), q(0.002), q(0.001));
    let curvature = (q4 - q2) - 2.0 * (q2 - q1);
    // roundoff in ε²I is amplified by 1/ε³
    curvature.norm() <= 0.02 * ((q4 - q2).norm() + q1.norm()) + 1e-6 * cm2.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn massless_symmetric_in_s_t(s in invariant(), t in invariant(), e in regulator()) {
        let a = massless_box(&Kinematics::massless(s, t, e), PV).unwrap().value;
        let b = massless_box(&Kinematics::massless(t, s, e), PV).unwrap().value;
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn onemass_symmetric_in_s_t(k in onemass_point()) {
        let a = onemass_box(&k, PV).unwrap().value;
        let b = onemass_box(&Kinematics { s: k.t, t: k.s, ..k }, PV).unwrap().value;
        prop_assert!(rel(a, b) < 1e-11);
    }

    #[test]
    fn boxes_scale_with_dimension(s in invariant(), t in invariant(), e in regulator(), lambda in 0.2f64..5.0) {
        let k = Kinematics::massless(s, t, e);
        let a = massless_box(&k.scaled(lambda), PV).unwrap().value;
        let b = massless_box(&k, PV).unwrap().value * lambda.powf(e - 2.0);
        prop_assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn onemass_scales_with_dimension(k in onemass_point(), lambda in 0.2f64..5.0) {
        let a = onemass_box(&k.scaled(lambda), PV).unwrap().value;
        let b = onemass_box(&k, PV).unwrap().value * lambda.powf(k.eps - 2.0);
        prop_assert!(rel(a, b) < 1e-11);
    }

    #[test]
    fn alternative_closed_forms_agree(s in invariant(), t in invariant(), e in regulator()) {
        let k = Kinematics::massless(s, t, e);
        prop_assert!(rel(massless_box(&k, PV).unwrap().value, massless_box_alt(&k, PV).unwrap().value) < 1e-12);
    }

    #[test]
    fn onemass_alternative_form_agrees(k in onemass_point()) {
        prop_assert!(rel(onemass_box(&k, PV).unwrap().value, onemass_box_alt(&k, PV).unwrap().value) < 1e-11);
    }

    #[test]
    fn residues_reproduce_closed_forms(s in invariant(), t in invariant(), e in regulator()) {
        let k = Kinematics::massless(s, t, e);
        let want = massless_box(&k, PV).unwrap().value;
        for cut in [PV, UP, DOWN] {
            let b = residue_massless(&k, cut).unwrap();
            prop_assert!(rel(b.total(), want) < 1e-10);
            prop_assert!(b.pieces["spurious_sum"].norm() < 1e-11 * want.norm());
            prop_assert!(b.delta_pole_coefficient.norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn onemass_residues_reproduce_closed_form(k in onemass_point()) {
        let want = onemass_box(&k, PV).unwrap().value;
        for cut in [PV, UP, DOWN] {
            let b = residue_onemass(&k, cut).unwrap();
            prop_assert!(rel(b.total(), want) < 1e-10);
            prop_assert!(b.pieces["spurious_sum"].norm() < 1e-11 * want.norm());
        }
    }

    #[test]
    fn mb_value_independent_of_contour(s in invariant(), t in invariant(), e in 0.15f64..0.6, frac in 0.15f64..0.85) {
        let k = Kinematics::massless(s, t, e);
        let base = select_contour_massless(e).unwrap();
        let mut shifted = base;
        shifted.abscissa = -1.0 + frac * e;
        let a = mb_massless_eval(&k, &base.for_kinematics(&k)).unwrap().value;
        let b = mb_massless_eval(&k, &shifted.for_kinematics(&k)).unwrap().value;
        prop_assert!(rel(a, b) < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn laurent_truncation_error_is_cubic(s in invariant(), t in invariant()) {
        let k = Kinematics::massless(s, t, 0.3);
        prop_assert!(cubic_remainder(&k, &massless_box_laurent(&k).unwrap()));
    }

    #[test]
    fn onemass_laurent_truncation_error_is_cubic(k in onemass_point()) {
        prop_assert!(cubic_remainder(&k, &onemass_box_laurent(&k).unwrap()));
    }

    #[test]
    fn pv_is_the_mean_of_both_sides(z in 1.05f64..20.0, e in regulator()) {
        let z = Complex64::new(z, 0.0);
        let (a, b, p) = (f21_1e(z, e, UP).unwrap(), f21_1e(z, e, DOWN).unwrap(), f21_1e(z, e, PV).unwrap());
        prop_assert!((a.im + b.im).abs() < 1e-12 * a.norm());
        prop_assert!(p.im == 0.0);
        prop_assert!(rel(p, 0.5 * (a + b)) < 1e-14);
        // the discontinuity of ε Φ(z, 1, ε) across the cut is 2πi ε z^{−ε}
        prop_assert!((a.im - std::f64::consts::PI * e * z.re.powf(-e)).abs() < 1e-11);
    }

    #[test]
    fn dilog_inversion(x in 0.01f64..50.0) {
        // Li₂(−x) + Li₂(−1/x) = −π²/6 − ½ln²x
        let lhs = li2(Complex64::new(-x, 0.0), PV).unwrap() + li2(Complex64::new(-1.0 / x, 0.0), PV).unwrap();
        let rhs = -std::f64::consts::PI.powi(2) / 6.0 - 0.5 * x.ln().powi(2);
        prop_assert!((lhs.re - rhs).abs() < 1e-12 * (1.0 + rhs.abs()) && lhs.im.abs() < 1e-14);
    }

    #[test]
    fn series_product_inverts(a in series(Regulator::Epsilon), b in series(Regulator::Epsilon)) {
        let back = a.mul(&b).unwrap().div(&b).unwrap();
        prop_assert!(series_close(&back, &a.truncate(back.order()), 1e-10));
    }

    #[test]
    fn series_exp_log_round_trip(c in prop::collection::vec(-1.0f64..1.0, 4)) {
        let coeffs: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, -0.5 * x)).collect();
        let a = RegulatorSeries::with_order(Regulator::Delta, 1, coeffs, 5);
        let back = a.exp().unwrap().log().unwrap();
        prop_assert!(series_close(&back, &a, 1e-12));
    }

    #[test]
    fn series_eval_is_a_ring_homomorphism(a in series(Regulator::Epsilon), b in series(Regulator::Epsilon), x in 0.01f64..0.05) {
        // evaluation commutes with multiplication up to the truncation error
        let p = a.mul(&b).unwrap();
        let lhs = p.eval(x);
        let rhs = a.eval(x) * b.eval(x);
        let bound = 40.0 * x.powi(p.order()) * (1.0 + rhs.norm());
        prop_assert!((lhs - rhs).norm() <= bound, "{lhs} vs {rhs}");
    }

    #[test]
    fn mixing_regulators_is_rejected(a in series(Regulator::Epsilon), b in series(Regulator::Delta)) {
        prop_assert!(a.add(&b).is_err());
        prop_assert!(a.mul(&b).is_err());
    }
}
