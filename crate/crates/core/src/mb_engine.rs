//! Mellin-Barnes evaluation of the boxes: straight-line contour quadrature and the
//! residue-resummed reconstruction with δ-regularised double poles.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{BoxValue, Kinematics, Method};
use crate::error::{Error, Result};
use crate::quad::{line_grid, ordered_sum, LineGrid, QuadRule};
use crate::series::{gamma_series, Regulator, RegulatorSeries};
use crate::specfun::{
    continuation_36, continuation_58, digamma_re, f21_11, f21_1e, gamma, appell_f2_reduced, ln_gamma,
    ln_gamma_re, CutPrescription, Side,
};

pub const DEFAULT_NODES: usize = 96;
pub const DEFAULT_HEIGHT: f64 = 40.0;
pub const DEFAULT_TOL: f64 = 1e-9;
const MIN_NODES: usize = 32;

/// A vertical integration line Re = `abscissa`, truncated at |Im| ≤ `height`.
///
/// `nodes` is the base node count: the value is taken at 4·nodes and the lower levels
/// nodes and 2·nodes supply the error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub height: f64,
    pub nodes: usize,
    pub rule: QuadRule,
    /// Relative bound on the node-doubling change.
    pub tolerance: f64,
}

impl ContourSpec {
    pub fn new(abscissa: f64) -> Self {
        ContourSpec { abscissa, height: DEFAULT_HEIGHT, nodes: DEFAULT_NODES, rule: QuadRule::default(), tolerance: DEFAULT_TOL }
    }

    /// Raises the height to the kinematics-dependent default when it is below it.
    pub fn for_kinematics(mut self, k: &Kinematics) -> Self {
        self.height = self.height.max(default_height(k));
        self
    }

    fn check(&self) -> Result<()> {
        if self.nodes < MIN_NODES || self.height.is_nan() || self.height <= 0.0 || !self.abscissa.is_finite() {
            return Err(Error::InfeasibleContour(format!(
                "need nodes ≥ {MIN_NODES} and height > 0, got {} and {}",
                self.nodes, self.height
            )));
        }
        Ok(())
    }
}

/// T = 40 + 10 ln(1 + largest ratio between the invariants).
pub fn default_height(k: &Kinematics) -> f64 {
    let mut v = vec![k.s.abs(), k.t.abs()];
    if let Some(m) = k.msq {
        v.push(m.abs());
    }
    let hi = v.iter().cloned().fold(0.0, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    DEFAULT_HEIGHT + 10.0 * (1.0 + hi / lo).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleOrigin {
    GammaFactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

/// Poles at `base + eps_coeff·ε ± n` (n = 0, 1, …), moving in `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleFamily {
    pub origin: PoleOrigin,
    pub base: f64,
    pub eps_coeff: f64,
    pub direction: Direction,
    pub multiplicity: u8,
}

impl PoleFamily {
    const fn new(base: f64, eps_coeff: f64, direction: Direction, multiplicity: u8) -> Self {
        PoleFamily { origin: PoleOrigin::GammaFactor, base, eps_coeff, direction, multiplicity }
    }

    pub fn location(&self, eps: f64, n: usize) -> f64 {
        let first = self.base + self.eps_coeff * eps;
        match self.direction {
            Direction::Left => first - n as f64,
            Direction::Right => first + n as f64,
        }
    }
}

/// Pole families of Γ²(w+1) Γ(2−ε+w) Γ(−w) Γ²(ε−1−w).
pub const MASSLESS_FAMILIES: [PoleFamily; 4] = [
    PoleFamily::new(-1.0, 0.0, Direction::Left, 2),
    PoleFamily::new(-2.0, 1.0, Direction::Left, 1),
    PoleFamily::new(0.0, 0.0, Direction::Right, 1),
    PoleFamily::new(-1.0, 1.0, Direction::Right, 2),
];

/// True when Re w = c has every left family strictly left of it and every right family right.
pub fn separates(families: &[PoleFamily], eps: f64, c: f64) -> bool {
    families.iter().all(|f| match f.direction {
        Direction::Left => f.location(eps, 0) < c,
        Direction::Right => f.location(eps, 0) > c,
    })
}

fn distance_to_poles(families: &[PoleFamily], eps: f64, c: f64) -> f64 {
    families.iter().map(|f| (f.location(eps, 0) - c).abs()).fold(f64::INFINITY, f64::min)
}

fn check_eps_contour(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InfeasibleContour(format!("no straight contour separates the poles at ε = {eps}")))
    }
}

/// Default massless contour c = −1 + ε/2.
pub fn select_contour_massless(eps: f64) -> Result<ContourSpec> {
    check_eps_contour(eps)?;
    Ok(ContourSpec::new(-1.0 + 0.5 * eps))
}

/// ln of the massless integrand at w, including 1/Γ(2ε).
fn massless_log_integrand(w: Complex64, eps: f64, ls: f64, lt: f64) -> Result<Complex64> {
    Ok(2.0 * ln_gamma(w + 1.0)? + ln_gamma(2.0 - eps + w)? + ln_gamma(-w)? + 2.0 * ln_gamma(eps - 1.0 - w)?
        - ln_gamma_re(2.0 * eps)?
        + w * lt
        - (2.0 - eps + w) * ls)
}

/// (−t)^w (−s)^{−2+ε−w} Γ²(w+1) Γ(2−ε+w) Γ(−w) Γ²(ε−1−w) / Γ(2ε).
pub fn mb_massless_integrand(w: Complex64, k: &Kinematics) -> Result<Complex64> {
    Ok(massless_log_integrand(w, k.eps, (-k.s).ln(), (-k.t).ln())?.exp())
}

/// Values at node counts N, 2N, 4N turned into a value and its diagnostics.
struct Ladder {
    levels: [Complex64; 3],
    abs_sum: f64,
    tail: f64,
}

impl Ladder {
    fn finish(self, method: Method, c: &ContourSpec, extra: &[(&str, f64)]) -> Result<BoxValue> {
        let [a, b, v] = self.levels;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow("contour quadrature"));
        }
        let roundoff = 64.0 * f64::EPSILON * self.abs_sum;
        let delta = (v - b).norm();
        let mut out = BoxValue::new(v, method);
        let d = &mut out.diagnostics;
        d.insert("error_estimate".into(), (b - a).norm() + self.tail + roundoff);
        d.insert("node_doubling_delta".into(), delta);
        d.insert("truncation_tail".into(), self.tail);
        d.insert("nodes".into(), (4 * c.nodes) as f64);
        d.insert("height".into(), c.height);
        for (key, val) in extra {
            d.insert((*key).into(), *val);
        }
        let rel = delta / v.norm().max(f64::MIN_POSITIVE);
        if delta > c.tolerance * v.norm() + roundoff {
            return Err(Error::NotConverged { delta: rel, tol: c.tolerance });
        }
        Ok(out)
    }
}

/// (1/2πi)∫ along Re w = c of the massless integrand.
pub fn mb_massless_eval(k: &Kinematics, c: &ContourSpec) -> Result<BoxValue> {
    k.validate()?;
    if k.msq.is_some() {
        return Err(Error::Domain("massless MB evaluator given an external mass".into()));
    }
    c.check()?;
    let eps = k.eps;
    if !separates(&MASSLESS_FAMILIES, eps, c.abscissa) {
        return Err(Error::InfeasibleContour(format!("Re w = {} does not separate the poles at ε = {eps}", c.abscissa)));
    }
    let (ls, lt) = ((-k.s).ln(), (-k.t).ln());
    let d = distance_to_poles(&MASSLESS_FAMILIES, eps, c.abscissa);
    let f = |y: f64| {
        massless_log_integrand(Complex64::new(c.abscissa, y), eps, ls, lt)
            .map(|l| l.exp() / (2.0 * PI))
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let mut levels = [Complex64::new(0.0, 0.0); 3];
    let mut abs_sum = 0.0;
    for (i, n) in [c.nodes, 2 * c.nodes, 4 * c.nodes].into_iter().enumerate() {
        let grid = line_grid(c.rule, &[0.0], d, c.height, n);
        levels[i] = grid.integrate(f);
        if i == 2 {
            abs_sum = grid.y.iter().zip(&grid.w).map(|(&y, w)| f(y).norm() * w).sum();
        }
    }
    // the six gamma factors decay like e^{−3π|y|}
    let tail = (f(c.height).norm() + f(-c.height).norm()) / (3.0 * PI);
    Ladder { levels, abs_sum, tail }.finish(Method::Mb, c, &[("abscissa", c.abscissa)])
}

/// Real parts of the seven gamma arguments of the one-mass integrand at (Re α, Re β) = (a, b).
pub fn onemass_gamma_arguments(a: f64, b: f64, eps: f64) -> [f64; 7] {
    [-a, -b, 2.0 - eps + a + b, eps - 1.0 - a - b, 1.0 + b, eps - 1.0 - b, 1.0 + a + b]
}

/// Default (α, β) contours: b₀ = −1 + ε/2 and a₀ at the middle of its feasible interval.
pub fn select_contour_onemass(eps: f64) -> Result<(ContourSpec, ContourSpec)> {
    check_eps_contour(eps)?;
    let b0 = -1.0 + 0.5 * eps;
    // a₀ + b₀ ∈ (max(ε−2, −1), ε−1) and a₀ < 0
    let lo = (eps - 2.0).max(-1.0) - b0;
    let hi = (eps - 1.0 - b0).min(0.0);
    if lo >= hi {
        return Err(Error::InfeasibleContour(format!("empty α interval at ε = {eps}")));
    }
    let a0 = 0.5 * (lo + hi);
    debug_assert!(onemass_gamma_arguments(a0, b0, eps).iter().all(|&x| x > 0.0));
    Ok((ContourSpec::new(a0), ContourSpec::new(b0)))
}

struct OneMassLogs {
    eps: f64,
    ls: f64,
    lt: f64,
    lm: f64,
    lg2e: f64,
}

impl OneMassLogs {
    /// β-only part of the log integrand.
    fn outer(&self, beta: Complex64) -> Result<Complex64> {
        let e = self.eps;
        Ok(ln_gamma(-beta)? + ln_gamma(1.0 + beta)? + ln_gamma(e - 1.0 - beta)? + beta * (self.ls - self.lt)
            + (e - 2.0) * self.lt
            - self.lg2e)
    }

    fn inner(&self, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
        let e = self.eps;
        let ab = alpha + beta;
        Ok(ln_gamma(-alpha)? + ln_gamma(2.0 - e + ab)? + ln_gamma(e - 1.0 - ab)? + ln_gamma(1.0 + ab)?
            + alpha * (self.lm - self.lt))
    }
}

/// Γ(−α)Γ(−β)Γ(2−ε+α+β)Γ(ε−1−α−β)Γ(1+β)Γ(ε−1−β)Γ(1+α+β)(−m²)^α(−s)^β(−t)^{ε−2−α−β}/Γ(2ε).
pub fn mb_onemass_integrand(alpha: Complex64, beta: Complex64, k: &Kinematics) -> Result<Complex64> {
    let m = k.msq.ok_or_else(|| Error::Domain("one-mass integrand needs msq".into()))?;
    let logs = OneMassLogs { eps: k.eps, ls: (-k.s).ln(), lt: (-k.t).ln(), lm: (-m).ln(), lg2e: ln_gamma_re(2.0 * k.eps)?.re };
    Ok((logs.outer(beta)? + logs.inner(alpha, beta)?).exp())
}

/// Iterated contour quadrature, inner α and outer β, of the one-mass double MB integral.
pub fn mb_onemass_eval(k: &Kinematics, ca: &ContourSpec, cb: &ContourSpec) -> Result<BoxValue> {
    let m = k.msq.ok_or_else(|| Error::Domain("one-mass MB evaluator needs msq".into()))?;
    k.validate()?;
    ca.check()?;
    cb.check()?;
    let eps = k.eps;
    let (a0, b0) = (ca.abscissa, cb.abscissa);
    let args = onemass_gamma_arguments(a0, b0, eps);
    if args.iter().any(|&x| x <= 0.0) {
        return Err(Error::InfeasibleContour(format!("(Re α, Re β) = ({a0}, {b0}) puts a gamma argument at Re ≤ 0")));
    }
    let logs = OneMassLogs { eps, ls: (-k.s).ln(), lt: (-k.t).ln(), lm: (-m).ln(), lg2e: ln_gamma_re(2.0 * eps)?.re };
    let d_beta = args[1].min(args[4]).min(args[5]);
    let d_sum = args[2].min(args[3]).min(args[6]);
    let d_alpha = args[0].min(d_sum);
    let nan = Complex64::new(f64::NAN, f64::NAN);

    // inner α integral for a fixed β ordinate, with the β factors folded in
    let inner = |yb: f64, grid_nodes: usize| -> Complex64 {
        let beta = Complex64::new(b0, yb);
        let Ok(ob) = logs.outer(beta) else { return nan };
        let grid = line_grid(ca.rule, &[0.0, -yb], d_alpha, ca.height, grid_nodes);
        let v = grid.integrate_serial(|ya| {
            logs.inner(Complex64::new(a0, ya), beta).map(|l| (l + ob).exp()).unwrap_or(nan)
        });
        v / (4.0 * PI * PI)
    };
    let run = |outer_grid: &LineGrid, inner_nodes: usize| -> (Complex64, f64) {
        let vals: Vec<Complex64> = outer_grid.y.par_iter().map(|&yb| inner(yb, inner_nodes)).collect();
        let abs = vals.iter().zip(&outer_grid.w).map(|(v, w)| v.norm() * w).sum();
        (ordered_sum(vals.iter().zip(&outer_grid.w).map(|(v, w)| v * w)), abs)
    };
    let mut levels = [Complex64::new(0.0, 0.0); 3];
    let mut abs_sum = 0.0;
    for (i, scale) in [1, 2, 4].into_iter().enumerate() {
        let og = line_grid(cb.rule, &[0.0], d_beta, cb.height, scale * cb.nodes);
        let (v, a) = run(&og, scale * ca.nodes);
        levels[i] = v;
        abs_sum = a;
    }
    // edge of the β line, decaying at least like e^{−π|y|}
    let top = 4 * ca.nodes;
    let tail = (inner(cb.height, top).norm() + inner(-cb.height, top).norm()) / PI;
    let spec = ContourSpec { nodes: cb.nodes.max(ca.nodes), tolerance: cb.tolerance.max(ca.tolerance), ..*cb };
    Ladder { levels, abs_sum, tail }.finish(
        Method::Mb,
        &spec,
        &[("abscissa_alpha", a0), ("abscissa_beta", b0), ("inner_nodes", (4 * ca.nodes) as f64)],
    )
}

/// Named pieces of a residue reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalBreakdown {
    pub pieces: BTreeMap<String, Complex64>,
    pub delta_pole_coefficient: Complex64,
}

impl EvalBreakdown {
    pub fn total(&self) -> Complex64 {
        self.pieces["total"]
    }

    pub fn into_box_value(self) -> BoxValue {
        let mut out = BoxValue::new(self.total(), Method::Residue);
        out.diagnostics.insert("delta_pole_coefficient".into(), self.delta_pole_coefficient.norm());
        out.diagnostics.insert("spurious_sum".into(), self.pieces["spurious_sum"].norm());
        out.pieces = self.pieces;
        out
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn delta_const(v: Complex64, order: i32) -> RegulatorSeries {
    RegulatorSeries::constant(Regulator::Delta, v, order)
}

/// Γ(a + σδ) through δ¹ (with the pole when a is a non-positive integer).
fn gamma_delta(a: f64, sigma: f64) -> Result<RegulatorSeries> {
    Ok(gamma_series(a, 1, Regulator::Delta)?.scale_var(sigma))
}

/// x^δ for real x < 0 with x on the given side of its cut.
fn neg_power_delta(x: f64, side: Side) -> Result<RegulatorSeries> {
    let l = Complex64::new((-x).ln(), side.sign() * PI);
    RegulatorSeries::monomial(Regulator::Delta, 1, l, 3).exp()
}

fn resolve_series<F>(cut: CutPrescription, f: F) -> Result<RegulatorSeries>
where
    F: Fn(Side) -> Result<RegulatorSeries>,
{
    match cut {
        CutPrescription::AboveCut => f(Side::Above),
        CutPrescription::BelowCut => f(Side::Below),
        CutPrescription::PrincipalValue => Ok(f(Side::Above)?.add(&f(Side::Below)?)?.scale(c(0.5))),
    }
}

fn ln_minus_one(cut: CutPrescription) -> Complex64 {
    match cut {
        CutPrescription::AboveCut => Complex64::new(0.0, PI),
        CutPrescription::BelowCut => Complex64::new(0.0, -PI),
        CutPrescription::PrincipalValue => c(0.0),
    }
}

/// The δ-regularised left-closure pieces of the massless box as δ-Laurent series.
pub struct MasslessDeltaSeries {
    pub i2a: RegulatorSeries,
    pub i2b: RegulatorSeries,
}

/// Builds I₂ₐ(δ) and I₂ᵦ(δ); `cut` is the prescription used for the first piece's
/// continuation, and the second piece is continued on the mirrored side.
pub fn massless_delta_series(k: &Kinematics, cut: CutPrescription) -> Result<MasslessDeltaSeries> {
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lg = 2.0 * ln_gamma_re(eps)?.re - ln_gamma_re(2.0 * eps)?.re;
    let x = -s / t;
    // G (−s)^ε/(st) (1+s/t)^{−ε} / Γ(ε)
    let base = (lg + eps * (-s).ln() - eps * (1.0 + s / t).ln() - ln_gamma_re(eps)?.re).exp() / (s * t);

    let i2a = gamma_delta(0.0, -1.0)?
        .mul(&gamma_delta(1.0, 1.0)?)?
        .mul(&gamma_delta(eps, 1.0)?)?
        .mul(&gamma_delta(1.0 - eps, -1.0)?)?
        .mul(&RegulatorSeries::monomial(Regulator::Delta, 1, c((s / t).ln()), 3).exp()?)?
        .scale(c(base))
        .truncate(1);

    let mirrored = cut.flip();
    // Γ(1−δ)Γ(−ε)/(Γ(−δ)Γ(1−ε)) F(1, ε; 1+ε; 1−x): only its δ¹ term survives
    let f0 = f21_1e(c(1.0 - x), eps, mirrored)?;
    let term1 = gamma_delta(1.0, -1.0)?
        .div(&gamma_delta(0.0, -1.0)?)?
        .mul(&delta_const(f0 * (-1.0 / eps), 1))?;
    let xd = resolve_series(mirrored, |side| neg_power_delta(x, side.flip()))?;
    let g_eps = gamma(c(eps))?;
    let term2 = gamma_delta(1.0, -1.0)?
        .div(&gamma_delta(eps, -1.0)?)?
        .mul(&xd)?
        .scale(g_eps * (1.0 - x).powf(-eps));
    // (1/δ) G (−s)^ε/(st) Γ(1−ε)/Γ(ε) Γ(ε−δ)/Γ(1−δ)
    let lead = (lg + eps * (-s).ln() + ln_gamma_re(1.0 - eps)?.re - ln_gamma_re(eps)?.re).exp() / (s * t);
    let i2b = RegulatorSeries::monomial(Regulator::Delta, -1, c(lead), 3)
        .mul(&gamma_delta(eps, -1.0)?.div(&gamma_delta(1.0, -1.0)?)?)?
        .mul(&term1.add(&term2)?)?
        .truncate(1);
    Ok(MasslessDeltaSeries { i2a, i2b })
}

/// Residue reconstruction of the massless box from the left-closing pole families.
pub fn residue_massless(k: &Kinematics, cut: CutPrescription) -> Result<EvalBreakdown> {
    k.validate()?;
    if k.msq.is_some() {
        return Err(Error::Domain("massless residue pipeline given an external mass".into()));
    }
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lg = 2.0 * ln_gamma_re(eps)?.re - ln_gamma_re(2.0 * eps)?.re;
    let lg1 = ln_gamma_re(1.0 - eps)?.re;

    // I1 = G Γ²(1−ε)/Γ(2−ε) (−t)^{ε−2} F(1, 1; 2−ε; −s/t), split about 1 + t/s
    let pre1 = (lg + 2.0 * lg1 - ln_gamma_re(2.0 - eps)?.re + (eps - 2.0) * (-t).ln()).exp();
    let (hyp, alg) = continuation_36(c(t / s), eps, cut)?;
    let i1 = pre1 * (hyp + alg);
    let i1_exact = pre1 * hyp;
    let spurious_phase = pre1 * alg;

    let ds = massless_delta_series(k, cut)?;
    let coeff = |r: &RegulatorSeries, p: i32| r.coeff(p).unwrap_or(c(0.0));
    let i2a = coeff(&ds.i2a, 0);
    let i2b = coeff(&ds.i2b, 0);
    let pole = coeff(&ds.i2a, -1) + coeff(&ds.i2b, -1);

    // P = G Γ(1−ε) (−s)^ε/(st) (1+s/t)^{−ε}
    let p = (lg + lg1 + eps * (-s).ln() - eps * (1.0 + s / t).ln()).exp() / (s * t);
    let spurious_psi = c(-p * (digamma_re(eps)? - digamma_re(1.0 - eps)?));
    let spurious_log = p * ln_minus_one(cut);
    let i2b_exact = (lg + lg1 - eps.ln() + eps * (-s).ln()).exp() / (s * t) * f21_1e(c(1.0 + s / t), eps, cut.flip())?;

    let mut pieces = BTreeMap::new();
    pieces.insert("I1".into(), i1);
    pieces.insert("I2a".into(), i2a);
    pieces.insert("I2b".into(), i2b);
    pieces.insert("I1_exact".into(), i1_exact);
    pieces.insert("I2b_exact".into(), i2b_exact);
    pieces.insert("spurious_phase".into(), spurious_phase);
    pieces.insert("spurious_psi".into(), spurious_psi);
    pieces.insert("spurious_log".into(), spurious_log);
    pieces.insert("spurious_sum".into(), spurious_phase + spurious_psi + spurious_log);
    pieces.insert("total".into(), i1 + i2a + i2b);
    Ok(EvalBreakdown { pieces, delta_pole_coefficient: pole })
}

/// The prescription seen by an argument z(m²) when m² is moved to m² ± i0.
fn induced(cut: CutPrescription, dz_dm: f64) -> CutPrescription {
    if dz_dm >= 0.0 {
        cut
    } else {
        cut.flip()
    }
}

/// Residue reconstruction of the one-mass box from the β- and α-closures.
///
/// `cut` is read as the side of m² ± i0 and every ₂F₁ argument inherits the side that
/// shift induces; the principal value averages both. The two F(1, 1; 2−ε; ·) factors are
/// split on a common side, that of whichever argument lies on its cut, so that their
/// spurious algebraic terms cancel.
pub fn residue_onemass(k: &Kinematics, cut: CutPrescription) -> Result<EvalBreakdown> {
    k.validate()?;
    let m = k.msq.ok_or_else(|| Error::Domain("one-mass residue pipeline needs msq".into()))?;
    let (s, t, eps) = (k.s, k.t, k.eps);
    let lg = 2.0 * ln_gamma_re(eps)?.re - ln_gamma_re(2.0 * eps)?.re;
    let lg1 = ln_gamma_re(1.0 - eps)?.re;

    // (s+t−m²)/s grows with m² since s < 0
    let w = (s + t - m) / s;
    let im1 = (lg + lg1 - eps.ln() + eps * (-t).ln()).exp() / (s * t) * f21_1e(c(w), eps, cut)?;

    // −(−m²)^ε/((m²−t)(m²−s)) Γ(ε)Γ(1−ε)Γ(ε−1)/Γ(2ε) F(1, 1; 2−ε; X)
    let x = s * t / ((m - s) * (m - t));
    let cut_x = induced(cut, -x * (1.0 / (m - s) + 1.0 / (m - t)));
    let pre_a = -(lg + lg1 + eps * (-m).ln()).exp() / (eps - 1.0) / ((m - t) * (m - s));
    let im2a = pre_a * f21_11(c(x), eps, cut_x)?;

    // −(−s)^ε/(s(m²−s)) Γ²(ε)Γ(1−ε)/(Γ(2ε)(1−ε)) F(1, 1; 2−ε; Y), with Y increasing in m²
    let y = t / (m - s);
    let cut_y = cut;
    let pre_b = -(lg + lg1 + eps * (-s).ln()).exp() / (1.0 - eps) / (s * (m - s));
    let im2b = pre_b * f21_11(c(y), eps, cut_y)?;

    let split = if x > 1.0 { cut_x } else { cut_y };
    let (hyp_a, alg_a) = continuation_58(c(x), eps, split)?;
    let (hyp_b, alg_b) = continuation_58(c(y), eps, split)?;

    let mut pieces = BTreeMap::new();
    pieces.insert("Im1".into(), im1);
    pieces.insert("Im2a".into(), im2a);
    pieces.insert("Im2b".into(), im2b);
    pieces.insert("Im2a_exact".into(), pre_a * hyp_a);
    pieces.insert("Im2b_exact".into(), pre_b * hyp_b);
    pieces.insert("spurious_a".into(), pre_a * alg_a);
    pieces.insert("spurious_b".into(), pre_b * alg_b);
    pieces.insert("spurious_sum".into(), pre_a * alg_a + pre_b * alg_b);
    pieces.insert("total".into(), im1 + im2a + im2b);
    Ok(EvalBreakdown { pieces, delta_pole_coefficient: c(0.0) })
}

/// I^m₂ₐ written through the reduced Appell F₂(2−ε; 1, 1; 2−ε, 2−ε; t/m², s/m²):
/// (−m²)^{ε−2} Γ²(ε−1)Γ(2−ε)/Γ(2ε) F₂.
pub fn onemass_im2a_via_f2(k: &Kinematics, cut: CutPrescription) -> Result<Complex64> {
    let m = k.msq.ok_or_else(|| Error::Domain("needs msq".into()))?;
    let eps = k.eps;
    let g = gamma(c(eps - 1.0))?;
    let pre = (-m).powf(eps - 2.0) * g * g * gamma(c(2.0 - eps))? / gamma(c(2.0 * eps))?;
    Ok(pre * appell_f2_reduced(1.0, 1.0, 2.0 - eps, c(k.t / m), c(k.s / m), cut)?)
}

/// Term-by-term residue sum of the massless integrand for one closure direction, as a
/// debugging reference: returns the sum of the first `terms` residues of every family in
/// that half-plane and a geometric tail bound.
pub fn closure_series_massless(k: &Kinematics, direction: Direction, terms: usize) -> Result<(Complex64, f64)> {
    k.validate()?;
    let (s, t, eps) = (k.s, k.t, k.eps);
    let (ls, lt) = ((-s).ln(), (-t).ln());
    let g2e = gamma(c(2.0 * eps))?.re;
    let power = |w: f64| (w * lt - (2.0 - eps + w) * ls).exp();
    let gr = |x: f64| -> Result<f64> { Ok(gamma(c(x))?.re) };
    let psi = digamma_re;
    let mut sum = 0.0;
    let mut last = [0.0; 2];
    let mut prev = [0.0; 2];
    for n in 0..terms {
        let nf = n as f64;
        let fact = gr(nf + 1.0)?;
        let psi_n = psi(nf + 1.0)?;
        let (simple, double) = match direction {
            Direction::Right => {
                // Γ(−w) at w = n; closing to the right contributes −Σ Res
                let w = nf;
                let simple = (-1f64).powi(n as i32) / fact
                    * gr(w + 1.0)?.powi(2)
                    * gr(2.0 - eps + w)?
                    * gr(eps - 1.0 - w)?.powi(2)
                    * power(w)
                    / g2e;
                // Γ²(ε−1−w) at w = ε−1+n
                let w = eps - 1.0 + nf;
                let h = gr(w + 1.0)?.powi(2) * gr(2.0 - eps + w)? * gr(-w)? * power(w) / g2e;
                let dlog = 2.0 * psi(w + 1.0)? + psi(2.0 - eps + w)? - psi(-w)? + lt - ls;
                let double = -h / (fact * fact) * (dlog - 2.0 * psi_n);
                (simple, double)
            }
            Direction::Left => {
                // Γ(2−ε+w) at w = ε−2−n
                let w = eps - 2.0 - nf;
                let simple = (-1f64).powi(n as i32) / fact
                    * gr(w + 1.0)?.powi(2)
                    * gr(-w)?
                    * gr(eps - 1.0 - w)?.powi(2)
                    * power(w)
                    / g2e;
                // Γ²(w+1) at w = −1−n
                let w = -1.0 - nf;
                let h = gr(2.0 - eps + w)? * gr(-w)? * gr(eps - 1.0 - w)?.powi(2) * power(w) / g2e;
                let dlog = psi(2.0 - eps + w)? - psi(-w)? - 2.0 * psi(eps - 1.0 - w)? + lt - ls;
                let double = h / (fact * fact) * (dlog + 2.0 * psi_n);
                (simple, double)
            }
        };
        prev = last;
        last = [simple.abs(), double.abs()];
        sum += simple + double;
        if !sum.is_finite() {
            return Err(Error::Overflow("closure series"));
        }
    }
    let mut tail = 0.0;
    for i in 0..2 {
        if last[i] == 0.0 {
            continue;
        }
        let r = last[i] / prev[i].max(f64::MIN_POSITIVE);
        if r >= 1.0 {
            return Err(Error::NonConvergence(format!("closure series ratio {r} in the chosen direction")));
        }
        tail += last[i] * r / (1.0 - r);
    }
    Ok((c(sum), tail))
}
