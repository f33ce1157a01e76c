//! Truncated Laurent series in one small regulator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, CutPrescription};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regulator {
    Epsilon,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpLogOp {
    Exp,
    Log,
}

/// `Σ_{p=min_power}^{order−1} c_p ξ^p + O(ξ^order)`.
///
/// Leading exact zeros are trimmed, so a non-empty series has a nonzero
/// leading coefficient. The zero series is stored with `min_power == order`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulatorSeries {
    label: Regulator,
    min_power: i32,
    coeffs: Vec<Complex64>,
    order: i32,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl RegulatorSeries {
    /// Series with the given coefficients, known through the last one.
    pub fn new(label: Regulator, min_power: i32, coeffs: Vec<Complex64>) -> Self {
        let order = min_power + coeffs.len() as i32;
        Self::with_order(label, min_power, coeffs, order)
    }

    /// Series truncated (or zero-padded) so that the remainder is O(ξ^order).
    pub fn with_order(label: Regulator, min_power: i32, mut coeffs: Vec<Complex64>, order: i32) -> Self {
        let len = (order - min_power).max(0) as usize;
        coeffs.resize(len, ZERO);
        let mut s = RegulatorSeries { label, min_power: min_power.min(order), coeffs, order };
        s.normalize();
        s
    }

    pub fn constant(label: Regulator, c: Complex64, order: i32) -> Self {
        Self::with_order(label, 0, vec![c], order)
    }

    pub fn monomial(label: Regulator, power: i32, c: Complex64, order: i32) -> Self {
        Self::with_order(label, power, vec![c], order)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_power += lead as i32;
        }
    }

    pub fn label(&self) -> Regulator {
        self.label
    }

    pub fn min_power(&self) -> i32 {
        self.min_power
    }

    /// Exclusive truncation power.
    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of ξ^p, or `None` when p lies beyond the truncation.
    pub fn coeff(&self, p: i32) -> Option<Complex64> {
        if p >= self.order {
            None
        } else if p < self.min_power {
            Some(ZERO)
        } else {
            Some(self.coeffs[(p - self.min_power) as usize])
        }
    }

    fn c(&self, p: i32) -> Complex64 {
        self.coeff(p).unwrap_or(ZERO)
    }

    fn check_label(&self, other: &Self) -> Result<()> {
        if self.label == other.label {
            Ok(())
        } else {
            Err(Error::LabelMismatch(self.label, other.label))
        }
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        let lo = self.min_power.min(order);
        let coeffs = (lo..order).map(|p| self.c(p)).collect();
        Self::with_order(self.label, lo, coeffs, order)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        let order = self.order.min(other.order);
        let lo = self.min_power.min(other.min_power).min(order);
        let coeffs = (lo..order).map(|p| self.c(p) + other.c(p)).collect();
        Ok(Self::with_order(self.label, lo, coeffs, order))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        let order = (self.order + other.min_power).min(other.order + self.min_power);
        let lo = (self.min_power + other.min_power).min(order);
        let mut coeffs = vec![ZERO; (order - lo) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = self.min_power + other.min_power + (i + j) as i32;
                if p < order {
                    coeffs[(p - lo) as usize] += a * b;
                }
            }
        }
        Ok(Self::with_order(self.label, lo, coeffs, order))
    }

    /// Multiplicative inverse; fails on the zero series.
    pub fn inv(&self) -> Result<Self> {
        let b0 = *self.coeffs.first().ok_or(Error::DivisionByZeroSeries)?;
        if b0 == ZERO || !b0.re.is_finite() || !b0.im.is_finite() {
            return Err(Error::DivisionByZeroSeries);
        }
        let n = self.coeffs.len();
        let mut g = Vec::with_capacity(n);
        g.push(1.0 / b0);
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * g[k - j];
            }
            g.push(-acc / b0);
        }
        let m = self.min_power;
        Ok(Self::with_order(self.label, -m, g, -m + n as i32))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_label(other)?;
        self.mul(&other.inv()?)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self::with_order(self.label, self.min_power, coeffs, self.order)
    }

    /// Adds a constant; it only survives when the constant term is known.
    pub fn add_const(&self, c: Complex64) -> Self {
        let k = Self::constant(self.label, c, self.order.max(1));
        self.add(&k).expect("same label")
    }

    /// Substitutes ξ → λ ξ.
    pub fn scale_var(&self, lambda: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * lambda.powi(self.min_power + i as i32))
            .collect();
        Self::with_order(self.label, self.min_power, coeffs, self.order)
    }

    pub fn exp(&self) -> Result<Self> {
        if self.min_power < 0 {
            return Err(Error::Domain("exp of a series with a pole part".into()));
        }
        let order = self.order;
        if order <= 0 {
            return Ok(Self::with_order(self.label, 0, vec![], order));
        }
        let n = order as usize;
        let r: Vec<Complex64> = (0..n as i32).map(|p| if p == 0 { ZERO } else { self.c(p) }).collect();
        let mut e = vec![ZERO; n];
        e[0] = Complex64::new(1.0, 0.0);
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += j as f64 * r[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        let c0 = self.c(0).exp();
        Ok(Self::with_order(self.label, 0, e, order).scale(c0))
    }

    pub fn log(&self) -> Result<Self> {
        if self.min_power != 0 || self.coeffs.is_empty() {
            return Err(Error::Domain("log needs a nonzero constant term".into()));
        }
        let c0 = self.coeffs[0];
        let b: Vec<Complex64> = self.coeffs.iter().map(|a| a / c0).collect();
        let n = b.len();
        let mut l = vec![ZERO; n];
        l[0] = c0.ln();
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..k {
                acc += j as f64 * l[j] * b[k - j];
            }
            l[k] = b[k] - acc / k as f64;
        }
        Ok(Self::with_order(self.label, 0, l, self.order))
    }

    /// Evaluates the truncated polynomial at ξ.
    pub fn eval(&self, xi: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * xi.powi(self.min_power + i as i32))
            .sum()
    }
}

pub fn series_arith(a: &RegulatorSeries, b: &RegulatorSeries, op: ArithOp) -> Result<RegulatorSeries> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
    }
}

pub fn series_exp_log(a: &RegulatorSeries, op: ExpLogOp) -> Result<RegulatorSeries> {
    match op {
        ExpLogOp::Exp => a.exp(),
        ExpLogOp::Log => a.log(),
    }
}

/// Γ(a + ξ) through ξ^order, with the Laurent pole when a is a non-positive integer.
pub fn gamma_series(a: f64, order: i32, label: Regulator) -> Result<RegulatorSeries> {
    if order > 4 {
        return Err(Error::Domain(format!("gamma_series order {order} exceeds 4")));
    }
    if a <= 0.0 && a.fract() == 0.0 {
        let n = (-a) as i32;
        let num = gamma_series(1.0, order + 1, label)?;
        // ξ (ξ − 1) ⋯ (ξ − n)
        let mut den = RegulatorSeries::monomial(label, 1, Complex64::new(1.0, 0.0), order + 3);
        for j in 1..=n {
            let f = RegulatorSeries::with_order(
                label,
                0,
                vec![Complex64::new(-(j as f64), 0.0), Complex64::new(1.0, 0.0)],
                order + n + 3,
            );
            den = den.mul(&f)?;
        }
        return num.div(&den).map(|s| s.truncate(order + 1));
    }
    let mut lg = vec![specfun::ln_gamma_re(a)?];
    let mut fact = 1.0;
    for k in 1..=order.max(0) as usize {
        fact *= k as f64;
        lg.push(Complex64::new(specfun::polygamma_fd(k - 1, a)? / fact, 0.0));
    }
    RegulatorSeries::with_order(label, 0, lg, order + 1).exp()
}

/// base^ξ = exp(ξ ln base) through ξ^order.
pub fn power_series(base: Complex64, order: i32, label: Regulator) -> Result<RegulatorSeries> {
    if base == ZERO {
        return Err(Error::Domain("power series of a zero base".into()));
    }
    let l = RegulatorSeries::monomial(label, 1, base.ln(), order + 1);
    l.exp()
}

/// ₂F₁(1, ε; 1+ε; z) = 1 + Σ_k (−1)^{k−1} Li_k(z) ε^k, through ε^order (order ≤ 2).
pub fn f21_1e_expansion(z: Complex64, order: i32, cut: CutPrescription) -> Result<RegulatorSeries> {
    if order > 2 {
        return Err(Error::Domain(format!("f21_1e_expansion order {order} exceeds 2")));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain("expansion point z = 1".into()));
    }
    let li1 = -specfun::ln_1m(z, cut)?;
    let li2 = specfun::li2(z, cut)?;
    let c = vec![Complex64::new(1.0, 0.0), li1, -li2];
    Ok(RegulatorSeries::with_order(Regulator::Epsilon, 0, c, order + 1))
}

/// z/(1+ε)·₂F₁(1, 1+ε; 2+ε; z) = Σ_k (−1)^k Li_{k+1}(z) ε^k, through ε^order (order ≤ 1).
pub fn f21_2e_expansion(z: Complex64, order: i32, cut: CutPrescription) -> Result<RegulatorSeries> {
    if order > 1 {
        return Err(Error::Domain(format!("f21_2e_expansion order {order} exceeds 1")));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Domain("expansion point z = 1".into()));
    }
    let li1 = -specfun::ln_1m(z, cut)?;
    let li2 = specfun::li2(z, cut)?;
    Ok(RegulatorSeries::with_order(Regulator::Epsilon, 0, vec![li1, -li2], order + 1))
}
