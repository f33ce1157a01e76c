use std::collections::BTreeMap;

use mbbox_core::closed_form::Kinematics;
use mbbox_core::series::RegulatorSeries;
use mbbox_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Integral;

/// A complex number as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Cplx { re: z.re, im: z.im }
    }
}

impl From<Cplx> for Complex64 {
    fn from(z: Cplx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicsRecord {
    pub s: f64,
    pub t: f64,
    pub msq: Option<f64>,
    pub eps: Option<f64>,
}

impl KinematicsRecord {
    pub fn of(k: &Kinematics) -> Self {
        KinematicsRecord { s: k.s, t: k.t, msq: k.msq, eps: Some(k.eps) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub power: i32,
    pub re: f64,
    pub im: f64,
}

pub fn laurent_terms(series: &RegulatorSeries, max_power: i32) -> Vec<LaurentTerm> {
    (series.min_power()..=max_power.min(series.order()))
        .filter_map(|p| series.coeff(p).map(|c| LaurentTerm { power: p, re: c.re, im: c.im }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    SkippedDegenerate,
    Error,
}

/// Relative deviation between two method values, |a − b| / max(|a|, |b|).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub a: String,
    pub b: String,
    pub rel: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Deviation {
    pub fn new(a: &str, b: &str, va: Complex64, vb: Complex64, tol: f64) -> Self {
        let rel = relative(va, vb);
        Deviation { a: a.into(), b: b.into(), rel, tol, pass: rel <= tol }
    }
}

pub fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// One kinematic point with everything computed for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    #[serde(default)]
    pub index: usize,
    pub integral: Integral,
    pub kinematics: KinematicsRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Cplx>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Cplx>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deviations: Vec<Deviation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub laurent: Vec<LaurentTerm>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub breakdown: BTreeMap<String, Cplx>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl PointRecord {
    pub fn new(index: usize, k: &Kinematics) -> Self {
        PointRecord {
            index,
            integral: Integral::of(k),
            kinematics: KinematicsRecord::of(k),
            method: None,
            value: None,
            values: BTreeMap::new(),
            deviations: Vec::new(),
            laurent: Vec::new(),
            breakdown: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            status: Status::Pass,
            message: None,
        }
    }

    /// Sets the status from the deviations unless the point was skipped or errored.
    pub fn settle(&mut self) {
        if self.status == Status::Pass && self.deviations.iter().any(|d| !d.pass) {
            self.status = Status::Fail;
        }
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().map(|d| d.rel).fold(0.0, f64::max)
    }
}

/// A two-sided numeric identity evaluated at one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub point: String,
    pub lhs: Cplx,
    pub rhs: Cplx,
    /// Relative deviation, or absolute when `absolute` is set.
    pub deviation: f64,
    #[serde(default)]
    pub absolute: bool,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, point: String, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let d = relative(lhs, rhs);
        Check { name: name.into(), point, lhs: lhs.into(), rhs: rhs.into(), deviation: d, absolute: false, tol, pass: d <= tol }
    }

    pub fn absolute(name: &str, point: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        let d = (lhs - rhs).abs();
        let (l, r) = (Cplx { re: lhs, im: 0.0 }, Cplx { re: rhs, im: 0.0 });
        Check { name: name.into(), point, lhs: l, rhs: r, deviation: d, absolute: true, tol, pass: d <= tol }
    }

    /// A check that could not be evaluated; JSON has no NaN, so the sides are zero and the
    /// deviation is the largest finite double.
    pub fn errored(name: &str, point: String, err: &mbbox_core::Error, tol: f64) -> Self {
        let zero = Cplx { re: 0.0, im: 0.0 };
        Check { name: format!("{name} ({err})"), point, lhs: zero, rhs: zero, deviation: f64::MAX, absolute: false, tol, pass: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub points: usize,
    pub checks: usize,
    pub max_deviation: f64,
    /// Offending records ("point #i") and checks ("name @ point").
    pub failures: Vec<String>,
    pub warnings: usize,
}

/// Output of `verify` and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default)]
    pub records: Vec<PointRecord>,
    #[serde(default)]
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, records: Vec<PointRecord>, checks: Vec<Check>) -> Self {
        let mut summary = Summary { points: records.len(), checks: checks.len(), ..Summary::default() };
        for r in &records {
            summary.max_deviation = summary.max_deviation.max(r.max_deviation());
            match r.status {
                Status::Pass => {}
                Status::SkippedDegenerate => summary.warnings += 1,
                Status::Fail | Status::Error => summary.failures.push(format!("point #{}", r.index)),
            }
        }
        for c in &checks {
            if !c.absolute && c.deviation < f64::MAX {
                summary.max_deviation = summary.max_deviation.max(c.deviation);
            }
            if !c.pass {
                summary.failures.push(format!("{} @ {}", c.name, c.point));
            }
        }
        Report { command: command.into(), records, checks, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.failures.is_empty()
    }

    /// 0 when every record and check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}
