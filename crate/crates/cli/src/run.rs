use std::collections::BTreeMap;

use mbbox_core::closed_form::{
    massless_box, massless_box_alt, massless_box_laurent, onemass_box, onemass_box_alt, onemass_box_laurent, BoxValue,
    Kinematics, Method,
};
use mbbox_core::mb_engine::{
    mb_massless_eval, mb_onemass_eval, residue_massless, residue_onemass, select_contour_massless, select_contour_onemass,
};
use mbbox_core::oracles::{feynman_1d_massless, feynman_1d_onemass};
use mbbox_core::series::RegulatorSeries;
use mbbox_core::specfun::CutPrescription;
use mbbox_core::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{parse_method, Integral, QuadOverrides, RunConfig, Tolerances};
use crate::report::{laurent_terms, Deviation, PointRecord, Report, Status};

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("malformed grid: {0}")]
    Grid(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if is_numerical(e) => 3,
            _ => 2,
        }
    }
}

fn is_numerical(e: &Error) -> bool {
    matches!(
        e,
        Error::NotConverged { .. } | Error::NonConvergence(_) | Error::Overflow(_) | Error::Pole(_) | Error::DivisionByZeroSeries
    )
}

/// Evaluates the box with one method.
pub fn evaluate(k: &Kinematics, method: Method, cut: CutPrescription, quad: &QuadOverrides) -> Result<BoxValue> {
    match (Integral::of(k), method) {
        (Integral::Massless, Method::Closed) => massless_box(k, cut),
        (Integral::Massless, Method::ClosedAlt) => massless_box_alt(k, cut),
        (Integral::Massless, Method::Residue) => Ok(residue_massless(k, cut)?.into_box_value()),
        (Integral::Massless, Method::Feynman) => feynman_1d_massless(k),
        (Integral::Massless, Method::Mb) => {
            let c = quad.apply(select_contour_massless(k.eps)?, quad.abscissa, k);
            mb_massless_eval(k, &c)
        }
        (Integral::Onemass, Method::Closed) => onemass_box(k, cut),
        (Integral::Onemass, Method::ClosedAlt) => onemass_box_alt(k, cut),
        (Integral::Onemass, Method::Residue) => Ok(residue_onemass(k, cut)?.into_box_value()),
        (Integral::Onemass, Method::Feynman) => feynman_1d_onemass(k),
        (Integral::Onemass, Method::Mb) => {
            let (ca, cb) = select_contour_onemass(k.eps)?;
            let ca = quad.apply(ca, quad.abscissa, k);
            let cb = quad.apply(cb, quad.abscissa_beta, k);
            mb_onemass_eval(k, &ca, &cb)
        }
    }
}

/// Analytic ε-expansion c₋₂ ε⁻² + c₋₁ ε⁻¹ + c₀ (the ε field of `k` is ignored).
pub fn laurent(k: &Kinematics) -> Result<RegulatorSeries> {
    match Integral::of(k) {
        Integral::Massless => massless_box_laurent(k),
        Integral::Onemass => onemass_box_laurent(k),
    }
}

/// Copies diagnostics under their reported names; the contour tail becomes `tail_estimate`.
fn diagnostics_of(v: &BoxValue) -> BTreeMap<String, f64> {
    v.diagnostics
        .iter()
        .map(|(key, val)| (if key == "truncation_tail" { "tail_estimate".to_string() } else { key.clone() }, *val))
        .collect()
}

pub fn cmd_eval(cfg: &RunConfig) -> std::result::Result<PointRecord, CliError> {
    cfg.validate()?;
    let k = &cfg.kinematics;
    let v = evaluate(k, cfg.method, cfg.cut, &cfg.quad)?;
    let mut rec = PointRecord::new(0, k);
    rec.method = Some(cfg.method.name().into());
    rec.value = Some(v.value.into());
    rec.laurent = laurent_terms(&laurent(k)?, 0);
    rec.breakdown = v.pieces.iter().map(|(key, z)| (key.clone(), (*z).into())).collect();
    rec.diagnostics = diagnostics_of(&v);
    Ok(rec)
}

/// Lowest and highest supported orders of the expansion.
pub const EXPAND_ORDERS: (i32, i32) = (-2, 0);

pub fn cmd_expand(cfg: &RunConfig, order: i32) -> std::result::Result<PointRecord, CliError> {
    if !(EXPAND_ORDERS.0..=EXPAND_ORDERS.1).contains(&order) {
        return Err(CliError::Usage(format!("order {order} outside the supported range −2…0")));
    }
    cfg.validate()?;
    let k = &cfg.kinematics;
    let mut rec = PointRecord::new(0, k);
    rec.kinematics.eps = None;
    rec.method = Some("analytic_series".into());
    rec.laurent = laurent_terms(&laurent(k)?, order);
    Ok(rec)
}

/// One entry of a sweep grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPoint {
    pub s: f64,
    pub t: f64,
    #[serde(default)]
    pub msq: Option<f64>,
    pub eps: f64,
    #[serde(default)]
    pub methods: Option<Vec<String>>,
}

/// Sweep input: either a bare list of points or an object with shared settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default = "default_sweep_methods")]
    pub methods: Vec<String>,
    #[serde(default)]
    pub cut: CutPrescription,
    #[serde(default)]
    pub tolerance: Option<f64>,
    pub points: Vec<GridPoint>,
}

fn default_sweep_methods() -> Vec<String> {
    vec!["closed".into(), "residue".into()]
}

pub fn parse_grid(text: &str) -> std::result::Result<Grid, CliError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        Full(Grid),
        Points(Vec<GridPoint>),
    }
    let grid = match serde_json::from_str::<Input>(text) {
        Ok(Input::Full(g)) => g,
        Ok(Input::Points(points)) => Grid { methods: default_sweep_methods(), cut: CutPrescription::default(), tolerance: None, points },
        Err(e) => return Err(CliError::Grid(e.to_string())),
    };
    let all = grid.points.iter().filter_map(|p| p.methods.as_ref()).flatten().chain(&grid.methods);
    for m in all {
        parse_method(m).map_err(CliError::Grid)?;
    }
    if grid.methods.is_empty() {
        return Err(CliError::Grid("empty method list".into()));
    }
    Ok(grid)
}

/// Evaluates `methods` at one point and compares every later method against the first.
pub fn compare_methods(
    index: usize,
    k: &Kinematics,
    methods: &[Method],
    cut: CutPrescription,
    tol: &Tolerances,
    quad: &QuadOverrides,
) -> PointRecord {
    let mut rec = PointRecord::new(index, k);
    if let Err(e) = k.validate() {
        rec.status = if matches!(e, Error::DegenerateKinematics(_)) { Status::SkippedDegenerate } else { Status::Error };
        rec.message = Some(e.to_string());
        return rec;
    }
    let integral = Integral::of(k);
    let mut base: Option<(Method, BoxValue)> = None;
    for &m in methods {
        match evaluate(k, m, cut, quad) {
            Ok(v) => {
                rec.values.insert(m.name().into(), v.value.into());
                if let Some((bm, bv)) = &base {
                    rec.deviations.push(Deviation::new(bm.name(), m.name(), bv.value, v.value, tol.pair(integral, *bm, m)));
                } else {
                    rec.method = Some(m.name().into());
                    rec.value = Some(v.value.into());
                }
                for (key, val) in diagnostics_of(&v) {
                    rec.diagnostics.insert(format!("{}.{key}", m.name()), val);
                }
                base.get_or_insert((m, v));
            }
            Err(e) => {
                rec.status = Status::Error;
                rec.message = Some(format!("{}: {e}", m.name()));
            }
        }
    }
    rec.settle();
    rec
}

/// Evaluates every grid point concurrently; records keep the input order.
pub fn cmd_sweep(grid: &Grid, quad: &QuadOverrides) -> Report {
    let mut tol = Tolerances::default();
    if let Some(t) = grid.tolerance {
        tol.cross_method = t;
        tol.analytic = tol.analytic.min(t);
    }
    let records: Vec<PointRecord> = grid
        .points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let names = p.methods.as_ref().unwrap_or(&grid.methods);
            // names were checked in parse_grid
            let methods: Vec<Method> = names.iter().filter_map(|m| parse_method(m).ok()).collect();
            let k = Kinematics { s: p.s, t: p.t, msq: p.msq, eps: p.eps };
            compare_methods(i, &k, &methods, grid.cut, &tol, quad)
        })
        .collect();
    Report::new("sweep", records, Vec::new())
}
