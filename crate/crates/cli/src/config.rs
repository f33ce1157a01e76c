use mbbox_core::closed_form::{Kinematics, Method};
use mbbox_core::mb_engine::{default_height, ContourSpec};
use mbbox_core::quad::QuadRule;
use mbbox_core::specfun::CutPrescription;
use mbbox_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integral {
    Massless,
    Onemass,
}

impl Integral {
    pub fn of(k: &Kinematics) -> Self {
        if k.msq.is_some() {
            Integral::Onemass
        } else {
            Integral::Massless
        }
    }
}

/// Thresholds used when comparing methods and checking identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative agreement between independent numerical methods.
    pub cross_method: f64,
    /// Relative agreement between analytically equivalent forms (closed vs residue).
    pub analytic: f64,
    /// Relative agreement of the double MB quadrature.
    pub mb_double: f64,
    /// Two-sided identity checks; cut-averaged and quadrature checks get 10× this.
    pub identities: f64,
    /// Spurious-term sum relative to the total.
    pub cancellation: f64,
    /// δ⁻¹ coefficient relative to the total.
    pub delta_pole: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { cross_method: 1e-8, analytic: 1e-10, mb_double: 1e-6, identities: 1e-11, cancellation: 1e-11, delta_pole: 1e-12 }
    }
}

impl Tolerances {
    /// Tolerance for comparing two methods on the given integral.
    pub fn pair(&self, integral: Integral, a: Method, b: Method) -> f64 {
        let analytic = |m: Method| matches!(m, Method::Closed | Method::ClosedAlt | Method::Residue);
        if integral == Integral::Onemass && (a == Method::Mb || b == Method::Mb) {
            self.mb_double
        } else if analytic(a) && analytic(b) {
            self.analytic
        } else {
            self.cross_method
        }
    }
}

/// User overrides of the MB contour; unset fields keep the automatic choice.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadOverrides {
    pub abscissa: Option<f64>,
    /// Abscissa of the second (β) contour of the one-mass integral.
    pub abscissa_beta: Option<f64>,
    pub height: Option<f64>,
    pub nodes: Option<usize>,
    pub rule: Option<QuadRule>,
    pub tolerance: Option<f64>,
}

impl QuadOverrides {
    pub fn apply(&self, mut c: ContourSpec, abscissa: Option<f64>, k: &Kinematics) -> ContourSpec {
        if let Some(a) = abscissa {
            c.abscissa = a;
        }
        c.height = self.height.unwrap_or_else(|| c.height.max(default_height(k)));
        if let Some(n) = self.nodes {
            c.nodes = n;
        }
        if let Some(r) = self.rule {
            c.rule = r;
        }
        if let Some(t) = self.tolerance {
            c.tolerance = t;
        }
        c
    }
}

/// Everything needed to evaluate one kinematic point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub integral: Integral,
    pub kinematics: Kinematics,
    pub method: Method,
    pub cut: CutPrescription,
    pub tolerances: Tolerances,
    pub quad: QuadOverrides,
}

impl RunConfig {
    pub fn new(kinematics: Kinematics, method: Method) -> Self {
        RunConfig {
            integral: Integral::of(&kinematics),
            kinematics,
            method,
            cut: CutPrescription::PrincipalValue,
            tolerances: Tolerances::default(),
            quad: QuadOverrides::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.integral != Integral::of(&self.kinematics) {
            return Err(Error::Domain(match self.integral {
                Integral::Onemass => "the one-mass integral needs --msq".into(),
                Integral::Massless => "the massless integral takes no --msq".into(),
            }));
        }
        self.kinematics.validate()
    }
}

pub fn parse_method(s: &str) -> std::result::Result<Method, String> {
    Method::ALL
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| format!("unknown method {s:?}; expected one of closed, closed_alt, mb, residue, feynman"))
}

pub fn parse_cut(s: &str) -> std::result::Result<CutPrescription, String> {
    match s {
        "pv" | "principal_value" => Ok(CutPrescription::PrincipalValue),
        "above" | "above_cut" => Ok(CutPrescription::AboveCut),
        "below" | "below_cut" => Ok(CutPrescription::BelowCut),
        _ => Err(format!("unknown cut prescription {s:?}; expected pv, above or below")),
    }
}

pub fn parse_rule(s: &str) -> std::result::Result<QuadRule, String> {
    match s {
        "gl" | "gauss_legendre" => Ok(QuadRule::GaussLegendreComposite),
        "tanh_sinh" | "ts" => Ok(QuadRule::TanhSinh),
        _ => Err(format!("unknown quadrature rule {s:?}; expected gl or tanh_sinh")),
    }
}
