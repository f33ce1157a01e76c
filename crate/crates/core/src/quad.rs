//! Quadrature rules for vertical-line Mellin-Barnes integrals.
//!
//! A line is cut at "feature" ordinates (points where a pole sits close to the contour)
//! and every piece is mapped so that nodes cluster at its feature end.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Points per Gauss-Legendre panel.
pub const PANEL_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum QuadRule {
    #[default]
    GaussLegendreComposite,
    TanhSinh,
}

/// Gauss-Legendre nodes and weights on [−1, 1], by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (z * p - p0) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
pub fn composite_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = panel_rule();
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(w) {
            sum += wi * f(mid + 0.5 * h * xi);
        }
    }
    0.5 * h * sum
}

/// Quadrature nodes `y` with weights `w` along a line, so that ∫ f(y) dy ≈ Σ wᵢ f(yᵢ).
#[derive(Debug, Clone, Default)]
pub struct LineGrid {
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl LineGrid {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Σ wᵢ f(yᵢ), evaluated in parallel and summed serially in node order.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64 + Sync,
    {
        let vals: Vec<Complex64> = self.y.par_iter().map(|&y| f(y)).collect();
        ordered_sum(vals.iter().zip(&self.w).map(|(v, w)| v * w))
    }

    /// Serial variant for use inside an already parallel outer loop.
    pub fn integrate_serial<F>(&self, f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        ordered_sum(self.y.iter().zip(&self.w).map(|(&y, w)| f(y) * w))
    }

    /// Adds nodes for y = anchor + dir·d·sinh(u), u ∈ [0, asinh(len/d)].
    fn push_mapped(&mut self, rule: QuadRule, anchor: f64, dir: f64, len: f64, scale: f64, nodes: usize) {
        let umax = (len / scale).asinh();
        let mut push = |u: f64, wu: f64| {
            self.y.push(anchor + dir * scale * u.sinh());
            self.w.push(wu * scale * u.cosh());
        };
        match rule {
            QuadRule::GaussLegendreComposite => {
                let panels = nodes.div_ceil(PANEL_ORDER).max(1);
                let (x, w) = panel_rule();
                let h = umax / panels as f64;
                for p in 0..panels {
                    let mid = (p as f64 + 0.5) * h;
                    for (xi, wi) in x.iter().zip(w) {
                        push(mid + 0.5 * h * xi, 0.5 * h * wi);
                    }
                }
            }
            QuadRule::TanhSinh => {
                // u = umax·(1 + tanh(π/2 sinh v))/2 on a uniform v grid
                let vmax = 3.2;
                let h = 2.0 * vmax / nodes as f64;
                for k in 0..nodes {
                    let v = -vmax + (k as f64 + 0.5) * h;
                    let q = 0.5 * PI * v.sinh();
                    let x = 0.5 * (1.0 + q.tanh());
                    let jac = 0.25 * PI * v.cosh() / (q.cosh() * q.cosh());
                    push(umax * x, h * umax * jac);
                }
            }
        }
    }
}

/// Compensated sum in iteration order; the result is independent of thread scheduling.
pub fn ordered_sum<I: Iterator<Item = Complex64>>(it: I) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for v in it {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Builds the grid on [−height, height] clustering nodes at every feature ordinate.
///
/// `scale` is the distance from the contour to the nearest pole, which sets the width of
/// the refined region; `nodes` is the approximate total node count.
pub fn line_grid(rule: QuadRule, features: &[f64], scale: f64, height: f64, nodes: usize) -> LineGrid {
    let mut cuts: Vec<f64> = features.iter().copied().filter(|f| f.abs() < height).collect();
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * height);
    if cuts.is_empty() {
        cuts.push(0.0);
    }
    // half-pieces (anchor, direction, length), each clustered at its anchor feature
    let mut pieces = vec![(cuts[0], -1.0, cuts[0] + height)];
    for pair in cuts.windows(2) {
        let half = 0.5 * (pair[1] - pair[0]);
        pieces.push((pair[0], 1.0, half));
        pieces.push((pair[1], -1.0, half));
    }
    let last = *cuts.last().unwrap_or(&0.0);
    pieces.push((last, 1.0, height - last));
    pieces.retain(|p| p.2 > 0.0);

    let weight = |len: f64| (len / scale).asinh();
    let total: f64 = pieces.iter().map(|p| weight(p.2)).sum();
    let mut grid = LineGrid::default();
    for (anchor, dir, len) in pieces {
        let share = ((nodes as f64) * weight(len) / total).ceil() as usize;
        grid.push_mapped(rule, anchor, dir, len, scale, share.max(PANEL_ORDER));
    }
    grid
}
