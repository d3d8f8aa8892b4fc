//! Local smoothing for the Airy flow and the conjugate-root map of
//! `g(x) = 3x² + x³`.
//!
//! For `a ≥ 0` integrable and `û` supported away from 0,
//!
//! ```text
//! ∫∫ a(x) | |D_x| e^{-t∂³} u |² dx dt = (1/3) ‖a‖₁ ‖u‖²₂ ,
//! ```
//!
//! an identity rather than an inequality. [`local_smoothing_value`] evaluates
//! the left side on a growing time window.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{FreqProfile, SpaceTimeGrid};
use crate::error::{Error, Result};
use crate::propagators::{Extension, ExtensionPlan};
use crate::quad::pairwise_sum;

/// `√3 − 1`, the positive root of `y²(3 + y) = 2`.
pub fn sqrt3_minus_1() -> f64 {
    3f64.sqrt() - 1.0
}

/// Both sides of the local-smoothing identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingValue {
    pub lhs: f64,
    pub rhs: f64,
    /// Half-width of the final time window.
    pub window: f64,
    /// Share of `lhs` contributed by the last added time shell.
    pub shell_fraction: f64,
    pub doublings: usize,
}

impl SmoothingValue {
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Controls the time-window doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowControl {
    pub shell_tol: f64,
    pub max_doublings: usize,
}

impl Default for WindowControl {
    fn default() -> Self {
        Self { shell_tol: 5e-3, max_doublings: 6 }
    }
}

/// `∫∫ a(x)|Ψ_1[u]|² dx dt` with `a` sampled on the x-nodes of `grid`. The
/// time window `[t_min, t_max]` is doubled about its center (same step) until
/// the added shell contributes less than `ctl.shell_tol` of the total.
pub fn local_smoothing_value(u: &FreqProfile, a: &[f64], grid: &SpaceTimeGrid, ctl: WindowControl) -> Result<SmoothingValue> {
    if a.len() != grid.nx {
        return Err(Error::GridMismatch(format!("{} weight samples for {} x-nodes", a.len(), grid.nx)));
    }
    if let Some(v) = a.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!("local smoothing weight must be nonnegative and finite, found {v}")));
    }
    let wx = grid.x_weights();
    let a_l1 = pairwise_sum(&a.iter().zip(&wx).map(|(a, w)| a * w).collect::<Vec<_>>());
    let rhs = a_l1 * u.l2_mass() / 3.0;

    let mut g = *grid;
    let mut lhs = weighted_energy(u, a, &g)?;
    let mut doublings = 0;
    let mut shell = f64::INFINITY;
    if lhs == 0.0 {
        shell = 0.0;
    }
    while shell >= ctl.shell_tol && doublings < ctl.max_doublings {
        let c = 0.5 * (g.t_min + g.t_max);
        let h = 0.5 * (g.t_max - g.t_min);
        g = SpaceTimeGrid { t_min: c - 2.0 * h, t_max: c + 2.0 * h, nt: 2 * g.nt - 1, ..g };
        let next = weighted_energy(u, a, &g)?;
        shell = (next - lhs).abs() / next;
        lhs = next;
        doublings += 1;
    }
    Ok(SmoothingValue { lhs, rhs, window: 0.5 * (g.t_max - g.t_min), shell_fraction: shell, doublings })
}

fn weighted_energy(u: &FreqProfile, a: &[f64], g: &SpaceTimeGrid) -> Result<f64> {
    if u.is_zero() {
        return Ok(0.0);
    }
    let field = ExtensionPlan::new(Extension::Airy { gamma: 1.0 }, u.grid, *g)?.field(u)?;
    let wx = g.x_weights();
    let rows: Vec<f64> = field
        .rows()
        .map(|row| pairwise_sum(&row.iter().zip(a).zip(&wx).map(|((z, a), w)| w * a * z.norm_sqr()).collect::<Vec<_>>()))
        .collect();
    Ok(pairwise_sum(&g.t_weights().iter().zip(&rows).map(|(w, r)| w * r).collect::<Vec<_>>()))
}

/// `g(x) = 3x² + x³`.
pub fn g_cubic(x: f64) -> f64 {
    x * x * (3.0 + x)
}

/// The second preimage `y` of `g(η)`: `g(y) = g(η)`, `η y < 0`, `y ≥ −1`.
pub fn conjugate_root(eta: f64) -> Result<f64> {
    let top = sqrt3_minus_1();
    if !(eta >= -1.0 && eta <= top) || eta == 0.0 {
        return Err(Error::domain(format!("conjugate root needs eta in [-1, sqrt3 - 1] without 0, got {eta}")));
    }
    let target = g_cubic(eta);
    // g is increasing on [0, √3−1] and decreasing on [−1, 0].
    let (mut lo, mut hi) = if eta < 0.0 { (0.0, top) } else { (-1.0, 0.0) };
    let increasing = eta < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let above = g_cubic(mid) > target;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    // Keep the sign opposition strict even when η is tiny.
    Ok(if y == 0.0 { if eta < 0.0 { f64::MIN_POSITIVE } else { -f64::MIN_POSITIVE } } else { y })
}

/// Supremum of `|η| / |y_η|` found by scanning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurBound {
    pub numerical_sup: f64,
    pub argmax: f64,
    pub analytic_bound: f64,
    pub samples: usize,
}

/// Scans `samples` equispaced points of `[−1, √3−1]` (skipping 0).
pub fn schur_sup_bound_with(samples: usize) -> Result<SchurBound> {
    if samples < 2 {
        return Err(Error::domain("need at least two scan points"));
    }
    let top = sqrt3_minus_1();
    let step = (top + 1.0) / (samples - 1) as f64;
    let best = (0..samples)
        .into_par_iter()
        .map(|i| if i == samples - 1 { top } else { -1.0 + i as f64 * step })
        .filter(|&eta| eta != 0.0)
        .map(|eta| conjugate_root(eta).map(|y| (eta.abs() / y.abs(), eta)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0.0, f64::NAN), |acc, v| if v.0 > acc.0 { v } else { acc });
    Ok(SchurBound { numerical_sup: best.0, argmax: best.1, analytic_bound: 2.0, samples })
}

pub fn schur_sup_bound() -> Result<SchurBound> {
    schur_sup_bound_with(10_001)
}

/// `f_δ(ξ) = |ξ|^{1/2} / |1 + δξ|^{1/p}`.
pub fn f_delta(xi: f64, delta: f64, p: f64) -> Result<f64> {
    let s = 1.0 + delta * xi;
    if s == 0.0 {
        return Err(Error::SingularPoint { xi });
    }
    Ok(xi.abs().sqrt() / s.abs().powf(1.0 / p))
}
