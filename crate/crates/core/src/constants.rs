//! The threshold constant `a_p`, the cosine averages `φ_q(a)` and the
//! two-point interaction average.
//!
//! `a_p` has two independent evaluations: a Gamma-function closed form and a
//! periodic trapezoid rule for `((1/2π)∫(1+cos θ)^{q/2} dθ)^{p/q}`. The two
//! routes share no code and serve as mutual checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::domain::ExponentTriple;
use crate::error::{Error, Result};
use crate::quad::periodic_mean;

/// Default number of θ-nodes for the periodic trapezoid rule.
pub const THETA_NODES: usize = 2048;

/// `a_p` by both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct APValue {
    pub p: f64,
    pub q: f64,
    pub gamma_form: f64,
    pub quad_form: f64,
}

impl APValue {
    pub fn compute(exps: &ExponentTriple) -> Result<Self> {
        Ok(Self {
            p: exps.p,
            q: exps.q,
            gamma_form: a_p_closed_form(exps)?,
            quad_form: a_p_quadrature(exps, THETA_NODES)?,
        })
    }

    /// `|gamma_form - quad_form| / gamma_form`.
    pub fn agreement(&self) -> f64 {
        (self.gamma_form - self.quad_form).abs() / self.gamma_form
    }
}

/// `2^{p/2} π^{-p/(2q)} (Γ((q+1)/2) / Γ((q+2)/2))^{p/q}`.
pub fn a_p_closed_form(exps: &ExponentTriple) -> Result<f64> {
    exps.require_critical()?;
    let (p, q) = (exps.p, exps.q);
    let ratio = gamma((q + 1.0) / 2.0) / gamma((q + 2.0) / 2.0);
    Ok(2f64.powf(p / 2.0) / PI.powf(p / (2.0 * q)) * ratio.powf(p / q))
}

/// `((1/2π)∫_0^{2π}(1+cos θ)^{q/2} dθ)^{p/q}` on `nodes` equispaced points.
pub fn a_p_quadrature(exps: &ExponentTriple, nodes: usize) -> Result<f64> {
    exps.require_critical()?;
    if nodes < 16 {
        return Err(Error::domain(format!("need at least 16 theta nodes, got {nodes}")));
    }
    let q = exps.q;
    let mean = periodic_mean(nodes, |th| (1.0 + th.cos()).max(0.0).powf(q / 2.0));
    Ok(mean.powf(exps.p / q))
}

/// `φ_q(a) = (1/2π)∫_0^{2π}(1 + a cos θ)^{q/2} dθ` for `0 ≤ a ≤ 1`.
pub fn phi_q(a: f64, q: f64) -> Result<f64> {
    phi_q_with(a, q, THETA_NODES)
}

pub fn phi_q_with(a: f64, q: f64, nodes: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain(format!("phi_q needs 0 <= a <= 1, got {a}")));
    }
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::domain(format!("phi_q needs a finite positive q, got {q}")));
    }
    Ok(periodic_mean(nodes, |th| (1.0 + a * th.cos()).max(0.0).powf(q / 2.0)))
}

/// `(1/2π)∫_0^{2π}|e^{iθ}z1 + e^{-iθ}z2|^q dθ` by direct quadrature.
pub fn cosine_average(z1: Complex64, z2: Complex64, q: f64) -> f64 {
    periodic_mean(THETA_NODES, |th| (Complex64::from_polar(1.0, th) * z1 + Complex64::from_polar(1.0, -th) * z2).norm().powf(q))
}

/// Right side of the cosine-average identity:
/// `(|z1|²+|z2|²)^{q/2} φ_q(2|z1||z2| / (|z1|²+|z2|²))`.
pub fn cosine_average_reduced(z1: Complex64, z2: Complex64, q: f64) -> Result<f64> {
    let s = z1.norm_sqr() + z2.norm_sqr();
    if s == 0.0 {
        return Ok(0.0);
    }
    let a = (2.0 * z1.norm() * z2.norm() / s).min(1.0);
    Ok(s.powf(q / 2.0) * phi_q(a, q)?)
}
