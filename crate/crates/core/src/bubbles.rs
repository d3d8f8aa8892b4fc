//! Concentration families and the homogenized norms they converge to.
//!
//! A profile `χ` is placed at frequency `+1` (single bubble) or at the
//! conjugate pair `±1` (two bubbles) at scale `ε`. Their Airy quotients are
//! computed either directly, by evaluating `Ψ_γ` of the concentrated profile,
//! or through the change of variables `x → x/ε − 3t/ε²`, `t → t/ε²`, which
//! turns the two-bubble field into `2 Re(e^{i(x/ε − 2t/ε²)} T_{γ,ε}χ)` on an
//! `ε`-independent window. The substituted path is the default; the direct
//! path evaluates the same discrete sums in the original variables.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{a_p_closed_form, phi_q};
use crate::domain::{ExponentTriple, FreqGrid, FreqProfile, SpaceTimeField, SpaceTimeGrid};
use crate::error::{Error, Result};
use crate::norms::{mixed_norm, mixed_norm_pow, mixed_norm_pow_values};
use crate::propagators::{extension_at_points, interpolate, Extension, ExtensionPlan};
use crate::quad::pairwise_sum;

/// Default θ-node count for the homogenized norm.
pub const HOMOGENIZATION_NODES: usize = 256;

/// Column header of [`bubble_sweep`] tables.
pub const SWEEP_HEADER: [&str; 7] =
    ["eps", "quotient_two", "quotient_one", "target_two", "target_one", "rel_err_two", "rel_err_one"];

/// Closed interval spanned by the nonzero samples of `chi`.
fn support(chi: &FreqProfile) -> Option<(f64, f64)> {
    let nodes = chi.grid.nodes();
    let first = chi.samples.iter().position(|z| z.norm_sqr() > 0.0)?;
    let last = chi.samples.iter().rposition(|z| z.norm_sqr() > 0.0)?;
    Some((nodes[first], nodes[last]))
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("eps must be positive, got {eps}")))
    }
}

fn check_inside(lo: f64, hi: f64, grid: &FreqGrid) -> Result<()> {
    let slack = 1e-12 * grid.xi_max.abs().max(grid.xi_min.abs());
    if lo < grid.xi_min - slack || hi > grid.xi_max + slack {
        return Err(Error::WindowOverflow(format!(
            "bubble support [{lo}, {hi}] exceeds [{}, {}]",
            grid.xi_min, grid.xi_max
        )));
    }
    Ok(())
}

/// `χ̂_ε(ξ) = χ̂((ξ−1)/ε) + conj χ̂(−(ξ+1)/ε)` sampled on `out_grid`.
pub fn two_bubble(chi: &FreqProfile, eps: f64, out_grid: &FreqGrid) -> Result<FreqProfile> {
    check_eps(eps)?;
    if let Some((a, b)) = support(chi) {
        // Right bubble covers [1+εa, 1+εb], left bubble [-1-εb, -1-εa].
        if -1.0 - eps * a >= 1.0 + eps * a {
            return Err(Error::SupportOverlap(format!(
                "bubbles at +-1 overlap for eps = {eps} and support [{a}, {b}]"
            )));
        }
        check_inside(1.0 + eps * a, 1.0 + eps * b, out_grid)?;
        check_inside(-1.0 - eps * b, -1.0 - eps * a, out_grid)?;
    }
    FreqProfile::from_fn(*out_grid, |xi| interpolate(chi, (xi - 1.0) / eps) + interpolate(chi, -(xi + 1.0) / eps).conj())
}

/// `χ̂_ε(ξ) = χ̂((ξ−1)/ε)` sampled on `out_grid`.
pub fn single_bubble(chi: &FreqProfile, eps: f64, out_grid: &FreqGrid) -> Result<FreqProfile> {
    check_eps(eps)?;
    if let Some((a, b)) = support(chi) {
        check_inside(1.0 + eps * a, 1.0 + eps * b, out_grid)?;
    }
    FreqProfile::from_fn(*out_grid, |xi| interpolate(chi, (xi - 1.0) / eps))
}

/// Symmetric window around `±1` whose nodes are exactly `±1 + ε η_j` for the
/// nodes `η_j` of `chi`'s grid (requires `chi`'s window to contain 0 on a node).
pub fn aligned_grid(chi: &FreqGrid, eps: f64) -> Result<FreqGrid> {
    check_eps(eps)?;
    let half = chi.xi_min.abs().max(chi.xi_max.abs());
    let step = eps * chi.step();
    let reach = 1.0 + eps * half;
    let n_half = (reach / step).round();
    if ((reach / step) - n_half).abs() > 1e-9 * n_half || (1.0 / step - (1.0 / step).round()).abs() > 1e-9 / step {
        return Err(Error::domain(format!("eps * step = {step} does not divide 1 and the window")));
    }
    FreqGrid::symmetric(n_half * step, 2 * n_half as usize + 1)
}

/// `(Σ_t w_t ((1/2π)Σ_θ Σ_x w_x |2 Re(e^{iθ}F)|^q)^{p/q})^{1/p}`.
pub fn homogenized_mixed_norm(f: &SpaceTimeField, exps: &ExponentTriple, theta_nodes: usize) -> Result<f64> {
    exps.require_critical()?;
    if theta_nodes < 1 {
        return Err(Error::domain("need at least one theta node"));
    }
    let (p, q) = (exps.p, exps.q);
    let g = f.grid;
    let wx = g.x_weights();
    let h = std::f64::consts::TAU / theta_nodes as f64;
    let rotations: Vec<Complex64> = (0..theta_nodes).map(|k| Complex64::from_polar(1.0, k as f64 * h)).collect();
    let rows: Vec<f64> = f
        .rows()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|row| {
            let per_theta: Vec<f64> = rotations
                .iter()
                .map(|r| {
                    let terms: Vec<f64> = row.iter().zip(&wx).map(|(z, w)| w * (2.0 * (r * z).re).abs().powf(q)).collect();
                    pairwise_sum(&terms)
                })
                .collect();
            pairwise_sum(&per_theta) / theta_nodes as f64
        })
        .collect();
    let terms: Vec<f64> = g.t_weights().iter().zip(&rows).map(|(w, a)| w * a.powf(p / q)).collect();
    Ok(pairwise_sum(&terms).powf(1.0 / p))
}

/// `(2^{q/2} φ_q(1))^{1/q} ‖F‖_{p,q}`, the closed form of the homogenized norm.
pub fn homogenized_closed_form(f: &SpaceTimeField, exps: &ExponentTriple) -> Result<f64> {
    exps.require_critical()?;
    let q = exps.q;
    Ok((2f64.powf(q / 2.0) * phi_q(1.0, q)?).powf(1.0 / q) * mixed_norm(f, exps.p, q)?)
}

/// Samples of `2 Re(e^{i(x/ε − 2t/ε²)} F(t, x))`.
pub fn carrier_values(f: &SpaceTimeField, eps: f64) -> Vec<Complex64> {
    let g = f.grid;
    let xs = g.x_nodes();
    let ts = g.t_nodes();
    f.rows()
        .zip(&ts)
        .flat_map(|(row, &t)| {
            let xs = &xs;
            row.iter().zip(xs.iter()).map(move |(z, &x)| {
                let c = Complex64::from_polar(1.0, x / eps - 2.0 * t / (eps * eps));
                Complex64::new(2.0 * (c * z).re, 0.0)
            })
        })
        .collect()
}

/// `‖2 Re(e^{i(x/ε − 2t/ε²)} F)‖_{p,q}` on `F`'s grid, which must resolve the
/// carrier `e^{ix/ε}`.
pub fn oscillatory_mixed_norm(f: &SpaceTimeField, eps: f64, p: f64, q: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(mixed_norm_pow_values(&f.grid, &carrier_values(f, eps), p, q)?.powf(1.0 / p))
}

/// Which evaluation route a bubble quotient uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BubblePath {
    #[default]
    Substituted,
    Direct,
}

impl std::str::FromStr for BubblePath {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "substituted" => Ok(BubblePath::Substituted),
            "direct" => Ok(BubblePath::Direct),
            other => Err(format!("unknown bubble path '{other}'")),
        }
    }
}

fn chi_mass(chi: &FreqProfile) -> Result<f64> {
    let m = chi.l2_mass();
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::domain("bubble profile must be nonzero"))
    }
}

/// Two-bubble and single-bubble Airy quotients at scale `eps`. `grid` is the
/// window in the rescaled variables.
pub fn bubble_quotients(
    chi: &FreqProfile,
    exps: &ExponentTriple,
    eps: f64,
    grid: &SpaceTimeGrid,
    path: BubblePath,
) -> Result<(f64, f64)> {
    match path {
        BubblePath::Substituted => substituted_quotients(chi, exps, eps, grid),
        BubblePath::Direct => direct_quotients(chi, exps, eps, grid),
    }
}

fn substituted_quotients(chi: &FreqProfile, exps: &ExponentTriple, eps: f64, grid: &SpaceTimeGrid) -> Result<(f64, f64)> {
    check_eps(eps)?;
    let mass = chi_mass(chi)?;
    let p = exps.p;
    let t = ExtensionPlan::new(Extension::Approx { gamma: exps.gamma, delta: eps }, chi.grid, *grid)?.field(chi)?;
    let one = mixed_norm_pow(&t, p, exps.q)? / mass.powf(p / 2.0);
    let two = mixed_norm_pow_values(grid, &carrier_values(&t, eps), p, exps.q)? / (2.0 * mass).powf(p / 2.0);
    Ok((two, one))
}

fn direct_quotients(chi: &FreqProfile, exps: &ExponentTriple, eps: f64, grid: &SpaceTimeGrid) -> Result<(f64, f64)> {
    let out = aligned_grid(&chi.grid, eps)?;
    let (p, q) = (exps.p, exps.q);
    let jacobian = eps.powf(-p / q - 2.0);
    let points: Vec<(f64, f64)> = grid
        .t_nodes()
        .iter()
        .flat_map(|&t| grid.x_nodes().into_iter().map(move |x| (t / (eps * eps), x / eps - 3.0 * t / (eps * eps))))
        .collect();
    let airy = Extension::Airy { gamma: exps.gamma };
    let quotient = |u: FreqProfile| -> Result<f64> {
        let values = extension_at_points(airy, &u, &points)?;
        Ok(jacobian * mixed_norm_pow_values(grid, &values, p, q)? / u.l2_mass().powf(p / 2.0))
    };
    let two = quotient(two_bubble(chi, eps, &out)?)?;
    let one = quotient(single_bubble(chi, eps, &out)?)?;
    Ok((two, one))
}

/// One row of a bubble sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BubbleRow {
    pub eps: f64,
    pub quotient_two: f64,
    pub quotient_one: f64,
    pub target_two: f64,
    pub target_one: f64,
    pub rel_err_two: f64,
    pub rel_err_one: f64,
}

/// Two- and single-bubble quotients for every `eps`, against the targets
/// `a_p · S(χ)` and `S(χ)` with `S` the Schrödinger quotient on the same
/// rescaled window.
pub fn bubble_sweep(
    chi: &FreqProfile,
    exps: &ExponentTriple,
    eps_list: &[f64],
    grid: &SpaceTimeGrid,
    path: BubblePath,
) -> Result<Vec<BubbleRow>> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("eps list must be strictly decreasing"));
    }
    if eps_list.is_empty() {
        return Ok(Vec::new());
    }
    let a_p = a_p_closed_form(exps)?;
    let target_one = crate::norms::schrodinger_quotient(chi, exps, grid)?;
    let target_two = a_p * target_one;
    eps_list
        .par_iter()
        .map(|&eps| {
            let (quotient_two, quotient_one) = bubble_quotients(chi, exps, eps, grid, path)?;
            Ok(BubbleRow {
                eps,
                quotient_two,
                quotient_one,
                target_two,
                target_one,
                rel_err_two: (quotient_two - target_two).abs() / target_two,
                rel_err_one: (quotient_one - target_one).abs() / target_one,
            })
        })
        .collect()
}

/// Writes sweep rows as CSV with the [`SWEEP_HEADER`] columns.
pub fn write_sweep_csv<W: Write>(rows: &[BubbleRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in rows {
        out.write_record(
            [r.eps, r.quotient_two, r.quotient_one, r.target_two, r.target_one, r.rel_err_two, r.rel_err_one]
                .iter()
                .map(|v| crate::domain::fmt_f64(*v)),
        )?;
    }
    out.flush()?;
    Ok(())
}
