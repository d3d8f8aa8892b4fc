//! Mixed Lebesgue norms `L^p_t L^q_x` on a space-time grid and the
//! variational quotients built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{ExponentTriple, FreqProfile, SpaceTimeField, SpaceTimeGrid};
use crate::error::{Error, Result};
use crate::propagators::{Extension, ExtensionPlan};
use crate::quad::pairwise_sum;

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p.is_finite() && p > 0.0 && q.is_finite() && q > 0.0) {
        return Err(Error::domain(format!("mixed norm needs finite positive exponents, got p = {p}, q = {q}")));
    }
    Ok(())
}

/// Inner `Σ_x w_x |F(t_i, x)|^q` for every time row.
pub(crate) fn row_integrals(grid: &SpaceTimeGrid, values: &[Complex64], q: f64) -> Vec<f64> {
    let wx = grid.x_weights();
    values
        .chunks(grid.nx)
        .map(|row| {
            let terms: Vec<f64> = row.iter().zip(&wx).map(|(z, w)| w * z.norm().powf(q)).collect();
            pairwise_sum(&terms)
        })
        .collect()
}

/// `Σ_t w_t A_t^{p/q}` given the row integrals `A_t`.
pub(crate) fn outer_sum(grid: &SpaceTimeGrid, rows: &[f64], p: f64, q: f64) -> f64 {
    let terms: Vec<f64> = grid.t_weights().iter().zip(rows).map(|(w, a)| w * a.powf(p / q)).collect();
    pairwise_sum(&terms)
}

/// `‖F‖^p_{L^p_t L^q_x}` on raw row-major values.
pub fn mixed_norm_pow_values(grid: &SpaceTimeGrid, values: &[Complex64], p: f64, q: f64) -> Result<f64> {
    check_exponents(p, q)?;
    if values.len() != grid.len() {
        return Err(Error::GridMismatch(format!("{} values for a grid of {}", values.len(), grid.len())));
    }
    Ok(outer_sum(grid, &row_integrals(grid, values, q), p, q))
}

/// `‖F‖^p_{L^p_t L^q_x}`, the quantity that enters the quotients.
pub fn mixed_norm_pow(f: &SpaceTimeField, p: f64, q: f64) -> Result<f64> {
    mixed_norm_pow_values(&f.grid, f.values(), p, q)
}

/// `( Σ_t w_t ( Σ_x w_x |F|^q )^{p/q} )^{1/p}`.
pub fn mixed_norm(f: &SpaceTimeField, p: f64, q: f64) -> Result<f64> {
    Ok(mixed_norm_pow(f, p, q)?.powf(1.0 / p))
}

fn require_mass(u: &FreqProfile) -> Result<f64> {
    let m = u.l2_mass();
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::domain("quotient of the zero profile is undefined"))
    }
}

/// `‖E u‖^p_{p,q} / ‖u‖^p_2` for any extension operator `E`.
pub fn extension_quotient(u: &FreqProfile, extension: Extension, exps: &ExponentTriple, grid: &SpaceTimeGrid) -> Result<f64> {
    let mass = require_mass(u)?;
    let field = ExtensionPlan::new(extension, u.grid, *grid)?.field(u)?;
    Ok(mixed_norm_pow(&field, exps.p, exps.q)? / mass.powf(exps.p / 2.0))
}

/// Airy quotient `‖Ψ_γ u‖^p_{L^p_t L^q_x} / ‖u‖^p_{L²}`.
pub fn airy_quotient(u: &FreqProfile, exps: &ExponentTriple, grid: &SpaceTimeGrid) -> Result<f64> {
    extension_quotient(u, Extension::Airy { gamma: exps.gamma }, exps, grid)
}

/// Schrödinger quotient `‖e^{-3it∂²}u‖^p_{L^p_t L^q_x} / ‖u‖^p_{L²}`.
pub fn schrodinger_quotient(u: &FreqProfile, exps: &ExponentTriple, grid: &SpaceTimeGrid) -> Result<f64> {
    extension_quotient(u, Extension::Schrodinger, exps, grid)
}

/// Result of the adaptive window search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveQuotient {
    pub quotient: f64,
    pub grid: SpaceTimeGrid,
    pub doublings: usize,
    /// Share of `‖F‖^p` carried by the outermost shell at the final window.
    pub shell_fraction: f64,
    pub converged: bool,
}

/// Doubles `[t_min, t_max] x [x_min, x_max]` about its center, keeping the
/// steps fixed, until the shell added by the last doubling carries less than
/// `tol` of `‖F‖^p`, or `max_doublings` is reached.
pub fn adaptive_quotient(
    u: &FreqProfile,
    extension: Extension,
    exps: &ExponentTriple,
    start: &SpaceTimeGrid,
    tol: f64,
    max_doublings: usize,
) -> Result<AdaptiveQuotient> {
    let mass = require_mass(u)?;
    let mut grid = *start;
    let mut prev = mixed_norm_pow(&ExtensionPlan::new(extension, u.grid, grid)?.field(u)?, exps.p, exps.q)?;
    let mut doublings = 0;
    let mut shell = f64::INFINITY;
    while doublings < max_doublings {
        grid = double_window(&grid);
        let cur = mixed_norm_pow(&ExtensionPlan::new(extension, u.grid, grid)?.field(u)?, exps.p, exps.q)?;
        doublings += 1;
        shell = if cur > 0.0 { (cur - prev).abs() / cur } else { 0.0 };
        prev = cur;
        if shell < tol {
            break;
        }
    }
    Ok(AdaptiveQuotient {
        quotient: prev / mass.powf(exps.p / 2.0),
        grid,
        doublings,
        shell_fraction: shell,
        converged: shell < tol,
    })
}

/// Window twice as wide about the same center with the same steps.
pub fn double_window(g: &SpaceTimeGrid) -> SpaceTimeGrid {
    let (tc, th) = (0.5 * (g.t_min + g.t_max), 0.5 * (g.t_max - g.t_min));
    let (xc, xh) = (0.5 * (g.x_min + g.x_max), 0.5 * (g.x_max - g.x_min));
    SpaceTimeGrid {
        t_min: tc - 2.0 * th,
        t_max: tc + 2.0 * th,
        nt: 2 * g.nt - 1,
        x_min: xc - 2.0 * xh,
        x_max: xc + 2.0 * xh,
        nx: 2 * g.nx - 1,
        rule: g.rule,
    }
}

/// Both sides of `‖F+G‖^β ≤ ‖F‖^β + ‖G‖^β`, `β = min(p, q, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub beta: f64,
}

impl TriangleCheck {
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

pub fn mixed_triangle_check(f: &SpaceTimeField, g: &SpaceTimeField, p: f64, q: f64) -> Result<TriangleCheck> {
    f.require_same_grid(g)?;
    let beta = p.min(q).min(1.0);
    let sum = f.add(g)?;
    let nf = |h: &SpaceTimeField| -> Result<f64> { Ok(mixed_norm(h, p, q)?.powf(beta)) };
    Ok(TriangleCheck { lhs: nf(&sum)?, rhs: nf(f)? + nf(g)?, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::FreqGrid;
    use crate::quad::QuadRule;

    #[test]
    fn unit_constant_on_unit_box() {
        let g = SpaceTimeGrid::new((0.0, 1.0, 11), (0.0, 1.0, 21), QuadRule::Trapezoid).unwrap();
        let f = SpaceTimeField::from_fn(g, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        for (p, q) in [(6.0, 6.0), (8.0, 4.0), (0.5, 3.0)] {
            assert!((mixed_norm(&f, p, q).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn separable_fields_factor() {
        let g = SpaceTimeGrid::new((-1.0, 2.0, 31), (-3.0, 3.0, 41), QuadRule::Simpson).unwrap();
        let f = |t: f64| 1.0 + t * t;
        let h = |x: f64| (-x * x).exp();
        let field = SpaceTimeField::from_fn(g, |t, x| Complex64::new(f(t) * h(x), 0.0)).unwrap();
        let (p, q) = (8.0, 4.0);
        let ft: f64 = g.t_weights().iter().zip(g.t_nodes()).map(|(w, t)| w * f(t).powf(p)).sum::<f64>().powf(1.0 / p);
        let hx: f64 = g.x_weights().iter().zip(g.x_nodes()).map(|(w, x)| w * h(x).powf(q)).sum::<f64>().powf(1.0 / q);
        let n = mixed_norm(&field, p, q).unwrap();
        assert!((n - ft * hx).abs() < 1e-12 * n);
    }

    #[test]
    fn homogeneity_and_equal_exponents() {
        let g = SpaceTimeGrid::centered(1.0, 9, 2.0, 13).unwrap();
        let f = SpaceTimeField::from_fn(g, |t, x| Complex64::new(t.sin() + x, t * x)).unwrap();
        let c = Complex64::new(-0.3, 1.7);
        let a = mixed_norm(&f.scaled(c), 6.0, 4.0).unwrap();
        let b = c.norm() * mixed_norm(&f, 6.0, 4.0).unwrap();
        assert!((a - b).abs() < 1e-12 * b);

        // p = q is the flat L^p norm with product weights.
        let wt = g.t_weights();
        let wx = g.x_weights();
        let mut flat = 0.0;
        for i in 0..g.nt {
            for k in 0..g.nx {
                flat += wt[i] * wx[k] * f.at(i, k).norm().powi(5);
            }
        }
        let n = mixed_norm(&f, 5.0, 5.0).unwrap();
        assert!((n - flat.powf(0.2)).abs() < 1e-12 * n);
    }

    #[test]
    fn exponent_domain() {
        let g = SpaceTimeGrid::centered(1.0, 3, 1.0, 3).unwrap();
        let f = SpaceTimeField::zeros(g);
        assert!(matches!(mixed_norm(&f, 0.0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(mixed_norm(&f, 2.0, -1.0), Err(Error::Domain(_))));
        assert_eq!(mixed_norm(&f, 2.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn quotient_rejects_zero_profile() {
        let u = FreqProfile::zeros(FreqGrid::symmetric(2.0, 21).unwrap());
        let e = ExponentTriple::critical(6.0).unwrap();
        let g = SpaceTimeGrid::centered(1.0, 5, 1.0, 5).unwrap();
        assert!(matches!(airy_quotient(&u, &e, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn quotients_are_scale_and_phase_invariant() {
        let fg = FreqGrid::symmetric(4.0, 81).unwrap();
        let u = FreqProfile::gaussian(fg, 0.5, 1.0).unwrap();
        let e = ExponentTriple::critical(6.0).unwrap();
        let g = SpaceTimeGrid::centered(1.0, 21, 8.0, 41).unwrap();
        let base_a = airy_quotient(&u, &e, &g).unwrap();
        let base_s = schrodinger_quotient(&u, &e, &g).unwrap();
        for c in [Complex64::new(3.0, 0.0), Complex64::from_polar(1.0, 0.7), Complex64::new(-0.01, 0.02)] {
            let v = u.scaled(c);
            assert!((airy_quotient(&v, &e, &g).unwrap() - base_a).abs() < 1e-12 * base_a);
            assert!((schrodinger_quotient(&v, &e, &g).unwrap() - base_s).abs() < 1e-12 * base_s);
        }
    }

    #[test]
    fn triangle_with_zero() {
        let g = SpaceTimeGrid::centered(1.0, 5, 1.0, 7).unwrap();
        let f = SpaceTimeField::from_fn(g, |t, x| Complex64::new(t + 2.0, x)).unwrap();
        let z = SpaceTimeField::zeros(g);
        let c = mixed_triangle_check(&f, &z, 0.7, 0.5).unwrap();
        assert_eq!(c.lhs, c.rhs);
        assert_eq!(c.beta, 0.5);
        let other = SpaceTimeField::zeros(SpaceTimeGrid::centered(1.0, 5, 1.0, 9).unwrap());
        assert!(matches!(mixed_triangle_check(&f, &other, 6.0, 6.0), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn window_doubling_keeps_steps() {
        let g = SpaceTimeGrid::new((-1.0, 3.0, 9), (0.0, 2.0, 5), QuadRule::Trapezoid).unwrap();
        let d = double_window(&g);
        assert!((d.dt() - g.dt()).abs() < 1e-15 && (d.dx() - g.dx()).abs() < 1e-15);
        assert_eq!((d.t_min, d.t_max, d.x_min, d.x_max), (-3.0, 5.0, -1.0, 3.0));
    }
}
