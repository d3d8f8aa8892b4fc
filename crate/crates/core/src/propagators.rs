//! Fourier extension operators on a truncated frequency window.
//!
//! Every operator here has the form
//!
//! ```text
//! F(t, x) = (2π)^{-1/2} Σ_j w_j m(ξ_j) exp(i(x ξ_j + t φ(ξ_j))) û(ξ_j)
//! ```
//!
//! with trapezoid weights `w_j`, an amplitude multiplier `m` and a
//! dispersion relation `φ`:
//!
//! | operator       | `m(ξ)`        | `φ(ξ)`          |
//! |----------------|---------------|-----------------|
//! | Airy           | `|ξ|^γ`       | `ξ³`            |
//! | Schrödinger    | `1`           | `3ξ²`           |
//! | approximate    | `|1+δξ|^γ`    | `3ξ² + δξ³`     |
//!
//! Fields are assembled row by row in `t`. When the `x`-grid step and the
//! frequency step satisfy `dx · h = 2π / M` for an integer `M`, each row is a
//! length-`M` DFT and is evaluated by FFT; otherwise a direct phase sum is
//! used. Both paths compute the same quantity.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::domain::{FreqGrid, FreqProfile, SpaceTimeField, SpaceTimeGrid};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest FFT length the fast path will use.
const MAX_FFT_LEN: usize = 1 << 20;
/// Largest precomputed `exp(i x ξ)` table (entries).
const MAX_TABLE: usize = 1 << 24;

/// Which extension operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Extension {
    /// `|D_x|^γ e^{-t∂³}`.
    Airy { gamma: f64 },
    /// `e^{-3it∂²}`.
    Schrodinger,
    /// The approximate operators `T_{γ,δ}`.
    Approx { gamma: f64, delta: f64 },
}

impl Extension {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Extension::Airy { gamma } | Extension::Approx { gamma, .. } if !(gamma > -0.5) => {
                Err(Error::domain(format!("smoothing order must exceed -1/2, got {gamma}")))
            }
            Extension::Approx { delta, .. } if !delta.is_finite() => {
                Err(Error::domain(format!("delta must be finite, got {delta}")))
            }
            _ => Ok(()),
        }
    }

    /// Amplitude multiplier `m(ξ)`.
    pub fn multiplier(&self, xi: f64) -> f64 {
        match *self {
            Extension::Airy { gamma } => abs_pow(xi, gamma),
            Extension::Schrodinger => 1.0,
            Extension::Approx { gamma, delta } => abs_pow(1.0 + delta * xi, gamma),
        }
    }

    /// Time phase `φ(ξ)`.
    pub fn phase(&self, xi: f64) -> f64 {
        match *self {
            Extension::Airy { .. } => xi * xi * xi,
            Extension::Schrodinger => 3.0 * xi * xi,
            Extension::Approx { delta, .. } => xi * xi * (3.0 + delta * xi),
        }
    }

    /// Nodes where `1 + δξ < 0` and the profile is nonzero.
    pub fn support_violations(&self, u: &FreqProfile) -> Vec<f64> {
        match *self {
            Extension::Approx { delta, .. } => u
                .grid
                .nodes()
                .into_iter()
                .zip(&u.samples)
                .filter(|(xi, z)| 1.0 + delta * xi < 0.0 && z.norm_sqr() > 0.0)
                .map(|(xi, _)| xi)
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// `|s|^γ` with `0^γ = 0` for `γ > 0`, `0^0 = 1`, and the node `s = 0` dropped
/// (weight zero) for `γ < 0`.
fn abs_pow(s: f64, gamma: f64) -> f64 {
    if s == 0.0 {
        if gamma == 0.0 {
            1.0
        } else {
            0.0
        }
    } else if gamma == 0.0 {
        1.0
    } else {
        s.abs().powf(gamma)
    }
}

fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

enum RowKernel {
    Table(Vec<Complex64>),
    Fft(FftRow),
}

struct FftRow {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `exp(i x_0 j h)` for each frequency node.
    pre: Vec<Complex64>,
    /// `exp(i (x_0 + k dx) ξ_0)` for each x-node.
    post: Vec<Complex64>,
}

/// Reusable evaluator for one operator on one pair of grids. Applying it to a
/// profile gives the field; the adjoint maps a field-shaped array back to
/// frequency samples and is used for gradients.
pub struct ExtensionPlan {
    pub extension: Extension,
    pub freq: FreqGrid,
    pub grid: SpaceTimeGrid,
    nodes: Vec<f64>,
    /// `w_j m(ξ_j) / sqrt(2π)`.
    amp: Vec<f64>,
    phase: Vec<f64>,
    ts: Vec<f64>,
    kernel: RowKernel,
}

impl ExtensionPlan {
    pub fn new(extension: Extension, freq: FreqGrid, grid: SpaceTimeGrid) -> Result<Self> {
        extension.validate()?;
        let nodes = freq.nodes();
        let weights = freq.weights();
        let norm = 1.0 / (2.0 * PI).sqrt();
        let amp = nodes.iter().zip(&weights).map(|(&xi, w)| w * extension.multiplier(xi) * norm).collect();
        let phase = nodes.iter().map(|&xi| extension.phase(xi)).collect();
        let kernel = Self::choose_kernel(&freq, &grid, &nodes);
        Ok(Self { extension, freq, grid, nodes, amp, phase, ts: grid.t_nodes(), kernel })
    }

    /// Same plan but always using the direct phase sum.
    pub fn new_direct(extension: Extension, freq: FreqGrid, grid: SpaceTimeGrid) -> Result<Self> {
        let mut plan = Self::new(extension, freq, grid)?;
        if !matches!(plan.kernel, RowKernel::Table(_)) {
            plan.kernel = RowKernel::Table(Self::table(&plan.nodes, &grid.x_nodes()));
        }
        Ok(plan)
    }

    pub fn uses_fft(&self) -> bool {
        matches!(self.kernel, RowKernel::Fft(_))
    }

    fn choose_kernel(freq: &FreqGrid, grid: &SpaceTimeGrid, nodes: &[f64]) -> RowKernel {
        let h = freq.step();
        let dx = grid.dx();
        let m = 2.0 * PI / (dx * h);
        let len = m.round();
        let direct_cost = (freq.n * grid.nx) as f64;
        if (m - len).abs() <= 1e-9 * m && len >= 1.0 && len <= MAX_FFT_LEN as f64 {
            let len = len as usize;
            let fft_cost = len as f64 * (len as f64).log2().max(1.0) * 2.0 + (freq.n + grid.nx) as f64;
            if fft_cost < direct_cost {
                let mut planner = FftPlanner::new();
                let x0 = grid.x_min;
                let xi0 = freq.xi_min;
                let pre = (0..freq.n).map(|j| cis(x0 * j as f64 * h)).collect();
                let post = (0..grid.nx).map(|k| cis((x0 + k as f64 * dx) * xi0)).collect();
                return RowKernel::Fft(FftRow {
                    len,
                    forward: planner.plan_fft_forward(len),
                    inverse: planner.plan_fft_inverse(len),
                    pre,
                    post,
                });
            }
        }
        if nodes.len() * grid.nx <= MAX_TABLE {
            RowKernel::Table(Self::table(nodes, &grid.x_nodes()))
        } else {
            RowKernel::Table(Vec::new())
        }
    }

    fn table(nodes: &[f64], xs: &[f64]) -> Vec<Complex64> {
        nodes.iter().flat_map(|&xi| xs.iter().map(move |&x| cis(x * xi))).collect()
    }

    /// Field of the sample vector `samples` (values of `û` on `self.freq`).
    pub fn apply(&self, samples: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(samples.len(), self.nodes.len(), "sample count does not match the plan");
        let active: Vec<usize> = (0..samples.len()).filter(|&j| samples[j] != ZERO && self.amp[j] != 0.0).collect();
        let nx = self.grid.nx;
        let xs = self.grid.x_nodes();
        let rows: Vec<Vec<Complex64>> = self
            .ts
            .par_iter()
            .map(|&t| {
                let coeffs: Vec<(usize, Complex64)> =
                    active.iter().map(|&j| (j, samples[j] * self.amp[j] * cis(t * self.phase[j]))).collect();
                self.synthesize_row(&coeffs, &xs, nx)
            })
            .collect();
        rows.concat()
    }

    fn synthesize_row(&self, coeffs: &[(usize, Complex64)], xs: &[f64], nx: usize) -> Vec<Complex64> {
        let mut row = vec![ZERO; nx];
        match &self.kernel {
            RowKernel::Table(table) if !table.is_empty() => {
                for &(j, a) in coeffs {
                    let b = &table[j * nx..(j + 1) * nx];
                    for (r, e) in row.iter_mut().zip(b) {
                        *r += a * e;
                    }
                }
            }
            RowKernel::Table(_) => {
                for &(j, a) in coeffs {
                    let xi = self.nodes[j];
                    for (r, &x) in row.iter_mut().zip(xs) {
                        *r += a * cis(x * xi);
                    }
                }
            }
            RowKernel::Fft(f) => {
                let mut buf = vec![ZERO; f.len];
                for &(j, a) in coeffs {
                    buf[j % f.len] += a * f.pre[j];
                }
                f.inverse.process(&mut buf);
                for (k, r) in row.iter_mut().enumerate() {
                    *r = buf[k % f.len] * f.post[k];
                }
            }
        }
        row
    }

    /// Adjoint of [`apply`](Self::apply) with respect to the plain Euclidean
    /// inner products on sample and field arrays:
    /// `g_j = Σ_{t,x} H(t,x) · conj(K(t,x; j))`.
    pub fn adjoint(&self, field: &[Complex64]) -> Vec<Complex64> {
        let nx = self.grid.nx;
        assert_eq!(field.len(), self.ts.len() * nx, "field size does not match the plan");
        let n = self.nodes.len();
        let partial: Vec<Vec<Complex64>> = self
            .ts
            .par_iter()
            .enumerate()
            .map(|(i, &t)| {
                let h = &field[i * nx..(i + 1) * nx];
                let s = self.analyze_row(h);
                (0..n).map(|j| s[j] * self.amp[j] * cis(-t * self.phase[j])).collect()
            })
            .collect();
        let mut g = vec![ZERO; n];
        for row in &partial {
            for (gj, v) in g.iter_mut().zip(row) {
                *gj += v;
            }
        }
        g
    }

    /// `S_j = Σ_k h_k exp(-i x_k ξ_j)`.
    fn analyze_row(&self, h: &[Complex64]) -> Vec<Complex64> {
        let n = self.nodes.len();
        let nx = h.len();
        match &self.kernel {
            RowKernel::Table(table) if !table.is_empty() => (0..n)
                .map(|j| {
                    let b = &table[j * nx..(j + 1) * nx];
                    h.iter().zip(b).fold(ZERO, |acc, (v, e)| acc + v * e.conj())
                })
                .collect(),
            RowKernel::Table(_) => {
                let xs = self.grid.x_nodes();
                (0..n)
                    .map(|j| {
                        let xi = self.nodes[j];
                        h.iter().zip(&xs).fold(ZERO, |acc, (v, &x)| acc + v * cis(-x * xi))
                    })
                    .collect()
            }
            RowKernel::Fft(f) => {
                let mut buf = vec![ZERO; f.len];
                for (k, v) in h.iter().enumerate() {
                    buf[k % f.len] += v * f.post[k].conj();
                }
                f.forward.process(&mut buf);
                (0..n).map(|j| buf[j % f.len] * f.pre[j].conj()).collect()
            }
        }
    }

    pub fn field(&self, u: &FreqProfile) -> Result<SpaceTimeField> {
        if u.grid != self.freq {
            return Err(Error::GridMismatch(format!("profile grid {:?} vs plan grid {:?}", u.grid, self.freq)));
        }
        let bad = self.extension.support_violations(u);
        if !bad.is_empty() {
            return Err(Error::SupportViolation { nodes: bad });
        }
        SpaceTimeField::new(self.grid, self.apply(&u.samples))
    }
}

/// Evaluates an extension of `u` at arbitrary `(t, x)` points by the direct
/// phase sum.
pub fn extension_at_points(extension: Extension, u: &FreqProfile, points: &[(f64, f64)]) -> Result<Vec<Complex64>> {
    extension.validate()?;
    let nodes = u.grid.nodes();
    let w = u.grid.weights();
    let norm = 1.0 / (2.0 * PI).sqrt();
    let terms: Vec<(f64, f64, Complex64)> = nodes
        .iter()
        .zip(&w)
        .zip(&u.samples)
        .filter(|(_, z)| **z != ZERO)
        .map(|((&xi, w), z)| (xi, extension.phase(xi), z * (w * extension.multiplier(xi) * norm)))
        .collect();
    Ok(points
        .par_iter()
        .map(|&(t, x)| terms.iter().fold(ZERO, |acc, &(xi, ph, a)| acc + a * cis(x * xi + t * ph)))
        .collect())
}

/// `Ψ_γ[u]` on `grid`: `(2π)^{-1/2} Σ_j w_j |ξ_j|^γ e^{i(tξ_j³ + xξ_j)} û(ξ_j)`.
pub fn airy_extension(u: &FreqProfile, gamma: f64, grid: &SpaceTimeGrid) -> Result<SpaceTimeField> {
    ExtensionPlan::new(Extension::Airy { gamma }, u.grid, *grid)?.field(u)
}

/// `e^{-3it∂²}u` on `grid`.
pub fn schrodinger_extension(u: &FreqProfile, grid: &SpaceTimeGrid) -> Result<SpaceTimeField> {
    ExtensionPlan::new(Extension::Schrodinger, u.grid, *grid)?.field(u)
}

/// `T_{γ,δ}u` on `grid`. Fails with [`Error::SupportViolation`] if `û` is
/// nonzero where `1 + δξ < 0`.
pub fn approx_extension(u: &FreqProfile, gamma: f64, delta: f64, grid: &SpaceTimeGrid) -> Result<SpaceTimeField> {
    ExtensionPlan::new(Extension::Approx { gamma, delta }, u.grid, *grid)?.field(u)
}

/// Zeroes every sample outside the half-open interval `[a, b)`.
pub fn restrict_frequency(u: &FreqProfile, a: f64, b: f64) -> FreqProfile {
    let samples = u
        .grid
        .nodes()
        .iter()
        .zip(&u.samples)
        .map(|(&xi, &z)| if xi >= a && xi < b { z } else { ZERO })
        .collect();
    FreqProfile { grid: u.grid, samples }
}

/// Element `g_{t0,x0,λ0}` of the symmetry group: Airy time flow by `t0`,
/// translation by `x0`, `L²`-normalized dilation by `λ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub t0: f64,
    pub x0: f64,
    pub lambda0: f64,
}

impl SymmetryElement {
    pub fn new(t0: f64, x0: f64, lambda0: f64) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0.is_finite()) || !t0.is_finite() || !x0.is_finite() {
            return Err(Error::domain(format!("invalid symmetry element ({t0}, {x0}, {lambda0})")));
        }
        Ok(Self { t0, x0, lambda0 })
    }

    pub fn identity() -> Self {
        Self { t0: 0.0, x0: 0.0, lambda0: 1.0 }
    }

    /// Frequency grid whose nodes are exactly the images `λ0 ξ_j` of `grid`.
    pub fn dilated_grid(&self, grid: &FreqGrid) -> FreqGrid {
        FreqGrid { xi_min: grid.xi_min * self.lambda0, xi_max: grid.xi_max * self.lambda0, n: grid.n }
    }

    /// The window on which the field of `g u` reproduces the field of `u` on
    /// `grid`, using `Ψ_γ[g u](t, x) = λ0^{1/2+γ} Ψ_γ[u](λ0³ t + t0, λ0 x + x0)`.
    pub fn pullback_window(&self, grid: &SpaceTimeGrid) -> SpaceTimeGrid {
        let l3 = self.lambda0.powi(3);
        SpaceTimeGrid {
            t_min: (grid.t_min - self.t0) / l3,
            t_max: (grid.t_max - self.t0) / l3,
            x_min: (grid.x_min - self.x0) / self.lambda0,
            x_max: (grid.x_max - self.x0) / self.lambda0,
            ..*grid
        }
    }
}

/// Frequency-side action of `g`:
/// `û(ξ) ↦ λ0^{-1/2} e^{i x0 ξ/λ0} e^{i t0 (ξ/λ0)³} û(ξ/λ0)`, sampled on
/// `out_grid`. Values of `û` between nodes are linearly interpolated, which is
/// exact when `out_grid` is [`SymmetryElement::dilated_grid`].
pub fn apply_symmetry(g: &SymmetryElement, u: &FreqProfile, out_grid: &FreqGrid) -> Result<FreqProfile> {
    let lam = g.lambda0;
    // Every nonzero input sample must land inside the output window.
    let slack = 1e-12 * out_grid.xi_max.abs().max(out_grid.xi_min.abs());
    for (xi, z) in u.grid.nodes().iter().zip(&u.samples) {
        if *z != ZERO {
            let image = lam * xi;
            if image < out_grid.xi_min - slack || image > out_grid.xi_max + slack {
                return Err(Error::WindowOverflow(format!(
                    "dilated node {image} lies outside [{}, {}]",
                    out_grid.xi_min, out_grid.xi_max
                )));
            }
        }
    }
    let scale = lam.powf(-0.5);
    let samples = out_grid
        .nodes()
        .iter()
        .map(|&xi| {
            let eta = xi / lam;
            let v = interpolate(u, eta);
            if v == ZERO {
                ZERO
            } else {
                v * scale * cis(g.x0 * eta + g.t0 * eta * eta * eta)
            }
        })
        .collect();
    FreqProfile::new(*out_grid, samples)
}

/// Linear interpolation of the samples; zero outside the window.
pub(crate) fn interpolate(u: &FreqProfile, xi: f64) -> Complex64 {
    let g = &u.grid;
    let h = g.step();
    let pos = (xi - g.xi_min) / h;
    let last = (g.n - 1) as f64;
    let snap = 1e-9;
    if pos < -snap || pos > last + snap {
        return ZERO;
    }
    let nearest = pos.round();
    if (pos - nearest).abs() <= snap {
        return u.samples[nearest.clamp(0.0, last) as usize];
    }
    let j = pos.floor() as usize;
    let frac = pos - j as f64;
    u.samples[j] * (1.0 - frac) + u.samples[j + 1] * frac
}

/// Splits `f = f1 + i f2` with `f1(ξ) = (f(ξ) + conj f(-ξ))/2` and
/// `f2(ξ) = (f(ξ) - conj f(-ξ))/(2i)`; both parts are conjugate-symmetric, so
/// their Airy fields are real-valued.
pub fn symmetrize_real(u: &FreqProfile) -> Result<(FreqProfile, FreqProfile)> {
    u.grid.require_symmetric()?;
    let n = u.samples.len();
    let i2 = Complex64::new(0.0, 2.0);
    let mut f1 = Vec::with_capacity(n);
    let mut f2 = Vec::with_capacity(n);
    for j in 0..n {
        let a = u.samples[j];
        let b = u.samples[n - 1 - j].conj();
        f1.push((a + b) * 0.5);
        f2.push((a - b) / i2);
    }
    Ok((FreqProfile { grid: u.grid, samples: f1 }, FreqProfile { grid: u.grid, samples: f2 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_profile(grid: FreqGrid, seed: u64) -> FreqProfile {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..grid.n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        FreqProfile::new(grid, samples).unwrap()
    }

    #[test]
    fn zero_profile_gives_zero_field() {
        let g = FreqGrid::symmetric(4.0, 65).unwrap();
        let st = SpaceTimeGrid::centered(1.0, 9, 5.0, 17).unwrap();
        let u = FreqProfile::zeros(g);
        assert_eq!(airy_extension(&u, 1.0 / 6.0, &st).unwrap().max_abs(), 0.0);
        assert_eq!(schrodinger_extension(&u, &st).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn gamma_domain() {
        let g = FreqGrid::symmetric(4.0, 65).unwrap();
        let st = SpaceTimeGrid::centered(1.0, 9, 5.0, 17).unwrap();
        let u = FreqProfile::gaussian(g, 0.0, 1.0).unwrap();
        assert!(matches!(airy_extension(&u, -0.5, &st), Err(Error::Domain(_))));
        assert!(airy_extension(&u, -0.25, &st).is_ok());
    }

    #[test]
    fn fft_and_direct_paths_agree() {
        let g = FreqGrid::symmetric(4.0, 129).unwrap();
        let h = g.step();
        let m = 512.0;
        let dx = 2.0 * PI / (m * h);
        let st = SpaceTimeGrid::new((-0.7, 1.3, 11), (-150.0 * dx, 200.0 * dx, 351), crate::QuadRule::Trapezoid).unwrap();
        let u = random_profile(g, 7);
        for ext in [Extension::Airy { gamma: 1.0 / 6.0 }, Extension::Schrodinger] {
            let fast = ExtensionPlan::new(ext, g, st).unwrap();
            assert!(fast.uses_fft());
            let slow = ExtensionPlan::new_direct(ext, g, st).unwrap();
            let a = fast.apply(&u.samples);
            let b = slow.apply(&u.samples);
            let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12 * scale, "{ext:?}: {err}");

            let hfield: Vec<Complex64> = random_profile(FreqGrid::new(0.0, 1.0, st.len()).unwrap(), 9).samples;
            let ga = fast.adjoint(&hfield);
            let gb = slow.adjoint(&hfield);
            let scale = gb.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err = ga.iter().zip(&gb).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-11 * scale, "{ext:?} adjoint: {err}");
        }
    }

    #[test]
    fn adjoint_identity() {
        // <A u, h> = <u, A* h>
        let g = FreqGrid::symmetric(3.0, 41).unwrap();
        let st = SpaceTimeGrid::centered(0.5, 7, 4.0, 13).unwrap();
        let plan = ExtensionPlan::new(Extension::Airy { gamma: 0.2 }, g, st).unwrap();
        let u = random_profile(g, 1);
        let h = random_profile(FreqGrid::new(0.0, 1.0, st.len()).unwrap(), 2).samples;
        let au = plan.apply(&u.samples);
        let lhs: Complex64 = au.iter().zip(&h).map(|(a, b)| a * b.conj()).sum();
        let ah = plan.adjoint(&h);
        let rhs: Complex64 = u.samples.iter().zip(&ah).map(|(a, b)| a * b.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn airy_is_linear() {
        let g = FreqGrid::symmetric(3.0, 61).unwrap();
        let st = SpaceTimeGrid::centered(1.0, 11, 6.0, 21).unwrap();
        let u = random_profile(g, 3);
        let v = random_profile(g, 4);
        let fu = airy_extension(&u, 1.0 / 6.0, &st).unwrap();
        let fv = airy_extension(&v, 1.0 / 6.0, &st).unwrap();
        let fuv = airy_extension(&u.add(&v).unwrap(), 1.0 / 6.0, &st).unwrap();
        let sum = fu.add(&fv).unwrap();
        let err = fuv.sub(&sum).unwrap().max_abs();
        assert!(err < 1e-12 * fuv.max_abs());
    }

    #[test]
    fn conjugate_symmetric_profiles_give_real_airy_fields() {
        let g = FreqGrid::symmetric(3.0, 61).unwrap();
        let st = SpaceTimeGrid::centered(1.0, 11, 6.0, 21).unwrap();
        let (f1, _) = symmetrize_real(&random_profile(g, 5)).unwrap();
        let f = airy_extension(&f1, 1.0 / 6.0, &st).unwrap();
        let max_im = f.values().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-10 * f.max_abs().max(1.0), "{max_im}");
    }

    #[test]
    fn approx_at_zero_delta_is_schrodinger() {
        let g = FreqGrid::symmetric(4.0, 81).unwrap();
        let st = SpaceTimeGrid::centered(1.0, 9, 5.0, 21).unwrap();
        let u = random_profile(g, 11);
        let a = approx_extension(&u, 1.0 / 6.0, 0.0, &st).unwrap();
        let s = schrodinger_extension(&u, &st).unwrap();
        assert!(a.sub(&s).unwrap().max_abs() <= 1e-14 * s.max_abs().max(1.0));
    }

    #[test]
    fn approx_rejects_support_violation() {
        let g = FreqGrid::symmetric(4.0, 81).unwrap();
        let st = SpaceTimeGrid::centered(1.0, 9, 5.0, 21).unwrap();
        let u = FreqProfile::gaussian(g, 0.0, 1.0).unwrap();
        match approx_extension(&u, 0.2, 0.5, &st) {
            Err(Error::SupportViolation { nodes }) => {
                assert!(nodes.iter().all(|&xi| 1.0 + 0.5 * xi < 0.0));
                assert!(!nodes.is_empty());
            }
            other => panic!("expected support violation, got {other:?}"),
        }
        let clipped = restrict_frequency(&u, -2.0, 10.0);
        assert!(approx_extension(&clipped, 0.2, 0.5, &st).is_ok());
    }

    #[test]
    fn weight_convention_at_origin() {
        assert_eq!(abs_pow(0.0, 1.0 / 6.0), 0.0);
        assert_eq!(abs_pow(0.0, 0.0), 1.0);
        assert_eq!(abs_pow(0.0, -0.25), 0.0);
        assert!((abs_pow(-8.0, 1.0 / 3.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn restriction_cases() {
        let g = FreqGrid::symmetric(2.0, 41).unwrap();
        let u = random_profile(g, 13);
        assert_eq!(restrict_frequency(&u, -5.0, 5.0), u);
        assert!(restrict_frequency(&u, 3.0, 4.0).is_zero());
        let a = restrict_frequency(&u, -5.0, 0.3);
        let b = restrict_frequency(&u, 0.3, 5.0);
        assert!((a.l2_mass() + b.l2_mass() - u.l2_mass()).abs() < 1e-12 * u.l2_mass());
        // Half-open: node 0.0 belongs to [0, 1) but not to [-1, 0).
        let left = restrict_frequency(&u, -1.0, 0.0);
        assert_eq!(left.samples[20], ZERO);
        assert_eq!(restrict_frequency(&u, 0.0, 1.0).samples[20], u.samples[20]);
    }

    #[test]
    fn identity_symmetry_is_identity() {
        let g = FreqGrid::symmetric(2.0, 41).unwrap();
        let u = random_profile(g, 17);
        let v = apply_symmetry(&SymmetryElement::identity(), &u, &g).unwrap();
        for (a, b) in u.samples.iter().zip(&v.samples) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn symmetry_preserves_mass() {
        let g = FreqGrid::symmetric(4.0, 161).unwrap();
        let u = FreqProfile::gaussian(g, 0.3, 0.5).unwrap();
        for lam in [0.5, 1.0, 2.0] {
            let s = SymmetryElement::new(0.4, -1.1, lam).unwrap();
            let v = apply_symmetry(&s, &u, &s.dilated_grid(&g)).unwrap();
            assert!((v.l2_mass() - u.l2_mass()).abs() < 1e-10 * u.l2_mass(), "lambda {lam}");
        }
        // Contraction onto the same grid samples existing nodes only.
        let s = SymmetryElement::new(0.0, 0.0, 0.5).unwrap();
        let v = apply_symmetry(&s, &u, &g).unwrap();
        assert!((v.l2_mass() - u.l2_mass()).abs() < 1e-10 * u.l2_mass());
    }

    #[test]
    fn symmetry_window_overflow() {
        let g = FreqGrid::symmetric(4.0, 161).unwrap();
        let u = FreqProfile::gaussian(g, 0.0, 1.0).unwrap();
        let s = SymmetryElement::new(0.0, 0.0, 2.0).unwrap();
        assert!(matches!(apply_symmetry(&s, &u, &g), Err(Error::WindowOverflow(_))));
        assert!(SymmetryElement::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn symmetrization_cases() {
        let g = FreqGrid::symmetric(2.0, 41).unwrap();
        let u = random_profile(g, 19);
        let (f1, f2) = symmetrize_real(&u).unwrap();
        assert!(f1.is_conjugate_symmetric() && f2.is_conjugate_symmetric());
        let back = f1.add(&f2.scaled(Complex64::new(0.0, 1.0))).unwrap();
        for (a, b) in back.samples.iter().zip(&u.samples) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!((f1.l2_mass() + f2.l2_mass() - u.l2_mass()).abs() < 1e-12 * u.l2_mass());

        let (a, b) = symmetrize_real(&f1).unwrap();
        assert!(b.samples.iter().all(|z| z.norm() < 1e-15));
        assert_eq!(a.samples.len(), f1.samples.len());
        let anti = f1.scaled(Complex64::new(0.0, 1.0));
        let (a, b) = symmetrize_real(&anti).unwrap();
        assert!(a.samples.iter().all(|z| z.norm() < 1e-15));
        for (x, y) in b.samples.iter().zip(&f1.samples) {
            assert!((x - y).norm() < 1e-15);
        }

        let odd = FreqProfile::zeros(FreqGrid::new(-2.0, 2.0, 40).unwrap());
        assert!(matches!(symmetrize_real(&odd), Err(Error::GridAsymmetry(_))));
    }
}
