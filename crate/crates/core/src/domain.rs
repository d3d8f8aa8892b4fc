//! Domain types shared by every experiment: exponent triples, frequency and
//! space-time grids, sampled profiles and fields.
//!
//! Profiles are compactly supported samples of the Fourier transform
//! `û` on a uniform window; everything outside the window is zero. This is
//! the trial-function class for all lower-bound experiments.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{pairwise_sum, QuadRule};

/// Absolute tolerance used for algebraic identities between exponents.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Smoothing order and Lebesgue exponents of an Airy-Strichartz estimate,
/// tied together by `-gamma + 3/p + 1/q = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTriple {
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
}

impl ExponentTriple {
    /// Solves the scaling relation for `q`.
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        if !p.is_finite() || p <= 4.0 {
            return Err(Error::domain(format!("time exponent p must satisfy 4 < p < inf, got {p}")));
        }
        if !gamma.is_finite() || gamma <= -0.5 || gamma > 1.0 / p + EXPONENT_TOL {
            return Err(Error::domain(format!(
                "smoothing order must satisfy -1/2 < gamma <= 1/p = {}, got {gamma}",
                1.0 / p
            )));
        }
        let inv_q = 0.5 + gamma - 3.0 / p;
        if inv_q <= 0.0 {
            return Err(Error::domain(format!("no finite q for p = {p}, gamma = {gamma}")));
        }
        let q = 1.0 / inv_q;
        if q < 2.0 - EXPONENT_TOL {
            return Err(Error::domain(format!("resulting q = {q} is below 2")));
        }
        // Snap gamma onto 1/p so that the critical flag is exact.
        let gamma = if (gamma - 1.0 / p).abs() <= EXPONENT_TOL { 1.0 / p } else { gamma };
        Ok(Self { gamma, p, q })
    }

    /// The critical triple `gamma = 1/p`, `2/p + 1/q = 1/2`.
    pub fn critical(p: f64) -> Result<Self> {
        Self::new(p, 1.0 / p)
    }

    pub fn is_critical(&self) -> bool {
        (self.gamma - 1.0 / self.p).abs() <= EXPONENT_TOL
    }

    /// Residual of the scaling relation; zero up to rounding for valid triples.
    pub fn scaling_residual(&self) -> f64 {
        -self.gamma + 3.0 / self.p + 1.0 / self.q - 0.5
    }

    pub fn require_critical(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "critical triple required (gamma = 1/p), got gamma = {}, p = {}",
                self.gamma, self.p
            )))
        }
    }
}

/// Shorthand for [`ExponentTriple::new`].
pub fn make_exponents(p: f64, gamma: f64) -> Result<ExponentTriple> {
    ExponentTriple::new(p, gamma)
}

/// Uniform frequency grid `xi_j = xi_min + j * step`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqGrid {
    pub xi_min: f64,
    pub xi_max: f64,
    pub n: usize,
}

impl FreqGrid {
    pub fn new(xi_min: f64, xi_max: f64, n: usize) -> Result<Self> {
        if !(xi_min.is_finite() && xi_max.is_finite()) || xi_min >= xi_max {
            return Err(Error::domain(format!("frequency window [{xi_min}, {xi_max}] is empty")));
        }
        if n < 2 {
            return Err(Error::domain(format!("frequency grid needs n >= 2, got {n}")));
        }
        Ok(Self { xi_min, xi_max, n })
    }

    /// Symmetric window `[-half_width, half_width]` with `n` nodes.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn step(&self) -> f64 {
        (self.xi_max - self.xi_min) / (self.n - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            self.xi_max
        } else {
            self.xi_min + j as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        QuadRule::Trapezoid.weights(self.n, self.xi_min, self.xi_max)
    }

    /// Symmetric about the origin with an odd node count, so that node `j`
    /// mirrors node `n - 1 - j` and `xi = 0` is a node.
    pub fn is_symmetric(&self) -> bool {
        let scale = self.xi_max.abs().max(self.xi_min.abs());
        (self.xi_min + self.xi_max).abs() <= 1e-12 * scale && self.n % 2 == 1
    }

    pub(crate) fn require_symmetric(&self) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::GridAsymmetry(format!(
                "window [{}, {}] with n = {}",
                self.xi_min, self.xi_max, self.n
            )))
        }
    }

    /// Index of the node equal to `xi` within `tol * step`, if any.
    pub fn node_index(&self, xi: f64, tol: f64) -> Option<usize> {
        let pos = (xi - self.xi_min) / self.step();
        let j = pos.round();
        if j < 0.0 || j > (self.n - 1) as f64 || (pos - j).abs() > tol {
            None
        } else {
            Some(j as usize)
        }
    }
}

/// Samples of `û` at the nodes of a [`FreqGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreqProfile {
    pub grid: FreqGrid,
    pub samples: Vec<Complex64>,
}

impl FreqProfile {
    pub fn new(grid: FreqGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.n
            )));
        }
        if let Some(j) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("profile sample {j} is not finite")));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: FreqGrid) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n] }
    }

    pub fn from_fn(grid: FreqGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, samples)
    }

    /// The Gaussian `û(xi) = exp(-(xi - center)^2 / (2 width^2))`.
    pub fn gaussian(grid: FreqGrid, center: f64, width: f64) -> Result<Self> {
        Self::from_fn(grid, |xi| {
            let z = (xi - center) / width;
            Complex64::new((-0.5 * z * z).exp(), 0.0)
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Trapezoid approximation of `∫|û|²`, which equals `‖u‖²` by Plancherel.
    pub fn l2_mass(&self) -> f64 {
        let w = self.grid.weights();
        let terms: Vec<f64> = self.samples.iter().zip(&w).map(|(z, w)| w * z.norm_sqr()).collect();
        pairwise_sum(&terms)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { grid: self.grid, samples: self.samples.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, samples })
    }

    pub(crate) fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }

    /// `û(-xi) = conj(û(xi))` at all mirrored nodes within `1e-12`.
    pub fn is_conjugate_symmetric(&self) -> bool {
        if !self.grid.is_symmetric() {
            return false;
        }
        let n = self.samples.len();
        let scale = self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        (0..n).all(|j| (self.samples[j] - self.samples[n - 1 - j].conj()).norm() <= 1e-12 * scale)
    }

    /// Writes the `xi,re,im` CSV format.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["xi", "re", "im"])?;
        for (xi, z) in self.grid.nodes().iter().zip(&self.samples) {
            wtr.write_record(&[fmt_f64(*xi), fmt_f64(z.re), fmt_f64(z.im)])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads the `xi,re,im` CSV format. Nodes must be strictly increasing and
    /// uniformly spaced (relative spacing deviation at most `1e-9`).
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let headers = rdr.headers()?.clone();
        let cols: Vec<&str> = headers.iter().map(str::trim).collect();
        if cols != ["xi", "re", "im"] {
            return Err(Error::Parse(format!("expected header xi,re,im, got {}", cols.join(","))));
        }
        let mut xs = Vec::new();
        let mut samples = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let field = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Parse(format!("row {}: missing column {i}", line + 2)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", line + 2)))
            };
            xs.push(field(0)?);
            samples.push(Complex64::new(field(1)?, field(2)?));
        }
        if xs.len() < 2 {
            return Err(Error::Parse("profile needs at least two nodes".into()));
        }
        let grid = FreqGrid::new(xs[0], xs[xs.len() - 1], xs.len())?;
        let h = grid.step();
        for (j, pair) in xs.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::Parse(format!("xi not strictly increasing at row {}", j + 3)));
            }
            if ((pair[1] - pair[0]) - h).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::Parse(format!("non-uniform xi spacing at row {}", j + 3)));
            }
        }
        Self::new(grid, samples)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)?;
        let sidecar = path.with_extension("json");
        let meta = serde_json::json!({
            "kind": "freq_profile",
            "grid": self.grid,
            "step": self.grid.step(),
        });
        std::fs::write(sidecar, serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Rectangular `(t, x)` grid with a quadrature rule in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub rule: QuadRule,
}

impl SpaceTimeGrid {
    pub fn new(
        (t_min, t_max, nt): (f64, f64, usize),
        (x_min, x_max, nx): (f64, f64, usize),
        rule: QuadRule,
    ) -> Result<Self> {
        for (name, lo, hi, n) in [("t", t_min, t_max, nt), ("x", x_min, x_max, nx)] {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(Error::domain(format!("{name}-window [{lo}, {hi}] is empty")));
            }
            if n < 2 {
                return Err(Error::domain(format!("{name}-grid needs at least 2 nodes, got {n}")));
            }
            if rule == QuadRule::Simpson && n % 2 == 0 {
                return Err(Error::domain(format!("Simpson rule needs an odd {name}-count, got {n}")));
            }
        }
        Ok(Self { t_min, t_max, nt, x_min, x_max, nx, rule })
    }

    /// Trapezoid grid on `[-t_half, t_half] x [-x_half, x_half]`.
    pub fn centered(t_half: f64, nt: usize, x_half: f64, nx: usize) -> Result<Self> {
        Self::new((-t_half, t_half, nt), (-x_half, x_half, nx), QuadRule::Trapezoid)
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.nt - 1) as f64
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn t_nodes(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.nt)
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn t_weights(&self) -> Vec<f64> {
        self.rule.weights(self.nt, self.t_min, self.t_max)
    }

    pub fn x_weights(&self) -> Vec<f64> {
        self.rule.weights(self.nx, self.x_min, self.x_max)
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same node counts and rule on a window scaled by `(t_factor, x_factor)`.
    pub fn scaled(&self, t_factor: f64, x_factor: f64) -> Self {
        Self {
            t_min: self.t_min * t_factor,
            t_max: self.t_max * t_factor,
            x_min: self.x_min * x_factor,
            x_max: self.x_max * x_factor,
            ..*self
        }
    }
}

/// Complex values on a [`SpaceTimeGrid`], stored row-major (`t` outer).
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    pub grid: SpaceTimeGrid,
    values: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn new(grid: SpaceTimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {} x {} grid",
                values.len(),
                grid.nt,
                grid.nx
            )));
        }
        if let Some(k) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!(
                "field value at (t-row {}, x-col {}) is not finite",
                k / grid.nx,
                k % grid.nx
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpaceTimeGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: SpaceTimeGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let ts = grid.t_nodes();
        let xs = grid.x_nodes();
        let values = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (t, x))).map(|(t, x)| f(t, x)).collect();
        Self::new(grid, values)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, i: usize, k: usize) -> Complex64 {
        self.values[i * self.grid.nx + k]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.values[i * self.grid.nx..(i + 1) * self.grid.nx]
    }

    pub fn rows(&self) -> std::slice::Chunks<'_, Complex64> {
        self.values.chunks(self.grid.nx)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub(crate) fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Writes the `t,x,re,im` CSV export.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["t", "x", "re", "im"])?;
        let xs = self.grid.x_nodes();
        for (t, row) in self.grid.t_nodes().iter().zip(self.rows()) {
            for (x, z) in xs.iter().zip(row) {
                wtr.write_record(&[fmt_f64(*t), fmt_f64(*x), fmt_f64(z.re), fmt_f64(z.im)])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)?;
        let meta = serde_json::json!({ "kind": "space_time_field", "grid": self.grid });
        std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }
}

/// Shortest representation that round-trips exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { b } else { a + i as f64 * h }).collect()
}

/// Free-function form of [`FreqProfile::l2_mass`].
pub fn l2_mass(u: &FreqProfile) -> f64 {
    u.l2_mass()
}
