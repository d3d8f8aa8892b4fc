use std::path::Path;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use strichartz_core::bubbles::{bubble_sweep, write_sweep_csv, BubblePath, BubbleRow};
use strichartz_core::constants::{a_p_closed_form, a_p_quadrature, THETA_NODES};
use strichartz_core::dyadic::{lemma34_scan, parallelogram_overlap, sim_pairs, Rational};
use strichartz_core::maximize::{
    best_index, run_starts, start_menu, threshold_report, AscentConfig, Objective, ReportGrids,
};
use strichartz_core::norms::{adaptive_quotient, extension_quotient};
use strichartz_core::smoothing::{local_smoothing_value, WindowControl};
use strichartz_core::{make_exponents, Extension, FreqGrid, FreqProfile, SpaceTimeGrid};

use crate::artifact::{Artifact, OutDir};
use crate::CliError;

/// Frequency window `[-xi_half, xi_half]` with `n` nodes and a centered
/// space-time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    pub xi_half: f64,
    pub n: usize,
    pub t_half: f64,
    pub nt: usize,
    pub x_half: f64,
    pub nx: usize,
}

impl Grids {
    fn freq(&self) -> Result<FreqGrid, CliError> {
        Ok(FreqGrid::symmetric(self.xi_half, self.n)?)
    }

    fn space_time(&self) -> Result<SpaceTimeGrid, CliError> {
        Ok(SpaceTimeGrid::centered(self.t_half, self.nt, self.x_half, self.nx)?)
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct GridFlags {
    /// Half-width of the frequency window.
    #[arg(long)]
    pub xi_half: Option<f64>,
    /// Number of frequency nodes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Half-width of the time window.
    #[arg(long)]
    pub t_half: Option<f64>,
    #[arg(long)]
    pub nt: Option<usize>,
    /// Half-width of the space window.
    #[arg(long)]
    pub x_half: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
}

fn write_artifact<C: Serialize, R: Serialize>(out: &OutDir, name: &str, a: &Artifact<'_, C, R>) -> Result<String, CliError> {
    let s = a.to_json()?;
    out.write(name, s.as_bytes())?;
    Ok(s)
}

// ---------------------------------------------------------------- constants

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub p: f64,
    pub theta_nodes: usize,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self { p: 6.0, theta_nodes: THETA_NODES }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ConstantsFlags {
    #[arg(long)]
    pub p: Option<f64>,
    /// Nodes of the θ-quadrature.
    #[arg(long)]
    pub theta_nodes: Option<usize>,
}

pub fn constants(cfg: &ConstantsConfig, out: &OutDir) -> Result<String, CliError> {
    let exps = make_exponents(cfg.p, 1.0 / cfg.p)?;
    let g = a_p_closed_form(&exps)?;
    let quad = a_p_quadrature(&exps, cfg.theta_nodes)?;
    let result = json!({
        "p": exps.p,
        "q": exps.q,
        "a_p_gamma": g,
        "a_p_quad": quad,
        "agreement": (g - quad).abs() / g,
    });
    let a = Artifact::new("constants", cfg, result).tolerance("theta_nodes", cfg.theta_nodes as f64);
    write_artifact(out, "constants.json", &a)
}

// ---------------------------------------------------------------- quotient

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientConfig {
    /// `airy`, `schrodinger` or `approx`.
    pub objective: String,
    pub p: f64,
    /// Airy weight exponent; defaults to `1/p`.
    pub gamma: Option<f64>,
    /// Parameter of the `approx` operator.
    pub delta: f64,
    /// CSV profile (`xi,re,im`); a unit Gaussian on the grid when absent.
    pub profile: Option<String>,
    pub grid: Grids,
    /// Double the window until the outer shell is below `window_tol`.
    pub adaptive: bool,
    pub window_tol: f64,
    pub max_doublings: usize,
}

impl Default for QuotientConfig {
    fn default() -> Self {
        Self {
            objective: "airy".into(),
            p: 6.0,
            gamma: None,
            delta: 0.1,
            profile: None,
            grid: Grids { xi_half: 4.0, n: 129, t_half: 2.0, nt: 201, x_half: 20.0, nx: 401 },
            adaptive: false,
            window_tol: 1e-3,
            max_doublings: 4,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct QuotientFlags {
    /// airy | schrodinger | approx
    #[arg(long)]
    pub objective: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Profile CSV with header xi,re,im.
    #[arg(long)]
    pub profile: Option<String>,
    #[command(flatten)]
    pub grid: GridFlags,
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub adaptive: bool,
    #[arg(long)]
    pub window_tol: Option<f64>,
    #[arg(long)]
    pub max_doublings: Option<usize>,
}

pub fn quotient(cfg: &QuotientConfig, out: &OutDir) -> Result<String, CliError> {
    let gamma = cfg.gamma.unwrap_or(1.0 / cfg.p);
    let exps = make_exponents(cfg.p, gamma)?;
    let ext = match cfg.objective.as_str() {
        "airy" => Extension::Airy { gamma },
        "approx" => Extension::Approx { gamma, delta: cfg.delta },
        "schrodinger" => {
            exps.require_critical()?;
            Extension::Schrodinger
        }
        other => return Err(CliError::Usage(format!("unknown objective '{other}' (airy | schrodinger | approx)"))),
    };
    let u = match &cfg.profile {
        Some(path) => FreqProfile::load(Path::new(path))?,
        None => FreqProfile::gaussian(cfg.grid.freq()?, 0.0, 1.0)?,
    };
    let grid = cfg.grid.space_time()?;
    let (q, final_grid, extra) = if cfg.adaptive {
        let r = adaptive_quotient(&u, ext, &exps, &grid, cfg.window_tol, cfg.max_doublings)?;
        (r.quotient, r.grid, json!({"doublings": r.doublings, "shell_fraction": r.shell_fraction, "converged": r.converged}))
    } else {
        (extension_quotient(&u, ext, &exps, &grid)?, grid, serde_json::Value::Null)
    };
    let result = json!({
        "p": exps.p,
        "q": exps.q,
        "gamma": exps.gamma,
        "quotient": q,
        "quotient_root": q.powf(1.0 / exps.p),
        "mass": u.l2_mass(),
        "final_grid": final_grid,
        "adaptive": extra,
    });
    let mut a = Artifact::new("quotient", cfg, result);
    if cfg.adaptive {
        a = a.tolerance("window_tol", cfg.window_tol);
    }
    write_artifact(out, "quotient.json", &a)
}

// ---------------------------------------------------------------- bubble-sweep

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BubbleSweepConfig {
    pub p: f64,
    /// Strictly decreasing.
    pub eps: Vec<f64>,
    /// Gaussian χ on `[-chi_half, chi_half]`.
    pub chi_half: f64,
    pub chi_n: usize,
    pub t_half: f64,
    pub nt: usize,
    pub x_half: f64,
    pub nx: usize,
    pub path: BubblePath,
}

impl Default for BubbleSweepConfig {
    fn default() -> Self {
        Self {
            p: 6.0,
            eps: vec![0.2, 0.1, 0.05],
            chi_half: 4.0,
            chi_n: 129,
            t_half: 1.0,
            nt: 101,
            x_half: 16.0,
            nx: 1601,
            path: BubblePath::Substituted,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct BubbleSweepFlags {
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub chi_half: Option<f64>,
    #[arg(long)]
    pub chi_n: Option<usize>,
    #[arg(long)]
    pub t_half: Option<f64>,
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub x_half: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    /// substituted | direct
    #[arg(long)]
    pub path: Option<BubblePath>,
}

pub fn bubble_rows(cfg: &BubbleSweepConfig) -> Result<Vec<BubbleRow>, CliError> {
    let exps = make_exponents(cfg.p, 1.0 / cfg.p)?;
    let chi = FreqProfile::gaussian(FreqGrid::symmetric(cfg.chi_half, cfg.chi_n)?, 0.0, 1.0)?;
    let grid = SpaceTimeGrid::centered(cfg.t_half, cfg.nt, cfg.x_half, cfg.nx)?;
    Ok(bubble_sweep(&chi, &exps, &cfg.eps, &grid, cfg.path)?)
}

pub fn bubble(cfg: &BubbleSweepConfig, out: &OutDir) -> Result<String, CliError> {
    let rows = bubble_rows(cfg)?;
    let mut csv = Vec::new();
    write_sweep_csv(&rows, &mut csv)?;
    out.write("bubble_sweep.csv", &csv)?;
    let a = Artifact::new("bubble-sweep", cfg, json!({ "rows": rows })).file("bubble_sweep.csv");
    write_artifact(out, "bubble_sweep.json", &a)
}

// ---------------------------------------------------------------- dyadic-scan

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicScanConfig {
    pub ell_min: i32,
    pub ell_max: i32,
    /// Pairs lie in `[0, 2^window_exp]`.
    pub window_exp: i32,
    /// Sample points per interval for the pointwise bounds.
    pub samples: usize,
    /// `α = alpha_num / alpha_den`.
    pub alpha_num: i64,
    pub alpha_den: i64,
    pub overlap_ell_min: i32,
    pub overlap_ell_max: i32,
    /// The overlap scan runs at this window and at twice its size.
    pub overlap_window_exp: i32,
}

impl Default for DyadicScanConfig {
    fn default() -> Self {
        Self {
            ell_min: -4,
            ell_max: 4,
            window_exp: 10,
            samples: 2,
            alpha_num: 1,
            alpha_den: 100,
            overlap_ell_min: -2,
            overlap_ell_max: 4,
            overlap_window_exp: 9,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct DyadicScanFlags {
    #[arg(long, allow_hyphen_values = true)]
    pub ell_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub ell_max: Option<i32>,
    #[arg(long)]
    pub window_exp: Option<i32>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub alpha_num: Option<i64>,
    #[arg(long)]
    pub alpha_den: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub overlap_ell_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub overlap_ell_max: Option<i32>,
    #[arg(long)]
    pub overlap_window_exp: Option<i32>,
}

pub fn dyadic(cfg: &DyadicScanConfig, out: &OutDir) -> Result<String, CliError> {
    if cfg.alpha_den == 0 {
        return Err(CliError::Core(strichartz_core::Error::Domain("alpha denominator is zero".into())));
    }
    let scan = lemma34_scan(cfg.ell_min, cfg.ell_max, cfg.window_exp, cfg.samples)?;
    let alpha = Rational::new(cfg.alpha_num as i128, cfg.alpha_den as i128);
    let w = cfg.overlap_window_exp;
    let o1 = parallelogram_overlap(&sim_pairs(cfg.overlap_ell_min, cfg.overlap_ell_max, w), &alpha)?;
    let o2 = parallelogram_overlap(&sim_pairs(cfg.overlap_ell_min, cfg.overlap_ell_max, w + 1), &alpha)?;
    let result = json!({
        "pairs_checked": scan.pairs_checked,
        "failures": scan.failures,
        "max_overlap": o1.max_count,
        "max_overlap_doubled_window": o2.max_count,
        "overlap_stable": o1.max_count == o2.max_count,
        "overlap_argmax": o1.argmax,
        "overlap_pairs": [o1.pairs, o2.pairs],
    });
    let a = Artifact::new("dyadic-scan", cfg, result);
    write_artifact(out, "dyadic_scan.json", &a)
}

// ---------------------------------------------------------------- smoothing-check

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingCheckConfig {
    /// Bump `sin²` profile supported in `[lo, hi]`.
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    /// Weight `a(x) = exp(-(x / weight_width)²)`.
    pub weight_width: f64,
    pub x_half: f64,
    pub nx: usize,
    /// Starting time window; doubled adaptively.
    pub t_half: f64,
    pub nt: usize,
    pub shell_tol: f64,
    pub max_doublings: usize,
}

impl Default for SmoothingCheckConfig {
    fn default() -> Self {
        let w = WindowControl::default();
        Self {
            lo: 0.5,
            hi: 2.0,
            n: 97,
            weight_width: 1.0,
            x_half: 6.0,
            nx: 241,
            t_half: 1.0,
            nt: 41,
            shell_tol: w.shell_tol,
            max_doublings: w.max_doublings,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SmoothingCheckFlags {
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub weight_width: Option<f64>,
    #[arg(long)]
    pub x_half: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub t_half: Option<f64>,
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub shell_tol: Option<f64>,
    #[arg(long)]
    pub max_doublings: Option<usize>,
}

pub fn smoothing(cfg: &SmoothingCheckConfig, out: &OutDir) -> Result<String, CliError> {
    let fg = FreqGrid::new(cfg.lo, cfg.hi, cfg.n)?;
    let width = cfg.hi - cfg.lo;
    let u = FreqProfile::from_fn(fg, |xi| {
        let s = (std::f64::consts::PI * (xi - cfg.lo) / width).sin();
        (s * s).into()
    })?;
    let grid = SpaceTimeGrid::centered(cfg.t_half, cfg.nt, cfg.x_half, cfg.nx)?;
    let a: Vec<f64> = grid.x_nodes().iter().map(|x| (-(x / cfg.weight_width).powi(2)).exp()).collect();
    let ctl = WindowControl { shell_tol: cfg.shell_tol, max_doublings: cfg.max_doublings };
    let v = local_smoothing_value(&u, &a, &grid, ctl)?;
    let result = json!({
        "lhs": v.lhs,
        "rhs": v.rhs,
        "ratio": v.ratio(),
        "window": v.window,
        "shell_fraction": v.shell_fraction,
        "doublings": v.doublings,
    });
    let a = Artifact::new("smoothing-check", cfg, result).tolerance("shell_tol", cfg.shell_tol);
    write_artifact(out, "smoothing_check.json", &a)
}

// ---------------------------------------------------------------- maximize

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximizeConfig {
    pub objective: Objective,
    pub p: f64,
    /// Only for `airy-subcritical`; defaults to `1/p`.
    pub gamma: Option<f64>,
    pub grid: Grids,
    /// Space-time window for the Schrödinger side of the threshold report.
    pub schrodinger_grid: Grids,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    pub backtrack: f64,
    pub max_backtracks: usize,
    pub stall_tol: f64,
    pub stall_window: usize,
    pub real_constraint: bool,
    /// Also run the threshold report (critical triples only).
    pub report: bool,
}

impl Default for MaximizeConfig {
    fn default() -> Self {
        let a = AscentConfig::default();
        let grid = Grids { xi_half: 4.0, n: 129, t_half: 6.0, nt: 241, x_half: 40.0, nx: 409 };
        Self {
            objective: Objective::AiryCritical,
            p: 6.0,
            gamma: None,
            grid,
            schrodinger_grid: grid,
            seed: 0,
            restarts: a.restarts,
            max_iters: a.max_iters,
            initial_step: a.initial_step,
            backtrack: a.backtrack,
            max_backtracks: a.max_backtracks,
            stall_tol: a.stall_tol,
            stall_window: a.stall_window,
            real_constraint: false,
            report: false,
        }
    }
}

impl MaximizeConfig {
    fn ascent(&self) -> AscentConfig {
        AscentConfig {
            max_iters: self.max_iters,
            initial_step: self.initial_step,
            backtrack: self.backtrack,
            max_backtracks: self.max_backtracks,
            stall_tol: self.stall_tol,
            stall_window: self.stall_window,
            restarts: self.restarts,
            real_constraint: self.real_constraint,
            objective: self.objective,
            seed: self.seed,
        }
    }

    fn seeds(&self) -> Vec<u64> {
        (0..self.restarts as u64).map(|r| self.seed.wrapping_add(r)).collect()
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct MaximizeFlags {
    /// airy-critical | airy-subcritical | schrodinger
    #[arg(long)]
    pub objective: Option<Objective>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub grid: GridFlags,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of seeded random starts.
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub initial_step: Option<f64>,
    #[arg(long)]
    pub backtrack: Option<f64>,
    #[arg(long)]
    pub stall_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub real_constraint: bool,
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub report: bool,
}

fn history_csv(runs: &[(strichartz_core::maximize::RunSummary, strichartz_core::maximize::AscentResult)]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["objective", "start", "seed", "iteration", "quotient"]).map_err(|e| CliError::Io(e.to_string()))?;
    for (s, r) in runs {
        let obj = serde_json::to_value(s.objective).unwrap_or_default();
        let obj = obj.as_str().unwrap_or_default().to_string();
        let seed = s.seed.map(|v| v.to_string()).unwrap_or_default();
        for (k, q) in r.history.iter().enumerate() {
            w.write_record([obj.as_str(), s.start.as_str(), seed.as_str(), &k.to_string(), &q.to_string()])
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn maximize(cfg: &MaximizeConfig, out: &OutDir) -> Result<String, CliError> {
    let gamma = match cfg.objective {
        Objective::AirySubcritical => cfg.gamma.unwrap_or(1.0 / cfg.p),
        _ => 1.0 / cfg.p,
    };
    let exps = make_exponents(cfg.p, gamma)?;
    let ascent = cfg.ascent();
    ascent.validate()?;
    let freq = cfg.grid.freq()?;
    let starts = start_menu(&freq, cfg.restarts, cfg.seed)?;
    let runs = run_starts(cfg.objective, &exps, &ascent, freq, cfg.grid.space_time()?, &starts)?;
    let best = best_index(&runs).expect("start menu is never empty");
    out.write("history.csv", &history_csv(&runs)?)?;
    let mut profile = Vec::new();
    runs[best].1.profile().write_csv(&mut profile)?;
    out.write("best_profile.csv", &profile)?;

    let report = if cfg.report {
        let grids = ReportGrids {
            freq,
            airy: cfg.grid.space_time()?,
            schrodinger: cfg.schrodinger_grid.space_time()?,
        };
        let r = threshold_report(&exps, &ascent, &grids)?;
        let a = Artifact::new("maximize", cfg, &r)
            .seeds(cfg.seeds())
            .tolerance("stall_tol", cfg.stall_tol)
            .tolerance("stall_window", cfg.stall_window as f64);
        write_artifact(out, "threshold_report.json", &a)?;
        Some(r)
    } else {
        None
    };

    let result = json!({
        "objective": cfg.objective,
        "p": exps.p,
        "q": exps.q,
        "gamma": exps.gamma,
        "best_quotient": runs[best].1.best_quotient,
        "best_start": runs[best].0.start,
        "runs": runs.iter().map(|r| &r.0).collect::<Vec<_>>(),
        "threshold_report": report,
    });
    let mut a = Artifact::new("maximize", cfg, result)
        .seeds(cfg.seeds())
        .tolerance("stall_tol", cfg.stall_tol)
        .tolerance("stall_window", cfg.stall_window as f64)
        .file("history.csv")
        .file("best_profile.csv");
    if cfg.report {
        a = a.file("threshold_report.json");
    }
    write_artifact(out, "maximize.json", &a)
}

// ---------------------------------------------------------------- report-all

/// Every experiment at sizes that finish in about a minute on one core.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportAllConfig {
    pub seed: u64,
    pub constants: ConstantsConfig,
    pub bubble_sweep: BubbleSweepConfig,
    pub dyadic_scan: DyadicScanConfig,
    pub smoothing_check: SmoothingCheckConfig,
    pub maximize: MaximizeConfig,
}

impl Default for ReportAllConfig {
    fn default() -> Self {
        let grid = Grids { xi_half: 3.0, n: 97, t_half: 3.0, nt: 121, x_half: 24.0, nx: 193 };
        Self {
            seed: 0,
            constants: ConstantsConfig::default(),
            bubble_sweep: BubbleSweepConfig { nx: 801, ..Default::default() },
            dyadic_scan: DyadicScanConfig { ell_min: -3, ell_max: 3, window_exp: 7, overlap_window_exp: 7, ..Default::default() },
            smoothing_check: SmoothingCheckConfig::default(),
            maximize: MaximizeConfig {
                grid,
                schrodinger_grid: grid,
                restarts: 2,
                max_iters: 60,
                report: true,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ReportAllFlags {
    /// Seed for every randomized step.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn report_all(cfg: &ReportAllConfig, out: &OutDir) -> Result<String, CliError> {
    let mut files = Vec::new();
    constants(&cfg.constants, out)?;
    files.push("constants.json");
    bubble(&cfg.bubble_sweep, out)?;
    files.extend(["bubble_sweep.json", "bubble_sweep.csv"]);
    dyadic(&cfg.dyadic_scan, out)?;
    files.push("dyadic_scan.json");
    smoothing(&cfg.smoothing_check, out)?;
    files.push("smoothing_check.json");
    let m = MaximizeConfig { seed: cfg.seed, ..cfg.maximize.clone() };
    maximize(&m, out)?;
    files.extend(["maximize.json", "history.csv", "best_profile.csv"]);
    if m.report {
        files.push("threshold_report.json");
    }
    let mut a = Artifact::new("report-all", cfg, json!({ "artifacts": files })).seeds(m.seeds());
    for f in &files {
        a = a.file(f);
    }
    write_artifact(out, "report_all.json", &a)
}
