//! Dyadic intervals, the `∼` relation, and the Fourier-support parallelograms
//! of bilinear products, all in exact rational arithmetic; plus the refined
//! functional `Q(u)` and the bilinear ratio, which are floating diagnostics.
//!
//! A dyadic interval is `[k 2^ℓ, (k+1) 2^ℓ)`. Two intervals are `∼`-related
//! when they are not adjacent, their parents are not adjacent, and their
//! grandparents are adjacent.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{FreqProfile, SpaceTimeGrid};
use crate::error::{Error, Result};
use crate::norms::{mixed_norm, mixed_norm_pow_values};
use crate::propagators::{restrict_frequency, Extension, ExtensionPlan};

/// Exact rational number used for all interval geometry.
pub type Rational = Ratio<i128>;

fn rat(n: i128, d: i128) -> Rational {
    Ratio::new(n, d)
}

fn pow2(ell: i32) -> Rational {
    if ell >= 0 {
        Ratio::from_integer(1i128 << ell)
    } else {
        Ratio::new(1, 1i128 << (-ell))
    }
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `[k 2^ℓ, (k+1) 2^ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub k: i64,
    pub ell: i32,
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left(), self.right())
    }
}

impl DyadicInterval {
    pub fn new(k: i64, ell: i32) -> Self {
        Self { k, ell }
    }

    /// The dyadic interval of length `2^ℓ` containing `x`.
    pub fn containing(x: &Rational, ell: i32) -> Self {
        let scaled = x / pow2(ell);
        Self { k: scaled.floor().to_integer() as i64, ell }
    }

    pub fn left(&self) -> Rational {
        Ratio::from_integer(self.k as i128) * pow2(self.ell)
    }

    pub fn right(&self) -> Rational {
        Ratio::from_integer(self.k as i128 + 1) * pow2(self.ell)
    }

    pub fn length(&self) -> Rational {
        pow2(self.ell)
    }

    pub fn center(&self) -> Rational {
        (Ratio::from_integer(self.k as i128) + rat(1, 2)) * pow2(self.ell)
    }

    pub fn parent(&self) -> Self {
        Self { k: self.k.div_euclid(2), ell: self.ell + 1 }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        *x >= self.left() && *x < self.right()
    }

    /// Same length and sharing an extremity (equal intervals included).
    pub fn adjacent(&self, other: &Self) -> bool {
        self.ell == other.ell && (self.k - other.k).abs() <= 1
    }

    pub fn in_positive(&self) -> bool {
        self.k >= 0
    }

    pub fn in_negative(&self) -> bool {
        self.k < 0
    }

    pub fn mirror(&self) -> Self {
        Self { k: -self.k - 1, ell: self.ell }
    }

    /// Bounds as `f64` (exact for the ranges used here).
    pub fn bounds_f64(&self) -> (f64, f64) {
        (to_f64(&self.left()), to_f64(&self.right()))
    }
}

/// `I ∼ I'`.
pub fn sim_related(a: &DyadicInterval, b: &DyadicInterval) -> bool {
    if a.ell != b.ell || a.adjacent(b) {
        return false;
    }
    let (pa, pb) = (a.parent(), b.parent());
    if pa.adjacent(&pb) {
        return false;
    }
    let (ga, gb) = (pa.parent(), pb.parent());
    ga.adjacent(&gb) && ga != gb
}

/// All ordered `∼`-pairs with `ℓ ∈ [ell_min, ell_max]` and both intervals
/// inside `[0, 2^window_exp]`.
pub fn sim_pairs(ell_min: i32, ell_max: i32, window_exp: i32) -> Vec<(DyadicInterval, DyadicInterval)> {
    let mut out = Vec::new();
    for ell in ell_min..=ell_max {
        if ell > window_exp {
            continue;
        }
        let count = 1i64 << (window_exp - ell);
        for k in 0..count {
            let a = DyadicInterval::new(k, ell);
            // Related intervals differ by at most 7 in k.
            for kk in (k - 7).max(0)..=(k + 7).min(count - 1) {
                let b = DyadicInterval::new(kk, ell);
                if sim_related(&a, &b) {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

/// The `∼`-pairs `(I, I')` with `η ∈ I`, `η' ∈ I'` and `ℓ` in range.
pub fn covering_pairs(eta: &Rational, eta2: &Rational, ell_min: i32, ell_max: i32) -> Vec<(DyadicInterval, DyadicInterval)> {
    (ell_min..=ell_max)
        .map(|ell| (DyadicInterval::containing(eta, ell), DyadicInterval::containing(eta2, ell)))
        .filter(|(a, b)| sim_related(a, b))
        .collect()
}

/// Outcome of the four interval properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma34 {
    /// `|η| ≤ 2|c(I)|` on `I`.
    pub point_bound: bool,
    /// `|c(I')| ≤ 15|c(I)|`.
    pub center_ratio: bool,
    /// `(4/5)|c(I+I')| ≤ |η+η'| ≤ (6/5)|c(I+I')|`.
    pub sum_bound: bool,
    /// `2|I| ≤ |η−η'| ≤ 8|I|`.
    pub gap_bound: bool,
}

impl Lemma34 {
    pub fn all(&self) -> bool {
        self.point_bound && self.center_ratio && self.sum_bound && self.gap_bound
    }
}

/// Checks the four properties on the closures of `I` and `I'` at the
/// endpoints (conclusive, since every bound is monotone in `η`, `η'`) and at
/// `samples_per_interval` interior rational points.
pub fn lemma34_check(i: &DyadicInterval, j: &DyadicInterval, samples_per_interval: usize) -> Result<Lemma34> {
    if !sim_related(i, j) {
        return Err(Error::PreconditionViolation(format!("{i} and {j} are not related")));
    }
    if !((i.in_positive() && j.in_positive()) || (i.in_negative() && j.in_negative())) {
        return Err(Error::PreconditionViolation(format!("{i} and {j} lie on different sides of 0")));
    }
    let pts = |iv: &DyadicInterval| -> Vec<Rational> {
        let (a, len) = (iv.left(), iv.length());
        let m = samples_per_interval as i128 + 1;
        (0..=m).map(|s| a + len * rat(s, m)).collect()
    };
    let (pi, pj) = (pts(i), pts(j));
    let ci = i.center().abs();
    let cj = j.center().abs();
    let len = i.length();
    let cs = (i.center() + j.center()).abs();
    let two = Ratio::from_integer(2);

    let point_bound = pi.iter().all(|e| e.abs() <= two * ci);
    let center_ratio = cj <= Ratio::from_integer(15) * ci;
    let mut sum_bound = true;
    let mut gap_bound = true;
    for e in &pi {
        for f in &pj {
            let s = (e + f).abs();
            sum_bound &= s >= rat(4, 5) * cs && s <= rat(6, 5) * cs;
            let d = (e - f).abs();
            gap_bound &= d >= two * len && d <= Ratio::from_integer(8) * len;
        }
    }
    Ok(Lemma34 { point_bound, center_ratio, sum_bound, gap_bound })
}

/// Summary of an exhaustive scan of the pointwise, center, sum and gap bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub pairs_checked: usize,
    pub failures: usize,
}

pub fn lemma34_scan(ell_min: i32, ell_max: i32, window_exp: i32, samples: usize) -> Result<ScanSummary> {
    let pairs = sim_pairs(ell_min, ell_max, window_exp);
    let failures = pairs
        .par_iter()
        .map(|(a, b)| lemma34_check(a, b, samples).map(|r| usize::from(!r.all())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(ScanSummary { pairs_checked: pairs.len(), failures })
}

/// `{(ω, ξ): ξ ∈ [xi_lo, xi_hi], slab_lo ≤ (ω − ¾(ξ−c)c² − ¼c³)/(c L²) ≤ slab_hi}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parallelogram {
    pub xi_lo: Rational,
    pub xi_hi: Rational,
    pub c: Rational,
    pub len: Rational,
    pub slab_lo: Rational,
    pub slab_hi: Rational,
}

/// Admissibility of the dilation parameter.
pub fn check_alpha(alpha: &Rational) -> Result<()> {
    let ok = alpha.is_positive()
        && *alpha < Ratio::from_integer(4)
        && rat(3, 5) - rat(7, 1) * alpha > Rational::zero()
        && rat(2, 5) - rat(561, 80) * alpha > Rational::zero();
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha = {alpha} is not admissible")))
    }
}

impl Parallelogram {
    /// `(1+α) R(I + I')`; `α = 0` gives `R(I + I')` itself.
    pub fn for_pair(i: &DyadicInterval, j: &DyadicInterval, alpha: &Rational) -> Result<Self> {
        let lo = i.left() + j.left();
        let hi = i.right() + j.right();
        let c = (lo + hi) / Ratio::from_integer(2);
        if !c.is_positive() {
            return Err(Error::PreconditionViolation(format!("pair {i}, {j} does not lie in the positive half-line")));
        }
        let len = hi - lo;
        let one = Ratio::from_integer(1);
        let half = (one + alpha) * len / Ratio::from_integer(2);
        let seven_a = Ratio::from_integer(7) * alpha;
        Ok(Self { xi_lo: c - half, xi_hi: c + half, c, len, slab_lo: rat(3, 5) - seven_a, slab_hi: rat(73, 5) + seven_a })
    }

    /// Slope and the two intercepts of the bounding lines `ω = m ξ + b`.
    fn lines(&self) -> (Rational, Rational, Rational) {
        let c2 = self.c * self.c;
        let m = rat(3, 4) * c2;
        let base = -(rat(1, 2) * c2 * self.c);
        let scale = self.c * self.len * self.len;
        (m, base + self.slab_lo * scale, base + self.slab_hi * scale)
    }

    pub fn contains(&self, omega: &Rational, xi: &Rational) -> bool {
        if *xi < self.xi_lo || *xi > self.xi_hi {
            return false;
        }
        let (m, b_lo, b_hi) = self.lines();
        let base = m * xi;
        *omega >= base + b_lo && *omega <= base + b_hi
    }

    /// Exact intersection test.
    pub fn intersects(&self, other: &Self) -> bool {
        let mut lo = self.xi_lo.max(other.xi_lo);
        let mut hi = self.xi_hi.min(other.xi_hi);
        if lo > hi {
            return false;
        }
        let (m1, lo1, hi1) = self.lines();
        let (m2, lo2, hi2) = other.lines();
        // lower_a(ξ) ≤ upper_b(ξ)  ⇔  (m_a − m_b) ξ ≤ hi_b − lo_a.
        for (s, r) in [(m1 - m2, hi2 - lo1), (m2 - m1, hi1 - lo2)] {
            match s.cmp(&Rational::zero()) {
                Ordering::Equal => {
                    if r.is_negative() {
                        return false;
                    }
                }
                Ordering::Greater => hi = hi.min(r / s),
                Ordering::Less => lo = lo.max(r / s),
            }
        }
        lo <= hi
    }
}

/// Floating copy of a parallelogram used to screen candidates.
#[derive(Debug, Clone, Copy)]
struct Shadow {
    xi_lo: f64,
    xi_hi: f64,
    m: f64,
    b_lo: f64,
    b_hi: f64,
}

impl Shadow {
    fn of(p: &Parallelogram) -> Self {
        let (m, b_lo, b_hi) = p.lines();
        Self { xi_lo: to_f64(&p.xi_lo), xi_hi: to_f64(&p.xi_hi), m: to_f64(&m), b_lo: to_f64(&b_lo), b_hi: to_f64(&b_hi) }
    }

    /// `Some(answer)` when the floating test is decisive, `None` near ties.
    fn intersects(&self, o: &Self) -> Option<bool> {
        let mut lo = self.xi_lo.max(o.xi_lo);
        let mut hi = self.xi_hi.min(o.xi_hi);
        let scale = lo.abs().max(hi.abs()).max(1.0);
        let tol = 1e-9 * scale;
        for (s, r, rs) in [
            (self.m - o.m, o.b_hi - self.b_lo, o.b_hi.abs().max(self.b_lo.abs())),
            (o.m - self.m, self.b_hi - o.b_lo, self.b_hi.abs().max(o.b_lo.abs())),
        ] {
            let mscale = self.m.abs().max(o.m.abs());
            if s.abs() <= 1e-12 * mscale {
                if r.abs() <= 1e-9 * rs.max(1.0) {
                    return None;
                }
                if r < 0.0 {
                    return Some(false);
                }
            } else if s > 0.0 {
                hi = hi.min(r / s);
            } else {
                lo = lo.max(r / s);
            }
        }
        if hi - lo > tol {
            Some(true)
        } else if lo - hi > tol {
            Some(false)
        } else {
            None
        }
    }
}

/// Result of the bounded-overlap scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapSummary {
    pub pairs: usize,
    pub max_count: usize,
    pub argmax: Option<(DyadicInterval, DyadicInterval)>,
    /// Candidate tests settled by exact arithmetic.
    pub exact_tests: usize,
}

/// For each pair of `family`, the number of pairs of `family` whose dilated
/// parallelograms meet its own; returns the maximum.
pub fn parallelogram_overlap(family: &[(DyadicInterval, DyadicInterval)], alpha: &Rational) -> Result<OverlapSummary> {
    check_alpha(alpha)?;
    let paras: Vec<Parallelogram> =
        family.iter().map(|(a, b)| Parallelogram::for_pair(a, b, alpha)).collect::<Result<_>>()?;
    let shadows: Vec<Shadow> = paras.iter().map(Shadow::of).collect();

    // Bucket by interval level; within a bucket all ξ-ranges have equal width,
    // so ξ-overlap candidates form a contiguous run after sorting by xi_lo.
    let mut levels: Vec<i32> = family.iter().map(|(a, _)| a.ell).collect();
    levels.sort_unstable();
    levels.dedup();
    let buckets: Vec<(f64, Vec<usize>)> = levels
        .iter()
        .map(|&ell| {
            let mut idx: Vec<usize> = (0..family.len()).filter(|&i| family[i].0.ell == ell).collect();
            idx.sort_by(|&a, &b| shadows[a].xi_lo.total_cmp(&shadows[b].xi_lo));
            let width = idx.first().map_or(0.0, |&i| shadows[i].xi_hi - shadows[i].xi_lo);
            (width, idx)
        })
        .collect();

    let counts: Vec<(usize, usize)> = (0..paras.len())
        .into_par_iter()
        .map(|i| {
            let s = shadows[i];
            let slack = 1e-9 * s.xi_hi.abs().max(1.0);
            let mut count = 0;
            let mut exact = 0;
            for (width, idx) in &buckets {
                let start = idx.partition_point(|&j| shadows[j].xi_lo < s.xi_lo - width - slack);
                let end = idx.partition_point(|&j| shadows[j].xi_lo <= s.xi_hi + slack);
                for &j in &idx[start..end] {
                    let hit = match s.intersects(&shadows[j]) {
                        Some(v) => v,
                        None => {
                            exact += 1;
                            paras[i].intersects(&paras[j])
                        }
                    };
                    count += usize::from(hit);
                }
            }
            (count, exact)
        })
        .collect();

    let mut best: Option<usize> = None;
    for (i, c) in counts.iter().enumerate() {
        if best.map_or(true, |b| c.0 > counts[b].0) {
            best = Some(i);
        }
    }
    Ok(OverlapSummary {
        pairs: family.len(),
        max_count: best.map_or(0, |b| counts[b].0),
        argmax: best.map(|b| family[b]),
        exact_tests: counts.iter().map(|c| c.1).sum(),
    })
}

/// Default family for `Q(u)`: every dyadic interval meeting the hull of the
/// support of `û`, with `2^ℓ` between the grid step and the window width.
pub fn default_family(u: &FreqProfile) -> Vec<DyadicInterval> {
    let nodes = u.grid.nodes();
    let Some(first) = u.samples.iter().position(|z| z.norm_sqr() > 0.0) else {
        return Vec::new();
    };
    let last = u.samples.iter().rposition(|z| z.norm_sqr() > 0.0).unwrap_or(first);
    let (s_lo, s_hi) = (nodes[first], nodes[last]);
    let ell_min = u.grid.step().log2().ceil() as i32;
    let ell_max = (u.grid.xi_max - u.grid.xi_min).log2().floor() as i32;
    let mut out = Vec::new();
    for ell in ell_min..=ell_max {
        let size = 2f64.powi(ell);
        let k_lo = (s_lo / size).floor() as i64;
        let k_hi = (s_hi / size).floor() as i64;
        out.extend((k_lo..=k_hi).map(|k| DyadicInterval::new(k, ell)));
    }
    out
}

/// Contribution of a single interval to `Q(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalTerm {
    pub interval: DyadicInterval,
    /// `|c(I)|^{-1/6} |I|^{-1/2} max_grid |Ψ_{1/6}[u_I]|`.
    pub value: f64,
    /// `|c(I)|^{-1/6} |I|^{-1/2} (2π)^{-1/2} Σ_{ξ_j ∈ I} w_j |ξ_j|^{1/6} |û_j|`.
    pub l1_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedFunctional {
    pub q: f64,
    pub argmax: DyadicInterval,
    pub bound_max: f64,
    pub terms: Vec<IntervalTerm>,
}

/// `Q(u) = max_I |c(I)|^{-1/6} |I|^{-1/2} ‖Ψ_{1/6}[u_I]‖_∞` with the sup taken
/// over the grid, together with the per-interval `L¹` upper bounds.
pub fn refined_functional(u: &FreqProfile, grid: &SpaceTimeGrid, family: &[DyadicInterval]) -> Result<RefinedFunctional> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let plan = ExtensionPlan::new(Extension::Airy { gamma: 1.0 / 6.0 }, u.grid, *grid)?;
    let nodes = u.grid.nodes();
    let w = u.grid.weights();
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let terms: Vec<IntervalTerm> = family
        .iter()
        .map(|iv| {
            let (a, b) = iv.bounds_f64();
            let scale = to_f64(&iv.center()).abs().powf(-1.0 / 6.0) * to_f64(&iv.length()).powf(-0.5);
            let ui = restrict_frequency(u, a, b);
            let sup = if ui.is_zero() { 0.0 } else { plan.apply(&ui.samples).iter().map(|z| z.norm()).fold(0.0, f64::max) };
            let l1: f64 = nodes
                .iter()
                .zip(&w)
                .zip(&ui.samples)
                .map(|((xi, w), z)| w * xi.abs().powf(1.0 / 6.0) * z.norm())
                .sum::<f64>()
                * norm;
            IntervalTerm { interval: *iv, value: scale * sup, l1_bound: scale * l1 }
        })
        .collect();
    let best = terms.iter().fold(&terms[0], |acc, t| if t.value > acc.value { t } else { acc });
    Ok(RefinedFunctional {
        q: best.value,
        argmax: best.interval,
        bound_max: terms.iter().map(|t| t.l1_bound).fold(0.0, f64::max),
        terms,
    })
}

/// `‖Ψ_{1/6}u‖_{L⁶}`, `Q(u)` and the curve `θ ↦ Q^θ ‖u‖^{1−θ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedRatio {
    pub l6_norm: f64,
    pub q: f64,
    pub l2_norm: f64,
    /// `(θ, Q^θ ‖u‖₂^{1−θ}, l6_norm / that)`.
    pub ratio_curve: Vec<(f64, f64, f64)>,
}

pub fn refined_ratio(u: &FreqProfile, grid: &SpaceTimeGrid, family: &[DyadicInterval], thetas: &[f64]) -> Result<RefinedRatio> {
    let rf = refined_functional(u, grid, family)?;
    if !(rf.q > 0.0) {
        return Err(Error::domain("refined functional vanishes; ratio undefined"));
    }
    let field = ExtensionPlan::new(Extension::Airy { gamma: 1.0 / 6.0 }, u.grid, *grid)?.field(u)?;
    let l6 = mixed_norm(&field, 6.0, 6.0)?;
    let l2 = u.l2_mass().sqrt();
    let ratio_curve = thetas
        .iter()
        .map(|&th| {
            let b = rf.q.powf(th) * l2.powf(1.0 - th);
            (th, b, l6 / b)
        })
        .collect();
    Ok(RefinedRatio { l6_norm: l6, q: rf.q, l2_norm: l2, ratio_curve })
}

/// `‖Ψ_{1/6}[u_I] Ψ_{1/6}[v_{I'}]‖_{L^q_{t,x}} / (|c(I)|^{1/3−1/q} |I|^{1−3/q} ‖u‖ ‖v‖)`.
pub fn bilinear_ratio(
    u: &FreqProfile,
    v: &FreqProfile,
    i: &DyadicInterval,
    j: &DyadicInterval,
    q: f64,
    grid: &SpaceTimeGrid,
) -> Result<f64> {
    if !sim_related(i, j) || !((i.in_positive() && j.in_positive()) || (i.in_negative() && j.in_negative())) {
        return Err(Error::PreconditionViolation(format!("{i} and {j} must be related and on one side of 0")));
    }
    if !(2.0..3.0).contains(&q) {
        return Err(Error::domain(format!("bilinear exponent must lie in [2, 3), got {q}")));
    }
    let (mu, mv) = (u.l2_mass(), v.l2_mass());
    if mu == 0.0 || mv == 0.0 {
        return Ok(0.0);
    }
    let field = |w: &FreqProfile, iv: &DyadicInterval| -> Result<Vec<Complex64>> {
        let (a, b) = iv.bounds_f64();
        let r = restrict_frequency(w, a, b);
        Ok(ExtensionPlan::new(Extension::Airy { gamma: 1.0 / 6.0 }, w.grid, *grid)?.apply(&r.samples))
    };
    let fu = field(u, i)?;
    let fv = field(v, j)?;
    let prod: Vec<Complex64> = fu.iter().zip(&fv).map(|(a, b)| a * b).collect();
    let num = mixed_norm_pow_values(grid, &prod, q, q)?.powf(1.0 / q);
    let c = to_f64(&i.center()).abs();
    let len = to_f64(&i.length());
    Ok(num / (c.powf(1.0 / 3.0 - 1.0 / q) * len.powf(1.0 - 3.0 / q) * (mu * mv).sqrt()))
}
