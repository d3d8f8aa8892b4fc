//! Seeded randomness. Every experiment draws from a ChaCha stream keyed by a
//! single 64-bit seed, so runs are reproducible across platforms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{FreqGrid, FreqProfile};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Standard complex normal `(N(0,1) + i N(0,1)) / sqrt 2` via Box-Muller.
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    Complex64::from_polar((-u1.ln()).sqrt(), std::f64::consts::TAU * u2)
}

/// Samples with independent complex normal values, tapered by a smooth
/// window so the profile vanishes at the edges of `grid`.
pub fn random_profile(grid: FreqGrid, rng: &mut impl Rng) -> FreqProfile {
    let (a, b) = (grid.xi_min, grid.xi_max);
    let samples = grid
        .nodes()
        .into_iter()
        .map(|xi| {
            let s = (xi - a) / (b - a);
            let taper = (std::f64::consts::PI * s).sin().powi(2);
            complex_normal(rng) * taper
        })
        .collect();
    FreqProfile { grid, samples }
}

/// A smooth random profile: a sum of `bumps` Gaussians with random centres
/// inside `[lo, hi]`, widths in `[0.3, 1]` and complex amplitudes.
pub fn smooth_random_profile(grid: FreqGrid, lo: f64, hi: f64, bumps: usize, rng: &mut impl Rng) -> FreqProfile {
    let params: Vec<(f64, f64, Complex64)> = (0..bumps)
        .map(|_| (rng.gen_range(lo..hi), rng.gen_range(0.3..1.0), complex_normal(rng)))
        .collect();
    let samples = grid
        .nodes()
        .into_iter()
        .map(|xi| {
            params.iter().fold(Complex64::new(0.0, 0.0), |acc, &(c, w, a)| {
                let z = (xi - c) / w;
                acc + a * (-0.5 * z * z).exp()
            })
        })
        .collect();
    FreqProfile { grid, samples }
}
