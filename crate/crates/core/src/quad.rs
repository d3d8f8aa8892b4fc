//! Quadrature weights and deterministic summation.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadRule {
    Trapezoid,
    Simpson,
}

impl QuadRule {
    /// Weights for `n` equally spaced nodes on `[a, b]`.
    pub fn weights(self, n: usize, a: f64, b: f64) -> Vec<f64> {
        assert!(n >= 2, "quadrature needs at least two nodes");
        let h = (b - a) / (n - 1) as f64;
        match self {
            QuadRule::Trapezoid => {
                let mut w = vec![h; n];
                w[0] = 0.5 * h;
                w[n - 1] = 0.5 * h;
                w
            }
            QuadRule::Simpson => {
                assert!(n % 2 == 1, "Simpson rule needs an odd node count");
                (0..n)
                    .map(|i| {
                        let c = if i == 0 || i == n - 1 {
                            1.0
                        } else if i % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        c * h / 3.0
                    })
                    .collect()
            }
        }
    }
}

impl std::str::FromStr for QuadRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trapezoid" => Ok(QuadRule::Trapezoid),
            "simpson" => Ok(QuadRule::Simpson),
            other => Err(format!("unknown quadrature rule '{other}'")),
        }
    }
}

/// Pairwise (cascade) summation with a fixed split order, so results do not
/// depend on thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// `(1/2π) ∫_0^{2π} f(θ) dθ` by the periodic trapezoid rule on `nodes` points.
pub fn periodic_mean(nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = std::f64::consts::TAU / nodes as f64;
    let vals: Vec<f64> = (0..nodes).map(|k| f(k as f64 * h)).collect();
    pairwise_sum(&vals) / nodes as f64
}
