//! Numerical laboratory for the Airy–Strichartz maximization problem.
//!
//! The crate evaluates Fourier extension operators (Airy, Schrödinger and the
//! interpolating family `T_{γ,δ}`) on truncated frequency windows, computes
//! mixed `L^p_t L^q_x` norms and the associated quotients, and provides the
//! experiments around the compactness threshold `a_p · 𝒮_p`: the explicit
//! constant `a_p`, two-bubble concentration, dyadic combinatorics,
//! local smoothing, and projected gradient ascent.
//!
//! All reductions run in a fixed order, so results are reproducible bit for
//! bit regardless of the number of worker threads.

pub mod bubbles;
pub mod constants;
pub mod domain;
pub mod dyadic;
pub mod error;
pub mod maximize;
pub mod norms;
pub mod propagators;
pub mod quad;
pub mod rng;
pub mod smoothing;

pub use domain::{make_exponents, ExponentTriple, FreqGrid, FreqProfile, SpaceTimeField, SpaceTimeGrid};
pub use error::{Error, Result};
pub use propagators::{Extension, ExtensionPlan, SymmetryElement};
pub use quad::QuadRule;
