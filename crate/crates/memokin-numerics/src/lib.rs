//! Shared numerical building blocks: Gauss–Legendre quadrature, cubic
//! splines, FFT helpers, deterministic (thread-count independent)
//! reductions, sampling grids, sphere/ball constants, and seeded RNG
//! construction.
//!
//! Everything here is scenario-agnostic; the physics lives downstream.

pub mod fft;
pub mod grid;
pub mod linfit;
pub mod quad;
pub mod reduce;
pub mod rng;
pub mod sphere;
pub mod spline;

/// Errors shared by the numerical building blocks.
#[derive(Debug, thiserror::Error)]
pub enum NumericsError {
    /// Successive quadrature refinements failed to settle below tolerance.
    #[error("quadrature not converged: estimate {estimate}, last refinement changed by {delta} (tol {tol})")]
    QuadratureNotConverged { estimate: f64, delta: f64, tol: f64 },
    /// Spline construction received inconsistent inputs.
    #[error("invalid spline input: {0}")]
    InvalidSplineInput(String),
}
