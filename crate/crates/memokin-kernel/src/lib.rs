//! Memory kernel synthesis for the retarded medium coupling.
//!
//! The medium's back-reaction on the particles enters through a scalar
//! kernel `p(t)` acting on the history of the density. This crate builds
//! tabulated kernels from the medium form factor along two independent
//! routes — a radial frequency integral and an autocorrelation
//! factorization — together with the frequency-domain closed form and an
//! invariant audit. Cross-route agreement is the primary correctness
//! check; the two routes share no quadrature machinery.

pub mod autocorr;
pub mod fractional;
pub mod radial;
pub mod spectrum;
pub mod table;
pub mod validate;

pub use autocorr::synthesize_p_autocorrelation;
pub use fractional::{
    quarter_laplacian_singular, quarter_laplacian_spectral, QUARTER_LAPLACIAN_CONSTANT,
};
pub use radial::synthesize_p_radial;
pub use spectrum::{p_hat_spectrum, table_spectrum, SpectralKernel};
pub use table::{KernelTable, MediumParams, TimeGrid, DEFAULT_TOL_TAIL};
pub use validate::{validate_kernel, CheckResult, ValidationReport};

use memokin_numerics::NumericsError;
use thiserror::Error;

/// Failures during kernel synthesis.
#[derive(Debug, Error)]
pub enum KernelError {
    /// The ambient dimension is below the supported range (n >= 3).
    #[error("unsupported medium dimension n = {n} (need n >= 3)")]
    UnsupportedDimension { n: usize },
    /// A quadrature refinement failed to settle within tolerance.
    #[error("quadrature for {what} did not converge: delta {delta:e} > tol {tol:e}")]
    QuadratureNotConverged { what: &'static str, delta: f64, tol: f64 },
    /// The singular-integral fractional Laplacian failed to converge,
    /// typically because the integrand is not smooth at the probe point.
    #[error("fractional Laplacian at x = {x} did not converge: delta {delta:e} > tol {tol:e}")]
    FractionalLaplacianDiverged { x: f64, delta: f64, tol: f64 },
    /// Error from the shared numerics layer.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
