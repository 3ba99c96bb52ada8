//! Radial coupling profiles and the interaction kernels built from them.
//!
//! A smooth compactly supported radial profile `sigma1` determines the
//! interaction kernel `Sigma = sigma1 * sigma1`, tabulated radially with
//! spline derivatives, together with the control constants `Lambda_k` and
//! the monotonicity/positivity certificates the rest of the workspace
//! relies on. Radial Fourier transforms are provided through hyperplane
//! projections and used by the memory-kernel synthesis.

pub mod controle;
pub mod convolve;
pub mod kernel;
pub mod profile;
pub mod projection;

pub use controle::{controle_sides, AtomicMeasure};
pub use kernel::{InteractionKernel, RadialTable};
pub use profile::RadialProfile;
pub use projection::{projection_value, ProjectedProfile};

use thiserror::Error;

/// Errors from kernel construction and its quadratures.
#[derive(Debug, Error)]
pub enum FormFactorError {
    #[error("unsupported spatial dimension {dim}; expected 1, 2, or 3")]
    UnsupportedDimension { dim: usize },
    #[error("convolution quadrature did not converge at r = {r}: |delta| = {delta:.3e} exceeds {tol:.3e}")]
    QuadratureNotConverged { r: f64, delta: f64, tol: f64 },
    #[error(transparent)]
    Numerics(#[from] memokin_numerics::NumericsError),
}
