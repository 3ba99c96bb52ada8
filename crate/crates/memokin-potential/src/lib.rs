//! External potential library with hypothesis certification.
//!
//! Confinement enters the long-time statements through a small set of
//! structural hypotheses on `V`: nonnegativity, radial monotonicity, and a
//! gradient bound `|grad V| <= alpha + beta V`. This crate provides the
//! built-in radial potentials with exact derivative evaluators and the
//! sampling-based certifier that reports which hypotheses hold.

pub mod certify;
pub mod potential;

pub use certify::{certify_hypotheses, HypothesisReport};
pub use potential::{ExternalPotential, PotentialKind};

use memokin_numerics::NumericsError;
use thiserror::Error;

/// Failures constructing potentials.
#[derive(Debug, Error)]
pub enum PotentialError {
    /// A tabulated radial profile contained invalid values.
    #[error("invalid radial potential table: {detail}")]
    InvalidRadialTable { detail: String },
    /// Error from the shared numerics layer.
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
