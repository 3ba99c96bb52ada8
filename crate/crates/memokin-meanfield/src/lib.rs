//! Mean-field reference solutions and the coupling experiment.
//!
//! The kinetic equation is solved by weighted-particle quadrature: the
//! initial density is discretized into a weighted ensemble (deterministic
//! grid rule or iid sampling) and integrated with the same stepper as the
//! N-particle system. The coupling experiment runs an N-particle system
//! and its mean-field twin — same initial data, but the twin feels the
//! force generated by the reference solution instead of its own empirical
//! density — and reports how far the two drift apart, together with the
//! a-priori constant `C(T)` that bounds the expected drift at rate
//! `1/sqrt(N)`.

pub mod constants;
pub mod coupling;
pub mod density;
pub mod solve;

pub use constants::{c_of_t, MeanfieldConstants};
pub use coupling::{
    coupled_run, coupled_run_from, coupling_sweep, CouplingReport, CouplingSweep,
};
pub use density::{
    discretize_density, DensityShape, DensitySpec, DiscretizationMode,
};
pub use solve::{phase_cloud, solve_meanfield, spatial_cloud, MeanfieldTrajectory};

use thiserror::Error;

/// Errors from discretization, mean-field solves, and the coupling runs.
#[derive(Debug, Error)]
pub enum MeanfieldError {
    /// Failure inside the particle integrator.
    #[error(transparent)]
    Dynamics(#[from] memokin_dynamics::DynamicsError),
    /// Failure inside an optimal-transport evaluation.
    #[error(transparent)]
    Transport(#[from] memokin_transport::TransportError),
    /// The confining potential has no global Hessian bound, so the
    /// error constant is undefined.
    #[error("the confining potential has no global hessian bound")]
    UnboundedHessian,
    /// The density specification cannot be discretized as requested.
    #[error("bad density spec: {detail}")]
    BadSpec { detail: &'static str },
    /// The coupled run and the reference trajectory do not fit together
    /// (dimension, start time, or coverage).
    #[error("mismatched runs: {detail}")]
    MismatchedRuns { detail: &'static str },
}
