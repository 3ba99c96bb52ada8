//! Particle dynamics with a retarded memory force.
//!
//! The force on a particle combines a confining potential, a transient
//! drive, and a memory term: the interaction field radiated by the whole
//! system in the past, weighted by the scalar memory kernel. This crate
//! supplies the particle state, the snapshot history that backs the memory
//! integral, the force evaluation with its pruned and gridded fast paths,
//! a velocity-Verlet integrator, and the derived probes used by the
//! analysis layers (frozen-flow maps, the radial shell scenario, the
//! characteristic speed bound, and the uniqueness weight).

mod charbound;
mod drive;
mod ensemble;
mod flow;
mod force;
mod history;
mod integrate;
mod shell;
mod uniqueness;

pub use charbound::{BoundViolation, CharacteristicBoundCheck};
pub use drive::ExternalDrive;
pub use ensemble::ParticleEnsemble;
pub use flow::{FlowMapProbe, FrozenField};
pub use force::{brute_force_reference, memory_force, total_force, ForceField};
pub use history::{
    interpolate_field, trapezoid_coefficients, CellMap, HistoryBuffer, HistoryPolicy, Snapshot,
};
pub use integrate::Simulation;
pub use shell::{
    escape_interaction_constant, escape_rate, shell_scenario, sphere_average, ShellTrajectory,
};
pub use uniqueness::{spread_profile, uniqueness_weight, SpreadProfile};

/// Errors surfaced by the dynamics layer.
#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    /// The memory integral needs history back to `needed`, but the buffer
    /// only reaches `earliest`.
    #[error("history underrun: need snapshots back to t = {needed}, earliest stored is {earliest}")]
    HistoryUnderrun { needed: f64, earliest: f64 },
    /// A force evaluation produced a non-finite component.
    #[error("non-finite force on particle {particle}")]
    NonFiniteForce { particle: usize },
    /// A particle left the gridded-history domain.
    #[error("particle coordinate {coordinate} escaped the field grid along axis {axis}")]
    DomainEscape { coordinate: f64, axis: usize },
    /// Propagated numerics failure.
    #[error(transparent)]
    Numerics(#[from] memokin_numerics::NumericsError),
    /// Propagated form-factor failure.
    #[error(transparent)]
    FormFactor(#[from] memokin_formfactor::FormFactorError),
}
