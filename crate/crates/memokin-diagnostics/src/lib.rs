//! Run-time diagnostics for memory-force particle systems.
//!
//! Everything in this crate consumes recorded trajectories (or single
//! ensembles) and produces scalar certificates: energy ledgers, a priori
//! constant tables, dissipation functionals, equilibrium residuals, cluster
//! partitions, mass lower bounds and phase-time estimates.  The functions
//! here never advance dynamics themselves; they only measure what a run
//! already produced, so each one can be checked against closed-form values
//! on hand-built states.
//!
//! Layout:
//!
//! * [`energy`] — kinetic/potential/self-interaction bookkeeping per state.
//! * [`ledger`] — the a priori constant table ([`ConstantsLedger`]) built
//!   from scenario data alone, before any run.
//! * [`fields`] — functionals of the interaction field along a trajectory:
//!   the dissipation form `k(T)`, the windowed-in-time field functional and
//!   the relaxation series.
//! * [`equilibrium`] — stationarity residuals, cluster partitions, the mass
//!   lower-bound constant and its empirical checks, and phase-time
//!   extraction.
//! * [`semistat`] — the Hölder-in-time transfer check between spatial
//!   marginals.

pub mod energy;
pub mod equilibrium;
pub mod fields;
pub mod ledger;
pub mod semistat;

pub use energy::{energy_record, energy_series, EnergyRecord};
pub use equilibrium::{
    chi_r_integral, cluster_bound, cluster_partition, equilibrium_residual, lower_bound_report,
    phase_times, theta_bound, ClusterPartition, EquilibriumResidual, LowerBoundReport, PhaseTimes,
};
pub use fields::{
    dissipation_kt, key_l2_functional, relaxation_series, DissipationSeries, KeyL2Report,
    RelaxationSeries,
};
pub use ledger::ConstantsLedger;
pub use semistat::{semistat_constant, semistat_holder_check, SemistatPair, SemistatReport, SemistatStatus};

use thiserror::Error;

/// Failure modes of the diagnostic layer.
///
/// None of these indicate a bug in the recorded run; they flag inputs the
/// diagnostics cannot certify (too short, too coarse, or genuinely ambiguous).
#[derive(Debug, Error)]
pub enum DiagnosticsError {
    /// A pair of particles sits in the buffer zone `[r/2, r)` between two
    /// blocks, so the partition at scale `r` is not clean.  The partition
    /// itself is still returned by [`cluster_partition`]; this error is only
    /// produced when a caller insists on an unambiguous one.
    #[error("ambiguous cluster partition: particles {i} and {j} at distance {distance:.6e} fall in the buffer zone")]
    AmbiguousPartition { i: usize, j: usize, distance: f64 },

    /// A phase-time query could not be answered because the recorded horizon
    /// ends while the series is still above threshold.
    #[error("recorded horizon too short: {detail}")]
    HorizonTooShort { detail: &'static str },

    /// The input series is unusable (empty, single point, or non-uniform
    /// time spacing where uniform spacing is required).
    #[error("degenerate input series: {detail}")]
    DegenerateSeries { detail: &'static str },

    /// Mismatched dimensions or lengths between paired inputs.
    #[error("mismatched inputs: {detail}")]
    MismatchedInputs { detail: &'static str },

    /// An optimal-transport subproblem failed.
    #[error(transparent)]
    Transport(#[from] memokin_transport::TransportError),

    /// A hypothesis certification failed (for example the external potential
    /// admits no global Hessian bound, so no growth constant exists).
    #[error("hypothesis not certifiable: {detail}")]
    Hypothesis { detail: &'static str },
}
