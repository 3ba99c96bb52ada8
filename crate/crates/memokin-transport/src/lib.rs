//! Truncated-cost optimal transport between weighted particle clouds.
//!
//! The ground cost is the bounded metric `min(|z1 - z2|, 1)`. The crate
//! provides an exact assignment route for equal-count uniform clouds, an
//! exact min-cost-flow route for general weights at moderate sizes, an
//! entropic route with a certified duality gap for large clouds, plus the
//! derived quantities built on the distance: a dual-norm lower bound from
//! certified test functions, the Hölder-1/2 seminorm of a density path,
//! and the frozen-flow stationarity residual.

mod analysis;
mod cloud;
mod entropic;
mod exact;
mod oracle;

pub use analysis::{
    default_trial_family, holder_seminorm, quantile_upper_bound_1d, seq_residual,
    w1_truncated, w_dual_lower_bound, HolderReport, TestFunction, EXACT_POINT_LIMIT,
};
pub use cloud::{truncated_cost, WeightedCloud, COST_CAP};
pub use entropic::{w1_entropic, EntropicParams, EntropicSolution};
pub use exact::{solve_assignment, w1_assignment, w1_network};
pub use oracle::{exhaustive_uniform, transportation_simplex};

use thiserror::Error;

/// Errors from cloud validation and the transport solvers.
#[derive(Debug, Error)]
pub enum TransportError {
    /// A cloud failed basic validation.
    #[error("malformed cloud: {detail}")]
    MalformedCloud {
        /// What was wrong with the input.
        detail: &'static str,
    },
    /// The two clouds carry different total masses.
    #[error("total masses differ: {mass_mu} vs {mass_nu}")]
    MassMismatch {
        /// Mass of the first argument.
        mass_mu: f64,
        /// Mass of the second argument.
        mass_nu: f64,
    },
    /// The two clouds live in different ambient dimensions.
    #[error("ambient dimensions differ: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Dimension of the first argument.
        expected: usize,
        /// Dimension of the second argument.
        got: usize,
    },
    /// An iterative solver hit its safety cap without finishing.
    #[error("transport solver stalled: {detail}")]
    SolverStalled {
        /// Which safeguard tripped.
        detail: &'static str,
    },
    /// A snapshot series cannot support the requested seminorm.
    #[error("degenerate snapshot series: {detail}")]
    DegenerateSeries {
        /// What the series is missing.
        detail: &'static str,
    },
}

/// One entry of a sparse transport plan: `mass` moved from source point
/// `from` to target point `to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    /// Index into the source cloud.
    pub from: usize,
    /// Index into the target cloud.
    pub to: usize,
    /// Transported mass.
    pub mass: f64,
}

/// Which algorithm produced a [`TransportResult`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    /// Exact assignment on equal-count uniform clouds.
    Assignment,
    /// Exact min-cost flow on the sparsified bipartite graph.
    NetworkLp,
    /// Entropic regularization at the recorded strength.
    Entropic {
        /// Regularization parameter used.
        epsilon: f64,
    },
}

/// Result of a truncated-W1 solve.
#[derive(Debug, Clone)]
pub struct TransportResult {
    /// The distance value (for the entropic route: a certified upper bound).
    pub distance: f64,
    /// Sparse optimal plan, present for the exact routes.
    pub plan: Option<Vec<PlanEntry>>,
    /// Algorithm that produced the value.
    pub method: SolveMethod,
    /// Certified duality gap (entropic route only): the optimum lies within
    /// `[distance - gap, distance]`.
    pub gap: Option<f64>,
}
