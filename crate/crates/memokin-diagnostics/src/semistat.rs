//! Hölder-in-time transfer check for the spatial marginal.
//!
//! Along a run whose kinetic distance to the stationary set decays, the
//! spatial marginal cannot wander: for every pair of times `s < t`,
//!
//! ```text
//! W(rho_t, rho_s) <= H(m, M) | int_s^t W(f_tau, SEq)^{1/2} d tau |^{1/2},
//! H(m, M) = ( m (d+1) (8 M^{1/2} + 3 (2 m)^{1/2}) )^{1/2},
//! ```
//!
//! with `m` the mass and `M` an energy bound along the run.  The bounded
//! dual metric `W` is not computed directly; it is sandwiched between
//! truncated 1-Wasserstein distances, `W1/2 <= W <= 2 W1`, and the check
//! classifies each time pair three ways:
//!
//! * **certified** — the inequality holds even with the unfavorable ends of
//!   the sandwich on both sides (`2 W1(rho) <=` right side built from
//!   `W1_seq / 2`);
//! * **violated** — it fails with the favorable ends on both sides
//!   (`W1(rho)/2 >` right side built from `2 W1_seq`), falsifying the
//!   original inequality;
//! * **inconclusive** — the sandwich is too loose to decide.

use crate::DiagnosticsError;
use memokin_dynamics::ParticleEnsemble;
use memokin_meanfield::spatial_cloud;
use memokin_transport::w1_truncated;
use serde::{Deserialize, Serialize};

/// Sandwich factor: `W >= W1 / 2`.
const LOWER_FACTOR: f64 = 0.5;
/// Sandwich factor: `W <= 2 W1`.
const UPPER_FACTOR: f64 = 2.0;

/// `H(m, M) = ( m (d+1) (8 sqrt(M) + 3 sqrt(2 m)) )^{1/2}`.
pub fn semistat_constant(mass: f64, energy_bound: f64, dim: usize) -> f64 {
    assert!(mass > 0.0 && energy_bound >= 0.0);
    (mass * (dim as f64 + 1.0) * (8.0 * energy_bound.sqrt() + 3.0 * (2.0 * mass).sqrt())).sqrt()
}

/// Verdict for one time pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemistatStatus {
    /// Inequality holds with the unfavorable sandwich ends.
    Certified,
    /// Sandwich too loose to certify or falsify.
    Inconclusive,
    /// Inequality fails even with the favorable sandwich ends.
    Violated,
}

/// One checked time pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemistatPair {
    /// Earlier time.
    pub s: f64,
    /// Later time.
    pub t: f64,
    /// Truncated `W1` between the two spatial marginals.
    pub lhs_w1: f64,
    /// Right side with the unfavorable sandwich end
    /// (`H | int (W1_seq / 2)^{1/2} |^{1/2}`); certification compares
    /// `2 lhs_w1` against this.
    pub rhs_lower: f64,
    /// Right side with the favorable sandwich end
    /// (`H | int (2 W1_seq)^{1/2} |^{1/2}`); violation compares
    /// `lhs_w1 / 2` against this.
    pub rhs_upper: f64,
    /// Verdict.
    pub status: SemistatStatus,
    /// Distance from falsification, `rhs_upper - lhs_w1 / 2`
    /// (negative exactly when violated).
    pub margin: f64,
}

/// Full report of the Hölder transfer check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemistatReport {
    /// Transfer constant `H(m, M)` used on the right side.
    pub h_value: f64,
    /// Mass `m` it was built from.
    pub mass: f64,
    /// Energy bound `M` it was built from.
    pub energy_bound: f64,
    /// Sandwich factor on the lower side (`W >= lower_factor * W1`).
    pub lower_factor: f64,
    /// Sandwich factor on the upper side (`W <= upper_factor * W1`).
    pub upper_factor: f64,
    /// Every checked pair, ordered by `(s, t)`.
    pub pairs: Vec<SemistatPair>,
    /// Count of certified pairs.
    pub certified: usize,
    /// Count of inconclusive pairs.
    pub inconclusive: usize,
    /// Count of violated pairs.
    pub violated: usize,
}

/// Run the Hölder transfer check over every pair of recorded times.
///
/// `states` are the recorded ensembles (increasing times, any spacing) and
/// `seq_values[i]` the truncated-`W1` distance of the kinetic solution to
/// the stationary set at `states[i].t` — the documented proxy for
/// `W(f_tau, SEq)` in the time integral, entering through the same sandwich
/// as the left side.  The integral between two recorded times is the
/// trapezoid rule over the recorded nodes.
pub fn semistat_holder_check(
    states: &[ParticleEnsemble],
    seq_values: &[f64],
    mass: f64,
    energy_bound: f64,
) -> Result<SemistatReport, DiagnosticsError> {
    if states.len() < 2 {
        return Err(DiagnosticsError::DegenerateSeries {
            detail: "need at least two recorded states",
        });
    }
    if states.len() != seq_values.len() {
        return Err(DiagnosticsError::MismatchedInputs {
            detail: "one stationary-set distance per recorded state required",
        });
    }
    let h_value = semistat_constant(mass, energy_bound, states[0].dim);

    let clouds: Vec<_> = states.iter().map(spatial_cloud).collect();
    let times: Vec<f64> = states.iter().map(|s| s.t).collect();

    // Cumulative trapezoid integrals of the two sandwiched integrands, so
    // each pair costs O(1) on the right side.
    let n = states.len();
    let mut cum_lower = vec![0.0; n];
    let mut cum_upper = vec![0.0; n];
    for i in 1..n {
        let dt = times[i] - times[i - 1];
        if dt <= 0.0 {
            return Err(DiagnosticsError::DegenerateSeries {
                detail: "recorded times must be strictly increasing",
            });
        }
        let f_lo = |v: f64| (LOWER_FACTOR * v).max(0.0).sqrt();
        let f_hi = |v: f64| (UPPER_FACTOR * v).max(0.0).sqrt();
        cum_lower[i] =
            cum_lower[i - 1] + 0.5 * dt * (f_lo(seq_values[i - 1]) + f_lo(seq_values[i]));
        cum_upper[i] =
            cum_upper[i - 1] + 0.5 * dt * (f_hi(seq_values[i - 1]) + f_hi(seq_values[i]));
    }

    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let (mut certified, mut inconclusive, mut violated) = (0usize, 0usize, 0usize);
    for i in 0..n {
        for j in (i + 1)..n {
            let lhs_w1 = w1_truncated(&clouds[i], &clouds[j])?.distance;
            let rhs_lower = h_value * (cum_lower[j] - cum_lower[i]).sqrt();
            let rhs_upper = h_value * (cum_upper[j] - cum_upper[i]).sqrt();
            let status = if UPPER_FACTOR * lhs_w1 <= rhs_lower {
                certified += 1;
                SemistatStatus::Certified
            } else if LOWER_FACTOR * lhs_w1 > rhs_upper {
                violated += 1;
                SemistatStatus::Violated
            } else {
                inconclusive += 1;
                SemistatStatus::Inconclusive
            };
            pairs.push(SemistatPair {
                s: times[i],
                t: times[j],
                lhs_w1,
                rhs_lower,
                rhs_upper,
                status,
                margin: rhs_upper - LOWER_FACTOR * lhs_w1,
            });
        }
    }

    Ok(SemistatReport {
        h_value,
        mass,
        energy_bound,
        lower_factor: LOWER_FACTOR,
        upper_factor: UPPER_FACTOR,
        pairs,
        certified,
        inconclusive,
        violated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn the_transfer_constant_matches_its_pinned_value() {
        // m = 1, M = 1, d = 2: H = (3 (8 + 3 sqrt 2))^{1/2}.
        let expect = (3.0 * (8.0 + 3.0 * 2.0f64.sqrt())).sqrt();
        assert_relative_eq!(semistat_constant(1.0, 1.0, 2), expect, max_relative = 1e-15);
    }

    #[test]
    fn a_stationary_marginal_is_trivially_certified() {
        // Frozen positions: every pairwise W1 is zero, so every pair is
        // certified no matter how small the right side is.
        let states: Vec<ParticleEnsemble> = (0..4)
            .map(|i| {
                ParticleEnsemble::new(
                    1,
                    vec![-0.5, 0.5],
                    vec![0.1, -0.1],
                    vec![0.5, 0.5],
                    i as f64,
                )
            })
            .collect();
        let seq = vec![0.0; states.len()];
        let report = semistat_holder_check(&states, &seq, 1.0, 1.0).unwrap();
        assert_eq!(report.pairs.len(), 6);
        assert_eq!(report.certified, 6);
        assert_eq!(report.violated, 0);
        assert!(report.pairs.iter().all(|p| p.lhs_w1 == 0.0 && p.margin >= 0.0));
    }

    #[test]
    fn a_wandering_marginal_with_a_tiny_right_side_is_flagged() {
        // Positions jump by 3 (beyond the truncation cap, so W1 = mass = 1)
        // while the stationary-set distances are essentially zero: the right
        // side vanishes and the pair must be violated.
        let states = vec![
            ParticleEnsemble::new(1, vec![0.0], vec![0.0], vec![1.0], 0.0),
            ParticleEnsemble::new(1, vec![3.0], vec![0.0], vec![1.0], 1.0),
        ];
        let seq = vec![1e-12, 1e-12];
        let report = semistat_holder_check(&states, &seq, 1.0, 1.0).unwrap();
        assert_eq!(report.pairs.len(), 1);
        assert_eq!(report.violated, 1);
        assert!(report.pairs[0].margin < 0.0);
    }

    #[test]
    fn mismatched_series_lengths_are_rejected() {
        let states = vec![
            ParticleEnsemble::new(1, vec![0.0], vec![0.0], vec![1.0], 0.0),
            ParticleEnsemble::new(1, vec![0.1], vec![0.0], vec![1.0], 1.0),
        ];
        match semistat_holder_check(&states, &[0.0], 1.0, 1.0) {
            Err(DiagnosticsError::MismatchedInputs { .. }) => {}
            other => panic!("expected MismatchedInputs, got {other:?}"),
        }
    }
}
