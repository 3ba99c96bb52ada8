//! Energy bookkeeping along a recorded trajectory.
//!
//! For a weighted ensemble the three pieces are
//!
//! * kinetic: `sum_k w_k |p_k|^2 / 2`,
//! * external: `sum_k w_k V(q_k)`,
//! * self-interaction: `-(kappa/2) sum_{k,l} w_k w_l Sigma(q_k - q_l)`,
//!
//! with `total = kinetic + external` and `total_tilde = total + self`.
//! The double sum keeps the diagonal `k = l` term: for atomic measures the
//! convolution `Sigma * rho` evaluated at a particle genuinely includes its
//! own contribution `Sigma(0)`, and every bound consumed downstream (the
//! floor `-(kappa/2) m^2 sup Sigma` in particular) is stated for exactly
//! this convention.

use memokin_dynamics::ParticleEnsemble;
use memokin_formfactor::InteractionKernel;
use memokin_potential::ExternalPotential;
use serde::{Deserialize, Serialize};

/// Energy decomposition of one recorded state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    /// Time of the state.
    pub t: f64,
    /// `sum_k w_k |p_k|^2 / 2`.
    pub kinetic: f64,
    /// `sum_k w_k V(q_k)`.
    pub external: f64,
    /// `-(kappa/2) sum_{k,l} w_k w_l Sigma(q_k - q_l)` (diagonal included).
    pub self_term: f64,
    /// `kinetic + external`.
    pub total: f64,
    /// `total + self_term` (the corrected energy whose floor is
    /// `-(kappa/2) m^2 sup Sigma`).
    pub total_tilde: f64,
}

/// Energy decomposition of a single state.
pub fn energy_record(
    ens: &ParticleEnsemble,
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    kappa: f64,
) -> EnergyRecord {
    let kinetic = ens.kinetic_energy();
    let external: f64 = (0..ens.count).map(|k| ens.w[k] * potential.value(ens.position(k))).sum();

    let support = sigma.support_radius();
    let mut pair = 0.0;
    for k in 0..ens.count {
        let qk = ens.position(k);
        for l in 0..ens.count {
            let ql = ens.position(l);
            let r2: f64 = qk.iter().zip(ql).map(|(a, b)| (a - b) * (a - b)).sum();
            if r2 >= support * support {
                continue;
            }
            pair += ens.w[k] * ens.w[l] * sigma.value(r2.sqrt());
        }
    }
    let self_term = -0.5 * kappa * pair;
    let total = kinetic + external;
    EnergyRecord { t: ens.t, kinetic, external, self_term, total, total_tilde: total + self_term }
}

/// Energy decomposition of every recorded state, in recording order.
pub fn energy_series(
    states: &[ParticleEnsemble],
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    kappa: f64,
) -> Vec<EnergyRecord> {
    states.iter().map(|s| energy_record(s, sigma, potential, kappa)).collect()
}
