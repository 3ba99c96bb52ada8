//! A priori constant table for a scenario.
//!
//! Every entry is computable from the scenario data alone — memory kernel,
//! form factor, external potential, drive, and the initial state — before a
//! single step is taken.  Recorded runs are then judged against these
//! numbers: the energy series must stay below `e1`, the windowed field
//! functional below `e2`, and the dissipation functional within `k3` of
//! zero.  Keeping the table serializable lets a run manifest pin the exact
//! constants a run was checked against.

use crate::energy::energy_record;
use crate::DiagnosticsError;
use memokin_dynamics::{spread_profile, ExternalDrive, ParticleEnsemble};
use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_potential::{certify_hypotheses, ExternalPotential};
use serde::{Deserialize, Serialize};

/// Scenario-level constants with the chain of growth bounds built on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    /// Total interacting mass `m` (sum of the initial weights).
    pub mass: f64,
    /// Interaction strength `kappa = -P(0)` carried by the kernel table.
    pub kappa: f64,
    /// Drive-plus-memory forcing budget
    /// `K1 = ||grad Phi0||_{L1(R+, Linf)} + m ||Sigma||_{W1,inf} ||P||_{L1(R)}`.
    pub k1: f64,
    /// Momentum-scale bound `K2 = K1 sqrt(m)/2 + sqrt(u0^2 + K1^2 m / 4)`.
    pub k2: f64,
    /// Dissipation-magnitude bound `K3 = K1 sqrt(m) K2 + u0^2`.
    pub k3: f64,
    /// Energy ceiling `E1 = K2^2` for the raw energy along a run.
    pub e1: f64,
    /// Ceiling `E2 = 2 Lambda_1 ||P||_{L1(R)} K3` for the windowed field
    /// functional.
    pub e2: f64,
    /// Spectral moments `Lambda_k = sum_{j<=k} (-Delta)^j Sigma (0)`,
    /// `k = 0, 1, 2`.
    pub lambda: [f64; 3],
    /// Sub-linearity constant in `|grad V| <= alpha + beta V`.
    pub alpha: f64,
    /// Sub-linearity slope in `|grad V| <= alpha + beta V`.
    pub beta: f64,
    /// Corrected energy of the initial state.
    pub energy_tilde_initial: f64,
    /// Grid step of the tabulated spread profile `Q`.
    pub q_dt: f64,
    /// Tabulated spread profile: `Q(i * q_dt)`.
    pub q_values: Vec<f64>,
}

impl ConstantsLedger {
    /// Assemble the table from scenario data.
    ///
    /// `domain_radius` bounds the region over which the potential's
    /// sub-linearity pair `(alpha, beta)` is fitted, and `q_horizon` is the
    /// largest time the tabulated spread profile must cover.
    pub fn assemble(
        kernel: &KernelTable,
        sigma: &InteractionKernel,
        potential: &ExternalPotential,
        drive: &ExternalDrive,
        initial: &ParticleEnsemble,
        domain_radius: f64,
        q_horizon: f64,
    ) -> Result<Self, DiagnosticsError> {
        let mass = initial.total_mass();
        let kappa = kernel.kappa;

        let hyp = certify_hypotheses(potential, initial.dim, domain_radius);
        if !hyp.gradient_bound_feasible {
            return Err(DiagnosticsError::Hypothesis {
                detail: "no finite (alpha, beta) with |grad V| <= alpha + beta V on the domain",
            });
        }

        let energy_tilde_initial = energy_record(initial, sigma, potential, kappa).total_tilde;

        // u0^2 = E~(f0) + (kappa/2) m^2 sup Sigma.  The energy floor makes it
        // nonnegative; clamp the roundoff left by near-floor initial data.
        let u0_sq = (energy_tilde_initial + 0.5 * kappa * mass * mass * sigma.sup_norm()).max(0.0);

        let k1 = drive.grad_sup_l1() + mass * sigma.w1inf_norm() * kernel.big_p_l1();
        let k2 = 0.5 * k1 * mass.sqrt() + (u0_sq + 0.25 * k1 * k1 * mass).sqrt();
        let e1 = k2 * k2;
        let k3 = k1 * mass.sqrt() * k2 + u0_sq;

        let lambda = [sigma.lambda(0), sigma.lambda(1), sigma.lambda(2)];
        let e2 = 2.0 * lambda[1] * kernel.big_p_l1() * k3;

        let q = spread_profile(kernel, drive, mass, sigma, q_horizon.max(kernel.dt));

        Ok(Self {
            mass,
            kappa,
            k1,
            k2,
            k3,
            e1,
            e2,
            lambda,
            alpha: hyp.alpha,
            beta: hyp.beta,
            energy_tilde_initial,
            q_dt: q.dt,
            q_values: q.values,
        })
    }

    /// Spread profile `Q(t)`: linear interpolation of the table, extended
    /// past the last node with the final slope (the profile is convex
    /// nondecreasing, so this extension stays a lower bound of the true
    /// integral and an upper bound never matters for how `Q` is consumed).
    pub fn q(&self, t: f64) -> f64 {
        let n = self.q_values.len();
        if n == 1 {
            return self.q_values[0];
        }
        let u = (t / self.q_dt).max(0.0);
        let i = (u.floor() as usize).min(n - 2);
        let frac = u - i as f64;
        let slope = self.q_values[i + 1] - self.q_values[i];
        self.q_values[i] + frac * slope
    }
}
