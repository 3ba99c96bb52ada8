//! A-posteriori speed bound along characteristics.
//!
//! For a particle starting at `(q_0, p_0)` the speed obeys
//!
//! ```text
//! |p(t)| <= sqrt(2 E_0) + int_0^t sup_x |grad Phi(s, x)| ds,
//! E_0 = V(q_0) + |p_0|^2 / 2,
//! ```
//!
//! where `Phi` collects the interaction terms (drive plus memory field) but
//! not the confining potential. The checker records a rigorous bound on the
//! field gradient at every step — the drive sup norm plus the a-priori
//! memory bound `mass * sup|grad Sigma| * int_0^t |p_ker|` — accumulates its
//! time integral by the trapezoid rule, and flags any recorded speed that
//! exceeds the budget. A correctly integrated run never trips it; a run
//! whose interaction force is tampered with (see
//! `ForceField::interaction_scale`) must.

use crate::force::ForceField;
use crate::ParticleEnsemble;
use memokin_potential::ExternalPotential;

/// One recorded violation of the speed bound.
#[derive(Debug, Clone)]
pub struct BoundViolation {
    /// Particle index.
    pub particle: usize,
    /// Time of the offending sample.
    pub time: f64,
    /// Observed speed.
    pub speed: f64,
    /// Certified bound it exceeded.
    pub bound: f64,
}

/// Running speed-bound monitor; feed it every integrator state in order.
pub struct CharacteristicBoundCheck {
    base: Vec<f64>,
    mass: f64,
    field_integral: f64,
    last_time: f64,
    last_rate: f64,
    slack: f64,
    /// All violations recorded so far.
    pub violations: Vec<BoundViolation>,
}

impl CharacteristicBoundCheck {
    /// Initialize from the starting state. `slack` absorbs integrator and
    /// rounding error (a relative few-percent slack is typical; the bound
    /// itself is far from tight for benign runs).
    pub fn new(ens: &ParticleEnsemble, potential: &ExternalPotential, slack: f64) -> Self {
        let base = (0..ens.count)
            .map(|k| {
                let e0 = potential.value(ens.position(k))
                    + 0.5 * ens.momentum(k).iter().map(|v| v * v).sum::<f64>();
                (2.0 * e0).sqrt()
            })
            .collect();
        CharacteristicBoundCheck {
            base,
            mass: ens.total_mass(),
            field_integral: 0.0,
            last_time: ens.t,
            last_rate: f64::NAN,
            slack,
            violations: Vec::new(),
        }
    }

    /// Record the state after a step and check every particle against its
    /// budget. Returns the number of new violations.
    pub fn observe(&mut self, ens: &ParticleEnsemble, field: &ForceField) -> usize {
        let rate = field.drive.grad_sup(ens.t) + field.memory_grad_bound(self.mass, ens.t);
        if self.last_rate.is_nan() {
            // First call: backfill the rate at the start time so the
            // trapezoid rule has a left endpoint.
            self.last_rate = field.drive.grad_sup(self.last_time)
                + field.memory_grad_bound(self.mass, self.last_time);
        }
        let dt = ens.t - self.last_time;
        if dt > 0.0 {
            self.field_integral += 0.5 * dt * (self.last_rate + rate);
        }
        self.last_time = ens.t;
        self.last_rate = rate;

        let mut fresh = 0;
        for k in 0..ens.count {
            let speed = ens.momentum(k).iter().map(|v| v * v).sum::<f64>().sqrt();
            let bound = self.base[k] + self.field_integral;
            if speed > bound * (1.0 + self.slack) + 1e-12 {
                self.violations.push(BoundViolation {
                    particle: k,
                    time: ens.t,
                    speed,
                    bound,
                });
                fresh += 1;
            }
        }
        fresh
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        ExternalDrive, HistoryBuffer, HistoryPolicy, Simulation,
    };
    use memokin_formfactor::{InteractionKernel, RadialProfile};
    use memokin_kernel::KernelTable;

    fn run_with_scale(scale: f64) -> Vec<BoundViolation> {
        // No confining potential, a decaying pulse with a broad profile, and
        // a tiny memory kernel. Particles start at rest exactly on the
        // radius where the pulse gradient peaks, so the force they feel is
        // close to the recorded sup: an honest run hugs the budget from
        // below, and doubling the applied interaction force must overrun it.
        let sigma = InteractionKernel::build(RadialProfile::new(1.0, 0.6), 2).unwrap();
        let dt_k = 0.01;
        let p: Vec<f64> = (0..=800)
            .map(|i| {
                let t = dt_k * i as f64;
                0.02 * t * (-t).exp()
            })
            .collect();
        let big_p: Vec<f64> = (0..=800)
            .map(|i| {
                let t = dt_k * i as f64;
                -0.02 * (t + 1.0) * (-t).exp()
            })
            .collect();
        let kernel = KernelTable::assemble(dt_k, p, big_p, 1e-9, None, Some(2.0));
        let pot = memokin_potential::ExternalPotential::zero();
        let profile = RadialProfile::new(1.0, 6.0);
        // Radius of the steepest pulse gradient, by scan.
        let r_star = (1..600)
            .map(|i| 0.01 * i as f64)
            .max_by(|&a, &b| {
                profile.deriv(a).abs().total_cmp(&profile.deriv(b).abs())
            })
            .unwrap();
        let amplitude = 0.5 / profile.grad_sup();
        let drive = ExternalDrive::DecayingPulse { amplitude, profile, eta: 1.0 };
        let mut field = ForceField::new(&kernel, &sigma, &pot, &drive);
        field.interaction_scale = scale;

        let q = vec![r_star, 0.0, -r_star, 0.0, 0.0, r_star, 0.0, -r_star];
        let ens = ParticleEnsemble::with_uniform_weights(2, q, vec![0.0; 8], 1.0);
        let hist = HistoryBuffer::new(HistoryPolicy::Positions, 0.02, 1, kernel.window, &sigma);
        let mut check = CharacteristicBoundCheck::new(&ens, &pot, 0.05);
        let mut sim = Simulation::new(ens, hist, field, 0.02).unwrap();
        for _ in 0..150 {
            sim.step().unwrap();
            check.observe(&sim.ens, &sim.field);
        }
        check.violations
    }

    #[test]
    fn honest_runs_stay_within_the_speed_budget() {
        assert!(run_with_scale(1.0).is_empty());
    }

    #[test]
    fn doubled_interaction_force_is_flagged() {
        let violations = run_with_scale(2.0);
        assert!(
            !violations.is_empty(),
            "tampered run escaped the bound check"
        );
        let v = &violations[0];
        assert!(v.speed > v.bound);
    }
}
