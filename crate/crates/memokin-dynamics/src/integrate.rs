//! Velocity-Verlet integration of the memory dynamics.
//!
//! Each step evaluates the force twice: at the current positions, and —
//! after the drift — at the updated positions against the *same* snapshot
//! set (the snapshot at the new time is appended only after the step
//! completes). The force at the start of the next step then sees the
//! refreshed history, so the two evaluations bracketing a step differ and
//! no force cache is carried across steps.

use crate::force::{total_force, ForceField};
use crate::history::HistoryBuffer;
use crate::{DynamicsError, ParticleEnsemble};

/// A particle system marching under the memory force law.
pub struct Simulation<'a> {
    /// Current particle state.
    pub ens: ParticleEnsemble,
    /// Snapshot history backing the memory term.
    pub hist: HistoryBuffer,
    /// Force ingredients.
    pub field: ForceField<'a>,
    /// Step size.
    pub dt: f64,
    step_index: usize,
}

impl<'a> Simulation<'a> {
    /// Set up a run. Seeds the history with the initial state when the
    /// buffer is empty; the ensemble time is taken as the start time.
    pub fn new(
        ens: ParticleEnsemble,
        mut hist: HistoryBuffer,
        field: ForceField<'a>,
        dt: f64,
    ) -> Result<Self, DynamicsError> {
        assert!(dt > 0.0);
        assert!((hist.dt - dt).abs() <= 1e-12 * dt.max(1.0), "history stride base must match dt");
        if hist.earliest_time().is_none() {
            hist.append(&ens, field.sigma)?;
        }
        Ok(Simulation { ens, hist, field, dt, step_index: 0 })
    }

    /// Number of completed steps.
    pub fn steps_taken(&self) -> usize {
        self.step_index
    }

    /// Advance one step of size `dt`.
    pub fn step(&mut self) -> Result<(), DynamicsError> {
        let dim = self.ens.dim;
        let n = self.ens.count;
        let t = self.ens.t;
        let half = 0.5 * self.dt;

        let f0 = total_force(&self.field, &self.ens.q, dim, t, &self.hist)?;
        for i in 0..n * dim {
            self.ens.p[i] += half * f0[i];
            self.ens.q[i] += self.dt * self.ens.p[i];
        }
        let f1 = total_force(&self.field, &self.ens.q, dim, t + self.dt, &self.hist)?;
        for i in 0..n * dim {
            self.ens.p[i] += half * f1[i];
        }
        self.ens.t = t + self.dt;
        self.step_index += 1;
        self.hist.maybe_append(&self.ens, self.field.sigma, self.step_index)?;
        self.ens.check_finite()
    }

    /// March until the ensemble time reaches `t_end` (within half a step),
    /// calling the observer after every step.
    pub fn run(
        &mut self,
        t_end: f64,
        mut observer: impl FnMut(&ParticleEnsemble, usize),
    ) -> Result<(), DynamicsError> {
        let steps = ((t_end - self.ens.t) / self.dt).round() as i64;
        for _ in 0..steps.max(0) {
            self.step()?;
            observer(&self.ens, self.step_index);
        }
        Ok(())
    }

    /// Weighted potential energy `sum_k w_k V(q_k)` of the current state.
    pub fn potential_energy(&self) -> f64 {
        (0..self.ens.count)
            .map(|k| self.ens.w[k] * self.field.potential.value(self.ens.position(k)))
            .sum()
    }
}
