//! Weighted particle ensembles.
//!
//! One container serves both the pure N-particle system (uniform weights
//! `m/N`) and the weighted-particle quadrature of the kinetic equation;
//! the force evaluation never distinguishes the two.

use crate::DynamicsError;

/// Positions, momenta, and weights of a particle system at one time.
#[derive(Debug, Clone)]
pub struct ParticleEnsemble {
    /// Space dimension.
    pub dim: usize,
    /// Particle count.
    pub count: usize,
    /// Positions, row-major `count x dim`.
    pub q: Vec<f64>,
    /// Momenta, row-major `count x dim`.
    pub p: Vec<f64>,
    /// Nonnegative weights summing to the total mass.
    pub w: Vec<f64>,
    /// Current time.
    pub t: f64,
}

impl ParticleEnsemble {
    /// Build an ensemble from flat arrays.
    pub fn new(dim: usize, q: Vec<f64>, p: Vec<f64>, w: Vec<f64>, t: f64) -> Self {
        assert!(dim >= 1 && dim <= 3, "supported dimensions are 1..=3");
        let count = w.len();
        assert_eq!(q.len(), count * dim);
        assert_eq!(p.len(), count * dim);
        assert!(w.iter().all(|v| *v >= 0.0 && v.is_finite()));
        Self { dim, count, q, p, w, t }
    }

    /// Uniform weights `mass / N` (the pure N-particle normalization).
    pub fn with_uniform_weights(dim: usize, q: Vec<f64>, p: Vec<f64>, mass: f64) -> Self {
        let count = q.len() / dim;
        Self::new(dim, q, p, vec![mass / count as f64; count], 0.0)
    }

    /// Position slice of particle `k`.
    pub fn position(&self, k: usize) -> &[f64] {
        &self.q[k * self.dim..(k + 1) * self.dim]
    }

    /// Momentum slice of particle `k`.
    pub fn momentum(&self, k: usize) -> &[f64] {
        &self.p[k * self.dim..(k + 1) * self.dim]
    }

    /// Total mass (sum of weights).
    pub fn total_mass(&self) -> f64 {
        self.w.iter().sum()
    }

    /// Largest particle speed.
    pub fn max_speed(&self) -> f64 {
        (0..self.count).fold(0.0f64, |m, k| {
            m.max(self.momentum(k).iter().map(|v| v * v).sum::<f64>().sqrt())
        })
    }

    /// Weighted kinetic energy `sum_k w_k |p_k|^2 / 2`.
    pub fn kinetic_energy(&self) -> f64 {
        (0..self.count)
            .map(|k| 0.5 * self.w[k] * self.momentum(k).iter().map(|v| v * v).sum::<f64>())
            .sum()
    }

    /// Error out if any coordinate overflowed.
    pub fn check_finite(&self) -> Result<(), DynamicsError> {
        for k in 0..self.count {
            let ok = self.position(k).iter().chain(self.momentum(k)).all(|v| v.is_finite());
            if !ok {
                return Err(DynamicsError::NonFiniteForce { particle: k });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_weights_sum_to_the_mass() {
        let ens =
            ParticleEnsemble::with_uniform_weights(2, vec![0.0; 8], vec![0.0; 8], 1.0);
        assert_eq!(ens.count, 4);
        assert!((ens.total_mass() - 1.0).abs() < 1e-15);
        assert_eq!(ens.w[0], 0.25);
    }

    #[test]
    fn finite_check_flags_the_offending_particle() {
        let mut ens =
            ParticleEnsemble::with_uniform_weights(1, vec![0.0, 1.0], vec![0.0, 0.0], 1.0);
        ens.p[1] = f64::NAN;
        match ens.check_finite() {
            Err(DynamicsError::NonFiniteForce { particle }) => assert_eq!(particle, 1),
            other => panic!("expected NonFiniteForce, got {other:?}"),
        }
    }
}
