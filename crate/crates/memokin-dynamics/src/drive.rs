//! Time-dependent external drive.
//!
//! The drive enters the force as `-grad_x Phi0(t, x)`; the built-ins keep
//! `integral_0^inf ||grad_x Phi0(t)||_inf dt` available in closed form
//! because that integral seeds the a-priori constants.

use memokin_formfactor::RadialProfile;

/// External drive variants.
#[derive(Debug, Clone)]
pub enum ExternalDrive {
    /// No drive.
    Zero,
    /// Separable pulse `Phi0(t,x) = amplitude . exp(-eta t) . chi(|x|)`
    /// with `chi` a compactly supported radial bump.
    DecayingPulse { amplitude: f64, profile: RadialProfile, eta: f64 },
}

impl ExternalDrive {
    /// Gradient `grad_x Phi0(t, x)` written into `out`.
    pub fn gradient(&self, t: f64, x: &[f64], out: &mut [f64]) {
        match self {
            ExternalDrive::Zero => out.fill(0.0),
            ExternalDrive::DecayingPulse { amplitude, profile, eta } => {
                let r2 = x.iter().map(|v| v * v).sum::<f64>();
                let factor = amplitude
                    * (-eta * t).exp()
                    * profile.deriv_over_r(r2.sqrt());
                for (o, &xi) in out.iter_mut().zip(x) {
                    *o = factor * xi;
                }
            }
        }
    }

    /// Sup over x of `|grad_x Phi0(t, .)|`.
    pub fn grad_sup(&self, t: f64) -> f64 {
        match self {
            ExternalDrive::Zero => 0.0,
            ExternalDrive::DecayingPulse { amplitude, profile, eta } => {
                amplitude.abs() * (-eta * t).exp() * profile.grad_sup()
            }
        }
    }

    /// Closed form of `integral_0^inf ||grad_x Phi0(t)||_inf dt`.
    pub fn grad_sup_l1(&self) -> f64 {
        match self {
            ExternalDrive::Zero => 0.0,
            ExternalDrive::DecayingPulse { amplitude, profile, eta } => {
                amplitude.abs() * profile.grad_sup() / eta
            }
        }
    }

    /// Sup over x of the Hessian operator norm of `Phi0(t, .)`.
    pub fn hessian_sup(&self, t: f64) -> f64 {
        match self {
            ExternalDrive::Zero => 0.0,
            ExternalDrive::DecayingPulse { amplitude, profile, eta } => {
                amplitude.abs() * (-eta * t).exp() * profile.hessian_sup()
            }
        }
    }

    /// Global-in-time Hessian sup (attained at t = 0 for the built-ins).
    pub fn hessian_sup_all_time(&self) -> f64 {
        self.hessian_sup(0.0)
    }
}
