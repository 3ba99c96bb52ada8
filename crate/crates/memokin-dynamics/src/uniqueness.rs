//! Spread profile and uniqueness weight.
//!
//! The stability theory weighs phase-space points by how much curvature of
//! the confining potential a characteristic starting there can see. Two
//! ingredients:
//!
//! * the spread profile
//!   `Q(t) = t * ||grad Phi0||_{L1(L_inf)} + mass * sup|grad Sigma| * I3(t)`,
//!   where `I3` is the triple iterated integral of `|p_ker|` — a bound on
//!   how far any two characteristics launched together can drift apart;
//! * the weight
//!   `w_t(x, v) = exp( int_0^t sup{ ||hess V|| on B(x, r_s) } ds )` with
//!   `r_s = t * sqrt(|v|^2 + 2 V(x)) + Q(s)`.
//!
//! For the harmonic potential the Hessian norm is one everywhere and the
//! weight is exactly `e^t`; deep inside a flat well bottom with `Q = 0` the
//! weight is exactly one.

use crate::ExternalDrive;
use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_numerics::quad::cumulative_trapezoid;
use memokin_potential::ExternalPotential;

/// The spread profile `Q` sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct SpreadProfile {
    /// Grid spacing (the kernel table spacing).
    pub dt: f64,
    /// Samples `Q(0), Q(dt), ...` — nonnegative and nondecreasing.
    pub values: Vec<f64>,
}

impl SpreadProfile {
    /// Evaluate by linear interpolation; beyond the grid the profile
    /// continues with its final slope (the kernel integral has saturated
    /// by then, so the growth is affine in the tail).
    pub fn value(&self, t: f64) -> f64 {
        let n = self.values.len();
        let u = (t / self.dt).max(0.0);
        let i = (u.floor() as usize).min(n - 2);
        let frac = u - i as f64;
        let slope = self.values[i + 1] - self.values[i];
        self.values[i] + frac * slope
    }
}

/// Build the spread profile on `[0, t_end]` from the kernel table, the
/// drive, the total interacting mass and the form factor.
pub fn spread_profile(
    kernel: &KernelTable,
    drive: &ExternalDrive,
    mass: f64,
    sigma: &InteractionKernel,
    t_end: f64,
) -> SpreadProfile {
    let dt = kernel.dt;
    let steps = (t_end / dt).ceil() as usize + 1;
    let p_abs: Vec<f64> = (0..=steps).map(|i| kernel.p_at(dt * i as f64).abs()).collect();
    let i1 = cumulative_trapezoid(&p_abs, dt);
    let i2 = cumulative_trapezoid(&i1, dt);
    let i3 = cumulative_trapezoid(&i2, dt);
    let drive_l1 = drive.grad_sup_l1();
    let grad_sup = sigma.grad_sup_norm();
    let values = i3
        .iter()
        .enumerate()
        .map(|(i, &v)| dt * i as f64 * drive_l1 + mass * grad_sup * v)
        .collect();
    SpreadProfile { dt, values }
}

/// Uniqueness weight of a phase-space point at horizon `t`: the
/// exponential of the time integral of the Hessian sup of `V` over the
/// reachable ball. `quad_steps` controls the trapezoid resolution in `s`.
pub fn uniqueness_weight(
    x: &[f64],
    v: &[f64],
    potential: &ExternalPotential,
    spread: &SpreadProfile,
    t: f64,
    quad_steps: usize,
) -> f64 {
    assert!(quad_steps >= 1);
    let speed_sq: f64 = v.iter().map(|u| u * u).sum();
    let reach = (speed_sq + 2.0 * potential.value(x)).max(0.0).sqrt();
    let ds = t / quad_steps as f64;
    let samples: Vec<f64> = (0..=quad_steps)
        .map(|i| {
            let s = ds * i as f64;
            potential.hessian_ball_sup(x, t * reach + spread.value(s))
        })
        .collect();
    let integral = memokin_numerics::quad::trapezoid(&samples, ds);
    integral.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use memokin_formfactor::RadialProfile;

    fn quiet_kernel() -> KernelTable {
        KernelTable::assemble(0.02, vec![0.0; 201], vec![0.0; 201], 1e-9, None, Some(2.0))
    }

    fn sigma() -> InteractionKernel {
        InteractionKernel::build(RadialProfile::new(1.0, 0.5), 2).unwrap()
    }

    #[test]
    fn spread_vanishes_without_kernel_or_drive() {
        let profile = spread_profile(&quiet_kernel(), &ExternalDrive::Zero, 1.0, &sigma(), 3.0);
        assert!(profile.values.iter().all(|&q| q == 0.0));
        assert_eq!(profile.value(2.7), 0.0);
    }

    #[test]
    fn spread_profile_matches_the_closed_form_for_constant_kernel() {
        // |p| = c constant gives I3 = c t^3 / 6.
        let c = 0.3;
        let kernel = KernelTable::assemble(
            0.01,
            // p must vanish at zero for a valid table; use the constant
            // everywhere else so the quadrature sees an almost-constant
            // integrand (the single corrected cell costs O(dt^2)).
            std::iter::once(0.0).chain(std::iter::repeat(c).take(400)).collect(),
            (0..=400).map(|i| -(1.0 - 0.0025 * i as f64)).collect(),
            1e-9,
            None,
            Some(2.0),
        );
        let profile = spread_profile(&kernel, &ExternalDrive::Zero, 2.0, &sigma(), 3.0);
        let grad_sup = sigma().grad_sup_norm();
        let t = 3.0;
        let want = 2.0 * grad_sup * c * t * t * t / 6.0;
        let got = profile.value(t);
        assert!(
            (got - want).abs() <= 5e-3 * want,
            "Q({t}) = {got}, closed form {want}"
        );
    }

    #[test]
    fn harmonic_weight_is_the_exponential_of_the_horizon() {
        let pot = ExternalPotential::harmonic();
        let spread = spread_profile(&quiet_kernel(), &ExternalDrive::Zero, 1.0, &sigma(), 2.0);
        for &t in &[0.5, 1.0, 2.0] {
            let w = uniqueness_weight(&[0.3, -0.2], &[0.1, 0.4], &pot, &spread, t, 64);
            assert!((w - t.exp()).abs() <= 1e-12 * t.exp(), "w = {w} vs e^{t}");
        }
    }

    #[test]
    fn flat_well_bottom_carries_unit_weight() {
        // Inside the well the potential is identically zero, so a resting
        // point with zero spread sees no curvature at all.
        let pot = ExternalPotential::shifted_well(2.0);
        let spread = spread_profile(&quiet_kernel(), &ExternalDrive::Zero, 1.0, &sigma(), 2.0);
        let w = uniqueness_weight(&[0.2, 0.1], &[0.0, 0.0], &pot, &spread, 1.5, 32);
        assert_eq!(w, 1.0);
    }

    #[test]
    fn weight_grows_when_the_reachable_ball_hits_the_well_wall() {
        let pot = ExternalPotential::shifted_well(1.0);
        let spread = spread_profile(&quiet_kernel(), &ExternalDrive::Zero, 1.0, &sigma(), 2.0);
        // Fast enough that t * |v| reaches past the wall.
        let w = uniqueness_weight(&[0.5, 0.0], &[1.2, 0.0], &pot, &spread, 1.0, 32);
        assert!(w > 1.0 + 1e-6);
    }
}
