//! Radially symmetric shell scenario in three dimensions.
//!
//! All mass sits on an expanding sphere of radius `r(t)`; by symmetry the
//! dynamics reduces to a scalar second-order equation
//!
//! ```text
//! r''(t) = int_0^t p(t - s) A(r(t), r(s)) ds,
//! ```
//!
//! where `A(a, b)` is the surface average over the source sphere of radius
//! `b` of the radial component of `grad Sigma` seen at distance `a`:
//!
//! ```text
//! A(a, b) = 1/2 int_{-1}^{1} g(R(mu)) (a - b mu) dmu,
//! R(mu) = sqrt(a^2 + b^2 - 2 a b mu),
//! ```
//!
//! with `grad Sigma(x) = g(|x|) x`. The integrand vanishes identically when
//! `|a - b|` exceeds the interaction support, so far-apart shells decouple
//! exactly.

use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_numerics::quad::gauss_legendre;

use crate::history::trapezoid_coefficients;

/// Surface-averaged radial interaction between spheres of radii `a` and `b`
/// (Gauss-Legendre, 64 nodes; exactly zero for `|a - b|` beyond the
/// interaction support).
pub fn sphere_average(sigma: &InteractionKernel, a: f64, b: f64) -> f64 {
    if (a - b).abs() >= sigma.support_radius() {
        return 0.0;
    }
    let (nodes, weights) = gauss_legendre(64);
    let mut acc = 0.0;
    for (&mu, &w) in nodes.iter().zip(&weights) {
        let r2 = a * a + b * b - 2.0 * a * b * mu;
        let r = r2.max(0.0).sqrt();
        acc += w * sigma.grad_factor(r) * (a - b * mu);
    }
    0.5 * acc
}

/// Radial trajectory of the shell scenario.
#[derive(Debug, Clone)]
pub struct ShellTrajectory {
    /// Step size used.
    pub dt: f64,
    /// Sample times `0, dt, 2 dt, ...`.
    pub times: Vec<f64>,
    /// Shell radius at each sample time.
    pub radii: Vec<f64>,
    /// Radial speed at each sample time.
    pub speeds: Vec<f64>,
    /// Whether the starting radius exceeds twice the interaction support
    /// (the regime where a shell and its early history fully decouple until
    /// the radius has moved by a support width).
    pub regime_separated: bool,
}

/// Integrate the shell equation from `r(0) = r0`, `r'(0) = r1` up to
/// `t_end` by velocity Verlet with the memory integral discretized by the
/// trapezoid rule over the full step history.
pub fn shell_scenario(
    sigma: &InteractionKernel,
    kernel: &KernelTable,
    r0: f64,
    r1: f64,
    t_end: f64,
    dt: f64,
) -> ShellTrajectory {
    assert!(r0 > 0.0 && dt > 0.0 && t_end > 0.0);
    let steps = (t_end / dt).round() as usize;
    let mut radii = Vec::with_capacity(steps + 1);
    let mut speeds = Vec::with_capacity(steps + 1);
    let mut times = Vec::with_capacity(steps + 1);
    radii.push(r0);
    speeds.push(r1);
    times.push(0.0);

    let accel = |a: f64, t: f64, radii: &[f64], times: &[f64]| -> f64 {
        let coeffs = trapezoid_coefficients(times);
        let mut acc = 0.0;
        for ((&s, &c), &rb) in times.iter().zip(&coeffs).zip(radii) {
            let pv = kernel.p_at(t - s);
            if pv != 0.0 && c != 0.0 {
                acc += c * pv * sphere_average(sigma, a, rb);
            }
        }
        acc
    };

    let mut r = r0;
    let mut v = r1;
    for step in 0..steps {
        let t = dt * step as f64;
        let f0 = accel(r, t, &radii, &times);
        let v_half = v + 0.5 * dt * f0;
        let r_new = r + dt * v_half;
        let f1 = accel(r_new, t + dt, &radii, &times);
        v = v_half + 0.5 * dt * f1;
        r = r_new;
        radii.push(r);
        speeds.push(v);
        times.push(t + dt);
    }

    ShellTrajectory {
        dt,
        times,
        radii,
        speeds,
        regime_separated: r0 > 2.0 * sigma.support_radius(),
    }
}

/// Interaction constant for the escape bound: twice the `W^{1,inf}` norm of
/// the form factor times the squared support bound times the full `L^1`
/// norm of the kernel.
pub fn escape_interaction_constant(
    sigma: &InteractionKernel,
    kernel: &KernelTable,
    support_bound: f64,
) -> f64 {
    assert!(support_bound >= sigma.support_radius());
    2.0 * sigma.w1inf_norm() * support_bound * support_bound * kernel.p_l1()
}

/// Escape speed-squared `U0 = r1^2 / 2 - 2 K / r0` appearing in the lower
/// bound `r(t) >= r0 + t sqrt(2 U0)`; positive only when the launch is fast
/// enough for the memory drag to never stall the shell.
pub fn escape_rate(r0: f64, r1: f64, interaction_constant: f64) -> f64 {
    0.5 * r1 * r1 - 2.0 * interaction_constant / r0
}
