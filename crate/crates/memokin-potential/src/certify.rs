//! Hypothesis certification for external potentials.
//!
//! The long-time and uniqueness statements assume the potential confines
//! (grows at infinity), is radially monotone (`x . grad V >= 0`), and has
//! gradient controlled by the potential itself (`|grad V| <= alpha + beta V`).
//! `certify_hypotheses` samples a ball and reports each flag, fitting a
//! feasible `(alpha, beta)` pair by least squares and then lifting `alpha`
//! by the worst residual so the reported pair satisfies the inequality at
//! every sample.

use crate::ExternalPotential;
use memokin_numerics::linfit::linear_fit;
use rand::Rng;

/// Tolerance below which a sampled `x . grad V` counts as nonnegative.
const MONOTONE_TOL: f64 = 1e-12;

/// Certification outcome over the sampled ball.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    /// Potential grows toward the boundary of the sampled ball.
    pub confining: bool,
    /// `x . grad V >= -tol` at every sample.
    pub monotone: bool,
    /// `x . grad V > 0` at every sample off the origin.
    pub strict: bool,
    /// Certified intercept of the gradient bound `|grad V| <= alpha + beta V`.
    pub alpha: f64,
    /// Certified slope of the gradient bound.
    pub beta: f64,
    /// Whether the reported `(alpha, beta)` holds at every sample.
    pub gradient_bound_feasible: bool,
    /// Confinement is the precondition for the long-time statements.
    pub long_time_preconditions_met: bool,
}

/// Sample the ball `B(0, domain_radius)` and certify the hypotheses.
pub fn certify_hypotheses(
    pot: &ExternalPotential,
    dim: usize,
    domain_radius: f64,
) -> HypothesisReport {
    let mut rng = memokin_numerics::rng::seeded(0x9e37_79b9, 7);
    let directions = 64;
    let radii = 24;

    let mut monotone = true;
    let mut strict = true;
    let mut values = Vec::new();
    let mut grads = Vec::new();
    let mut inner_max = 0.0f64;
    let mut outer_min = f64::INFINITY;

    let mut grad = vec![0.0; dim];
    for _ in 0..directions {
        let mut dir: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        for v in &mut dir {
            *v /= n;
        }
        for k in 1..=radii {
            let r = domain_radius * k as f64 / radii as f64;
            let x: Vec<f64> = dir.iter().map(|v| v * r).collect();
            pot.gradient(&x, &mut grad);
            let radial = x.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
            if radial < -MONOTONE_TOL {
                monotone = false;
            }
            if radial <= 0.0 {
                strict = false;
            }
            let v = pot.value(&x);
            values.push(v);
            grads.push(grad.iter().map(|g| g * g).sum::<f64>().sqrt());
            if r <= 0.5 * domain_radius {
                inner_max = inner_max.max(v);
            } else if r >= 0.95 * domain_radius {
                outer_min = outer_min.min(v);
            }
        }
    }

    // Confining: the potential near the boundary dominates the inner half
    // by a strict margin (rules out the zero potential and wells wider
    // than the sampled ball).
    let confining = outer_min > inner_max + 1e-9 && outer_min > 1e-9;

    // Least-squares |grad V| ~ alpha + beta V, then lift alpha so the
    // inequality is a certificate, not a fit. A flat potential (all sampled
    // values equal) degenerates the fit; fall back to a constant bound.
    let spread = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
        - values.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let (beta_fit, alpha_fit) = if spread > 1e-12 {
        linear_fit(&values, &grads)
    } else {
        (0.0, grads.iter().fold(0.0f64, |m, &g| m.max(g)))
    };
    let beta = beta_fit.max(0.0);
    let worst = values
        .iter()
        .zip(&grads)
        .map(|(&v, &g)| g - (alpha_fit + beta * v))
        .fold(f64::NEG_INFINITY, f64::max);
    let alpha = (alpha_fit + worst.max(0.0)).max(0.0);
    let gradient_bound_feasible = values
        .iter()
        .zip(&grads)
        .all(|(&v, &g)| g <= alpha + beta * v + 1e-9 * (1.0 + g));

    HypothesisReport {
        confining,
        monotone,
        strict,
        alpha,
        beta,
        gradient_bound_feasible,
        long_time_preconditions_met: confining,
    }
}
