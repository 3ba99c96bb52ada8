//! Public entry points: the truncated-W1 dispatcher, the dual lower bound
//! for the W-type distance, the Hölder-1/2 seminorm of a density path, and
//! the frozen-flow stationarity residual.

use crate::cloud::{WeightedCloud, COST_CAP};
use crate::entropic::{w1_entropic, EntropicParams};
use crate::exact::{w1_assignment, w1_network};
use crate::{SolveMethod, TransportError, TransportResult};
use memokin_dynamics::{FlowMapProbe, FrozenField};
use memokin_formfactor::{InteractionKernel, RadialProfile};
use memokin_potential::ExternalPotential;

/// Point-count threshold below which the exact network solver is used for
/// general weighted clouds.
pub const EXACT_POINT_LIMIT: usize = 3000;
/// Count threshold for the dense assignment route on uniform clouds (the
/// dense cost matrix is quadratic in the count).
const ASSIGNMENT_LIMIT: usize = 2048;
/// Relative mass mismatch tolerated before the solve refuses to run.
const MASS_TOL: f64 = 1e-9;

/// Check that the pair is solvable: same ambient dimension and total masses
/// equal to within [`MASS_TOL`] relative.
fn validate_pair(mu: &WeightedCloud, nu: &WeightedCloud) -> Result<(), TransportError> {
    if mu.dim != nu.dim {
        return Err(TransportError::DimensionMismatch { expected: mu.dim, got: nu.dim });
    }
    let ma = mu.total_mass();
    let mb = nu.total_mass();
    let scale = ma.max(mb);
    if (ma - mb).abs() > MASS_TOL * scale {
        return Err(TransportError::MassMismatch { mass_mu: ma, mass_nu: mb });
    }
    Ok(())
}

/// Copy of `nu` rescaled so both total masses match `mu` exactly. The pair
/// must already be validated.
fn balanced_copy(mu: &WeightedCloud, nu: &WeightedCloud) -> WeightedCloud {
    let ma = mu.total_mass();
    let mb = nu.total_mass();
    let mut out = nu.clone();
    if ma != mb && mb > 0.0 {
        let r = ma / mb;
        for w in &mut out.weights {
            *w *= r;
        }
    }
    out
}

/// Canonical argument order, so that solving (mu, nu) and (nu, mu) runs the
/// bitwise-identical computation and symmetry holds exactly.
fn should_swap(mu: &WeightedCloud, nu: &WeightedCloud) -> bool {
    if mu.len() != nu.len() {
        return mu.len() > nu.len();
    }
    for (a, b) in mu.points.iter().zip(&nu.points) {
        match a.total_cmp(b) {
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Equal => {}
        }
    }
    for (a, b) in mu.weights.iter().zip(&nu.weights) {
        match a.total_cmp(b) {
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Truncated-cost 1-Wasserstein distance between equal-mass clouds.
///
/// Dispatch: equal-count uniform clouds go to the exact assignment solver;
/// general clouds with at most [`EXACT_POINT_LIMIT`] points combined go to
/// the exact min-cost-flow route; anything larger is solved entropically
/// with a certified duality gap in the result.
pub fn w1_truncated(mu: &WeightedCloud, nu: &WeightedCloud) -> Result<TransportResult, TransportError> {
    validate_pair(mu, nu)?;
    // Solve in a canonical order so the distance is exactly symmetric, then
    // flip the plan back to the caller's orientation.
    if should_swap(mu, nu) {
        let mut res = w1_truncated(nu, mu)?;
        if let Some(plan) = &mut res.plan {
            for e in plan.iter_mut() {
                std::mem::swap(&mut e.from, &mut e.to);
            }
        }
        return Ok(res);
    }
    let nu = balanced_copy(mu, nu);
    if mu.total_mass() == 0.0 {
        return Ok(TransportResult {
            distance: 0.0,
            plan: Some(Vec::new()),
            method: SolveMethod::NetworkLp,
            gap: None,
        });
    }
    let total = mu.len() + nu.len();
    if mu.len() == nu.len() && mu.len() <= ASSIGNMENT_LIMIT && mu.is_uniform() && nu.is_uniform() {
        let (distance, plan) = w1_assignment(mu, &nu)?;
        return Ok(TransportResult {
            distance,
            plan: Some(plan),
            method: SolveMethod::Assignment,
            gap: None,
        });
    }
    if total <= EXACT_POINT_LIMIT {
        let (distance, plan) = w1_network(mu, &nu)?;
        return Ok(TransportResult {
            distance,
            plan: Some(plan),
            method: SolveMethod::NetworkLp,
            gap: None,
        });
    }
    let sol = w1_entropic(mu, &nu, EntropicParams::default());
    Ok(TransportResult {
        distance: sol.distance,
        plan: None,
        method: SolveMethod::Entropic { epsilon: sol.epsilon },
        gap: Some(sol.gap),
    })
}

/// Monotone (quantile) coupling cost on the line: a certified *upper* bound
/// on the truncated W1. The truncated cost is not convex, so the monotone
/// coupling need not be optimal — this is a cheap bound, not the distance.
pub fn quantile_upper_bound_1d(
    mu: &WeightedCloud,
    nu: &WeightedCloud,
) -> Result<f64, TransportError> {
    if mu.dim != 1 || nu.dim != 1 {
        return Err(TransportError::DimensionMismatch { expected: 1, got: mu.dim.max(nu.dim) });
    }
    validate_pair(mu, nu)?;
    let nu = balanced_copy(mu, nu);
    let order = |c: &WeightedCloud| {
        let mut idx: Vec<usize> = (0..c.len()).collect();
        idx.sort_by(|&a, &b| c.points[a].total_cmp(&c.points[b]));
        idx
    };
    let iu = order(mu);
    let iv = order(&nu);
    let (mut i, mut j) = (0usize, 0usize);
    let mut ru = if iu.is_empty() { 0.0 } else { mu.weights[iu[0]] };
    let mut rv = if iv.is_empty() { 0.0 } else { nu.weights[iv[0]] };
    let mut cost = 0.0f64;
    while i < iu.len() && j < iv.len() {
        let amt = ru.min(rv);
        if amt > 0.0 {
            cost += amt * (mu.points[iu[i]] - nu.points[iv[j]]).abs().min(COST_CAP);
        }
        ru -= amt;
        rv -= amt;
        if ru <= 0.0 {
            i += 1;
            if i < iu.len() {
                ru = mu.weights[iu[i]];
            }
        }
        if rv <= 0.0 {
            j += 1;
            if j < iv.len() {
                rv = nu.weights[iv[j]];
            }
        }
    }
    Ok(cost)
}

/// A trial test function with a certified `W^{1,inf}` norm of at most one
/// (sup norm plus gradient sup norm).
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// The constant function 1. Detects total-mass differences.
    Constant,
    /// `tanh((x . e - center)/width)`, rescaled into the unit ball.
    SmoothedRamp { direction: Vec<f64>, center: f64, width: f64 },
    /// Compactly supported radial bump around a center point.
    RadialBump { center: Vec<f64>, profile: RadialProfile },
}

impl TestFunction {
    /// Unit-direction smoothed ramp.
    pub fn ramp(mut direction: Vec<f64>, center: f64, width: f64) -> Self {
        assert!(width > 0.0, "ramp width must be positive");
        let norm: f64 = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm > 0.0, "ramp direction must be nonzero");
        for v in &mut direction {
            *v /= norm;
        }
        TestFunction::SmoothedRamp { direction, center, width }
    }

    /// Evaluate the normalized test function.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Constant => 1.0,
            TestFunction::SmoothedRamp { direction, center, width } => {
                let t: f64 = direction.iter().zip(x).map(|(e, xi)| e * xi).sum();
                // sup |chi| <= 1 and sup |chi'| = 1/width, so dividing by
                // (1 + 1/width) certifies the combined norm.
                ((t - center) / width).tanh() / (1.0 + 1.0 / width)
            }
            TestFunction::RadialBump { center, profile } => {
                let r: f64 =
                    center.iter().zip(x).map(|(c, xi)| (xi - c) * (xi - c)).sum::<f64>().sqrt();
                profile.value(r) / (profile.value(0.0) + profile.grad_sup())
            }
        }
    }
}

/// A default trial family adapted to the two clouds: the constant function,
/// axis ramps through the joint centroid at several widths, and radial
/// bumps at each cloud's centroid.
pub fn default_trial_family(mu: &WeightedCloud, nu: &WeightedCloud) -> Vec<TestFunction> {
    let dim = mu.dim;
    let centroid = |c: &WeightedCloud| -> Vec<f64> {
        let mass = c.total_mass();
        let mut out = vec![0.0f64; dim];
        if mass <= 0.0 {
            return out;
        }
        for k in 0..c.len() {
            let p = c.point(k);
            for a in 0..dim {
                out[a] += c.weights[k] * p[a];
            }
        }
        for v in &mut out {
            *v /= mass;
        }
        out
    };
    let cm = centroid(mu);
    let cn = centroid(nu);
    let mut trials = vec![TestFunction::Constant];
    for a in 0..dim {
        let mut e = vec![0.0; dim];
        e[a] = 1.0;
        for &width in &[0.3, 1.0, 3.0] {
            trials.push(TestFunction::ramp(e.clone(), 0.5 * (cm[a] + cn[a]), width));
        }
    }
    for c in [cm, cn] {
        for &radius in &[1.0, 3.0] {
            trials.push(TestFunction::RadialBump {
                center: c.clone(),
                profile: RadialProfile::new(1.0, radius),
            });
        }
    }
    trials
}

/// Lower bound on the dual-norm distance `W`: the maximum over the trial
/// functions of `|∫ chi dmu - ∫ chi dnu|`. Every trial has certified
/// `W^{1,inf}` norm at most one, so each difference is a valid lower bound.
pub fn w_dual_lower_bound(mu: &WeightedCloud, nu: &WeightedCloud, trials: &[TestFunction]) -> f64 {
    let mut best = 0.0f64;
    for chi in trials {
        let im = mu.integrate(|x| chi.value(x));
        let inu = nu.integrate(|x| chi.value(x));
        best = best.max((im - inu).abs());
    }
    best
}

/// Hölder-1/2 seminorm of a density path, with the metric-equivalence
/// sandwich recorded alongside the value.
#[derive(Debug, Clone)]
pub struct HolderReport {
    /// `max W1(rho_s, rho_t) / sqrt(|t-s|)` over snapshot pairs in range.
    pub seminorm: f64,
    /// The pair of times realizing the maximum.
    pub argmax: (f64, f64),
    /// Lower sandwich factor: `W >= seminorm * lower_factor`.
    pub lower_factor: f64,
    /// Upper sandwich factor: `W <= seminorm * upper_factor`.
    pub upper_factor: f64,
    /// Number of pairs compared.
    pub pairs: usize,
}

/// Compute the Hölder-1/2 seminorm of a snapshot series over a closed time
/// interval (use an infinite upper end for "from T on"). Times must be
/// strictly increasing.
pub fn holder_seminorm(
    series: &[(f64, WeightedCloud)],
    interval: (f64, f64),
) -> Result<HolderReport, TransportError> {
    let in_range: Vec<&(f64, WeightedCloud)> = series
        .iter()
        .filter(|(t, _)| *t >= interval.0 && *t <= interval.1)
        .collect();
    if in_range.len() < 2 {
        return Err(TransportError::DegenerateSeries {
            detail: "need at least two snapshots inside the interval",
        });
    }
    for w in in_range.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(TransportError::DegenerateSeries {
                detail: "snapshot times must be strictly increasing",
            });
        }
    }
    let mut seminorm = 0.0f64;
    let mut argmax = (in_range[0].0, in_range[1].0);
    let mut pairs = 0usize;
    for i in 0..in_range.len() {
        for j in i + 1..in_range.len() {
            let (s, rho_s) = in_range[i];
            let (t, rho_t) = in_range[j];
            let w1 = w1_truncated(rho_s, rho_t)?.distance;
            let ratio = w1 / (t - s).abs().sqrt();
            pairs += 1;
            if ratio > seminorm {
                seminorm = ratio;
                argmax = (*s, *t);
            }
        }
    }
    // Metric sandwich 0.5 W <= W1 <= 2 W, so W lies in
    // [seminorm / 2, 2 seminorm] pairwise.
    Ok(HolderReport { seminorm, argmax, lower_factor: 0.5, upper_factor: 2.0, pairs })
}

/// Stationarity residual of a phase-space cloud under its own frozen flow:
/// the largest truncated-W1 distance between the spatial marginal and its
/// push-forward at probe times `|t| <= t_probe`. Zero exactly on discrete
/// equilibria (all momenta zero at critical points of the effective field).
pub fn seq_residual(
    f: &WeightedCloud,
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    kappa: f64,
    t_probe: f64,
) -> Result<f64, TransportError> {
    if f.dim % 2 != 0 {
        return Err(TransportError::DimensionMismatch { expected: 2 * (f.dim / 2).max(1), got: f.dim });
    }
    let space_dim = f.dim / 2;
    let rho = f.spatial_marginal(space_dim);
    let field = FrozenField {
        potential,
        sigma,
        kappa,
        sources: rho.points.clone(),
        weights: rho.weights.clone(),
        dim: space_dim,
    };
    let probe = FlowMapProbe { field, dt: 1e-2_f64.min(t_probe / 50.0) };
    let samples = 4usize;
    let mut residual = 0.0f64;
    for k in 1..=samples {
        let t = t_probe * k as f64 / samples as f64;
        for sign in [-1.0, 1.0] {
            let mut moved = Vec::with_capacity(rho.len() * space_dim);
            for idx in 0..f.len() {
                let z = f.point(idx);
                let (x, _) = probe.flow(&z[..space_dim], &z[space_dim..], sign * t);
                moved.extend_from_slice(&x);
            }
            let pushed = WeightedCloud::new(space_dim, moved, rho.weights.clone())?;
            let d = w1_truncated(&pushed, &rho)?.distance;
            residual = residual.max(d);
        }
    }
    Ok(residual)
}
