//! Functionals of the interaction field along a recorded trajectory.
//!
//! All three functionals here are built on the same object: the mass-flux
//! field
//!
//! ```text
//! h(t, x) = d/dt (Sigma * rho_t)(x) = -sum_k w_k p_k(t) . grad Sigma(x - q_k(t)),
//! ```
//!
//! evaluated analytically from the particle data (the weak form of the
//! continuity equation), never by differencing recorded fields.  Supremum
//! norms are taken over a sampling grid that covers the particle cloud
//! inflated by the form-factor support, with spacing at most
//! `support(Sigma) / 16` — the smoothness scale of anything `Sigma` touches.
//!
//! `W^{1,inf}` norms use the root-sum-of-squares ("jet") convention
//! `(sup|h|^2 + sup|grad h|^2)^{1/2}`, the same convention as the
//! form-factor control estimates.

use crate::DiagnosticsError;
use memokin_dynamics::ParticleEnsemble;
use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_numerics::grid::TensorGrid;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Sup-norm grid spacing: at most the form-factor support over this.
const SUP_GRID_DIVISOR: f64 = 16.0;
/// Relative slack when checking that recorded times are uniformly spaced.
const UNIFORM_SPACING_TOL: f64 = 1e-9;

/// Time spacing of the recorded states, or an error when the series is too
/// short or non-uniform.
fn uniform_spacing(states: &[ParticleEnsemble]) -> Result<f64, DiagnosticsError> {
    if states.len() < 2 {
        return Err(DiagnosticsError::DegenerateSeries {
            detail: "need at least two recorded states",
        });
    }
    let delta = states[1].t - states[0].t;
    if !(delta > 0.0) {
        return Err(DiagnosticsError::DegenerateSeries {
            detail: "recorded times must be strictly increasing",
        });
    }
    for w in states.windows(2) {
        if ((w[1].t - w[0].t) - delta).abs() > UNIFORM_SPACING_TOL * delta.max(1.0) {
            return Err(DiagnosticsError::DegenerateSeries {
                detail: "recorded times must be uniformly spaced",
            });
        }
    }
    Ok(delta)
}

/// Trapezoid quadrature weights on a uniform grid of `n` nodes.
fn trapezoid_weights(n: usize, delta: f64) -> Vec<f64> {
    let mut c = vec![delta; n];
    c[0] = 0.5 * delta;
    c[n - 1] = 0.5 * delta;
    c
}

/// Largest `|t|` at which `P` can be nonzero.
fn p_range(kernel: &KernelTable) -> f64 {
    match kernel.exact_support {
        Some(bound) => bound.min(kernel.t_end()),
        None => kernel.t_end(),
    }
}

/// `h(t, x)` and `grad h(t, x)` on every node of `grid`.
///
/// `values[g]` holds `h` at node `g`; `grads[g*d .. (g+1)*d]` its gradient
/// `-sum_k w_k hess Sigma(x - q_k) p_k`.
fn mass_flux_field(
    state: &ParticleEnsemble,
    sigma: &InteractionKernel,
    grid: &TensorGrid,
) -> (Vec<f64>, Vec<f64>) {
    let d = state.dim;
    let support2 = sigma.support_radius() * sigma.support_radius();
    let mut values = vec![0.0; grid.len()];
    let mut grads = vec![0.0; grid.len() * d];
    let mut diff = vec![0.0; d];
    let mut gsig = vec![0.0; d];
    let mut hess = vec![0.0; d * d];
    grid.for_each_point(|flat, x| {
        let mut val = 0.0;
        let grad = &mut grads[flat * d..(flat + 1) * d];
        for k in 0..state.count {
            let qk = state.position(k);
            let mut r2 = 0.0;
            for a in 0..d {
                diff[a] = x[a] - qk[a];
                r2 += diff[a] * diff[a];
            }
            if r2 >= support2 {
                continue;
            }
            let pk = state.momentum(k);
            let w = state.w[k];
            sigma.gradient(&diff, &mut gsig);
            for a in 0..d {
                val -= w * pk[a] * gsig[a];
            }
            sigma.hessian(&diff, &mut hess);
            for a in 0..d {
                let mut hp = 0.0;
                for b in 0..d {
                    hp += hess[a * d + b] * pk[b];
                }
                grad[a] -= w * hp;
            }
        }
        values[flat] = val;
    });
    (values, grads)
}

/// Sup of `|values|` and sup of the Euclidean norm of the `d`-vectors in
/// `grads`.
fn field_sups(values: &[f64], grads: &[f64], d: usize) -> (f64, f64) {
    let sup_val = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut sup_grad = 0.0f64;
    for g in grads.chunks_exact(d) {
        sup_grad = sup_grad.max(g.iter().map(|v| v * v).sum::<f64>().sqrt());
    }
    (sup_val, sup_grad)
}

/// `||d/dt (Sigma * rho)(t)||_{W^{1,inf}}` sampled at every recorded state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxationSeries {
    /// Recorded times.
    pub times: Vec<f64>,
    /// Jet norm `(sup^2 + sup-grad^2)^{1/2}` at each time.
    pub values: Vec<f64>,
    /// `sup_x |h(t, x)|` component.
    pub sup_values: Vec<f64>,
    /// `sup_x |grad h(t, x)|` component.
    pub sup_grads: Vec<f64>,
}

/// Evaluate the relaxation functional at every recorded state.
///
/// Each state gets its own covering grid (the grid moves with the cloud), so
/// a freely translating ensemble reports a constant value instead of leaving
/// the sampled region.
pub fn relaxation_series(states: &[ParticleEnsemble], sigma: &InteractionKernel) -> RelaxationSeries {
    let support = sigma.support_radius();
    let mut out = RelaxationSeries {
        times: Vec::with_capacity(states.len()),
        values: Vec::with_capacity(states.len()),
        sup_values: Vec::with_capacity(states.len()),
        sup_grads: Vec::with_capacity(states.len()),
    };
    for state in states {
        let grid =
            TensorGrid::covering_cloud(&state.q, state.dim, support, support / SUP_GRID_DIVISOR);
        let (values, grads) = mass_flux_field(state, sigma, &grid);
        let (sup_val, sup_grad) = field_sups(&values, &grads, state.dim);
        out.times.push(state.t);
        out.values.push((sup_val * sup_val + sup_grad * sup_grad).sqrt());
        out.sup_values.push(sup_val);
        out.sup_grads.push(sup_grad);
    }
    out
}

/// Prefix values of the dissipation functional `k(T)` at the recorded times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipationSeries {
    /// Recorded times `T_m`.
    pub times: Vec<f64>,
    /// `k(T_m)`; nonpositive up to quadrature roundoff.
    pub values: Vec<f64>,
}

/// Dissipation functional
/// `k(T) = (1/2) int_0^T int_0^T g(t, s) P(t - s) dt ds` where
/// `g(t, s) = int (Sigma * d_t rho)(s) d(d_t rho)(t)`, evaluated in weak form
/// as the exact particle double sum
///
/// ```text
/// g(t, s) = -sum_{k,l} w_k w_l p_k(t)^T hess Sigma(q_k(t) - q_l(s)) p_l(s).
/// ```
///
/// The double time integral uses trapezoid weights on the recorded grid.
/// The discrete value inherits the continuum sign: `[g(t_i, t_j)]` is a Gram
/// matrix of the positive-definite form factor and `[-P(t_i - t_j)]` is
/// positive semidefinite because `P` has a nonpositive Fourier transform, so
/// their entrywise product is again positive semidefinite and every prefix
/// quadratic form `k(T_m)` is `<= 0` regardless of how coarse the recording
/// is — the tolerance in downstream checks only absorbs spline and float
/// roundoff.
pub fn dissipation_kt(
    states: &[ParticleEnsemble],
    sigma: &InteractionKernel,
    kernel: &KernelTable,
) -> Result<DissipationSeries, DiagnosticsError> {
    let delta = uniform_spacing(states)?;
    let s_count = states.len();
    let d = states[0].dim;
    for st in states {
        if st.dim != d {
            return Err(DiagnosticsError::MismatchedInputs {
                detail: "all recorded states must share one dimension",
            });
        }
    }
    let range = p_range(kernel);
    let support2 = sigma.support_radius() * sigma.support_radius();

    // Banded matrix of g(t_i, t_j) P(t_i - t_j); entries beyond the kernel
    // range are exactly zero and never computed.
    let mut weighted = vec![0.0; s_count * s_count];
    let mut diff = vec![0.0; d];
    let mut hess = vec![0.0; d * d];
    for i in 0..s_count {
        for j in 0..=i {
            let dt_ij = states[i].t - states[j].t;
            if dt_ij.abs() > range {
                continue;
            }
            let p_val = kernel.big_p_at(dt_ij);
            if p_val == 0.0 {
                continue;
            }
            let (si, sj) = (&states[i], &states[j]);
            let mut g = 0.0;
            for k in 0..si.count {
                let qk = si.position(k);
                let pk = si.momentum(k);
                let wk = si.w[k];
                for l in 0..sj.count {
                    let ql = sj.position(l);
                    let mut r2 = 0.0;
                    for a in 0..d {
                        diff[a] = qk[a] - ql[a];
                        r2 += diff[a] * diff[a];
                    }
                    if r2 >= support2 {
                        continue;
                    }
                    sigma.hessian(&diff, &mut hess);
                    let pl = sj.momentum(l);
                    let mut quad = 0.0;
                    for a in 0..d {
                        for b in 0..d {
                            quad += pk[a] * hess[a * d + b] * pl[b];
                        }
                    }
                    g -= wk * sj.w[l] * quad;
                }
            }
            let m = g * p_val;
            weighted[i * s_count + j] = m;
            weighted[j * s_count + i] = m;
        }
    }

    let mut values = Vec::with_capacity(s_count);
    values.push(0.0);
    for m in 1..s_count {
        let c = trapezoid_weights(m + 1, delta);
        let mut acc = 0.0;
        for i in 0..=m {
            let row = &weighted[i * s_count..i * s_count + m + 1];
            let mut inner = 0.0;
            for j in 0..=m {
                inner += c[j] * row[j];
            }
            acc += c[i] * inner;
        }
        values.push(0.5 * acc);
    }

    Ok(DissipationSeries { times: states.iter().map(|s| s.t).collect(), values })
}

/// Result of the windowed-in-time field functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyL2Report {
    /// `int ||A(t)||^2_{W^{1,inf}} dt` with
    /// `A(t) = int_0^T P(t - s) h(s) ds` over the recorded window.
    pub value: f64,
    /// Time step of both the `s`-quadrature and the `t`-sampling (the
    /// recording cadence); first-order control on the quadrature error.
    pub time_step: f64,
    /// Spacing of the spatial sup-norm grid (`<= support / 16`).
    pub grid_spacing: f64,
    /// Node count of the spatial grid.
    pub grid_nodes: usize,
    /// Sample times of the convolution output (extends one kernel range
    /// beyond the recording on both sides).
    pub times: Vec<f64>,
    /// Jet norm `||A(t)||_{W^{1,inf}}` per sample time.
    pub norms: Vec<f64>,
}

/// Evaluate `int_R || int_0^T P(t - s) (d/dt)(Sigma * rho)(s) ds ||^2_{W^{1,inf}} dt`
/// on a recorded trajectory.
///
/// The inner integral runs over the recorded window `[t_0, t_0 + T]`
/// (trapezoid weights); the outer one over `[t_0 - range, t_0 + T + range]`
/// where `range` is the kernel support in time, outside of which the
/// integrand vanishes identically.  One fixed grid covering the whole run
/// carries the sup norms, and per-snapshot fields are cached in a sliding
/// window so each is computed exactly once.
pub fn key_l2_functional(
    states: &[ParticleEnsemble],
    sigma: &InteractionKernel,
    kernel: &KernelTable,
) -> Result<KeyL2Report, DiagnosticsError> {
    let delta = uniform_spacing(states)?;
    let s_count = states.len();
    let d = states[0].dim;
    let support = sigma.support_radius();

    let all_positions: Vec<f64> = states.iter().flat_map(|s| s.q.iter().copied()).collect();
    let grid = TensorGrid::covering_cloud(&all_positions, d, support, support / SUP_GRID_DIVISOR);

    let c = trapezoid_weights(s_count, delta);
    let range = p_range(kernel);
    let pad = (range / delta).ceil() as usize;
    let t_samples = s_count + 2 * pad;
    let t_first = states[0].t - pad as f64 * delta;

    struct CachedField {
        index: usize,
        values: Vec<f64>,
        grads: Vec<f64>,
    }
    let mut window: VecDeque<CachedField> = VecDeque::new();
    let mut next = 0usize;

    let g_len = grid.len();
    let mut a_val = vec![0.0; g_len];
    let mut a_grad = vec![0.0; g_len * d];
    let mut times = Vec::with_capacity(t_samples);
    let mut norms = Vec::with_capacity(t_samples);

    for j in 0..t_samples {
        let t = t_first + j as f64 * delta;
        while next < s_count && states[next].t <= t + range + 0.5 * delta {
            let (values, grads) = mass_flux_field(&states[next], sigma, &grid);
            window.push_back(CachedField { index: next, values, grads });
            next += 1;
        }
        while window
            .front()
            .is_some_and(|f| states[f.index].t < t - range - 0.5 * delta)
        {
            window.pop_front();
        }

        a_val.fill(0.0);
        a_grad.fill(0.0);
        for field in &window {
            let coeff = c[field.index] * kernel.big_p_at(t - states[field.index].t);
            if coeff == 0.0 {
                continue;
            }
            for (acc, v) in a_val.iter_mut().zip(&field.values) {
                *acc += coeff * v;
            }
            for (acc, v) in a_grad.iter_mut().zip(&field.grads) {
                *acc += coeff * v;
            }
        }
        let (sup_val, sup_grad) = field_sups(&a_val, &a_grad, d);
        times.push(t);
        norms.push((sup_val * sup_val + sup_grad * sup_grad).sqrt());
    }

    // Trapezoid in t of the squared norms; the integrand vanishes at both
    // ends by construction of the padding.
    let mut value = 0.0;
    for w in norms.windows(2) {
        value += 0.5 * delta * (w[0] * w[0] + w[1] * w[1]);
    }

    Ok(KeyL2Report {
        value,
        time_step: delta,
        grid_spacing: grid.dx.iter().cloned().fold(0.0f64, f64::max),
        grid_nodes: g_len,
        times,
        norms,
    })
}
