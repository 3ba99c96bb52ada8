//! Memory force evaluation.
//!
//! The force on particle `k` at time `t` is
//!
//! ```text
//! F_k = -grad V(q_k) - grad Phi0(t, q_k)
//!       + int_0^t p(t - s) sum_j w_j grad Sigma(q_k(t) - q_j(s)) ds,
//! ```
//!
//! with the history integral truncated at the kernel window and discretized
//! by the composite trapezoid rule over the stored snapshots. The `j` sum
//! includes `j = k`: self-interaction through the medium is part of the
//! model, and it is benign because `grad Sigma(0) = 0` and `p(0) = 0`.
//!
//! Determinism: for each particle the snapshot loop is ordered oldest-first,
//! within a snapshot the pair sum follows the fixed cell-visit order, and the
//! final reduction over snapshots is a pairwise tree per component. Particles
//! are mapped in index order, so results are independent of the worker count.

use crate::history::{interpolate_field, trapezoid_coefficients, HistoryBuffer, HistoryPolicy, Snapshot};
use crate::{DynamicsError, ExternalDrive};
use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_numerics::reduce::{deterministic_map, pairwise_sum};
use memokin_potential::ExternalPotential;

/// The static ingredients of the force law.
pub struct ForceField<'a> {
    /// Memory kernel table (supplies `p` and the truncation window).
    pub kernel: &'a KernelTable,
    /// Interaction form factor `Sigma`.
    pub sigma: &'a InteractionKernel,
    /// Confining potential `V`.
    pub potential: &'a ExternalPotential,
    /// Transient drive `Phi0`.
    pub drive: &'a ExternalDrive,
    /// Test knob scaling the interaction part of the force (memory term and
    /// drive, not the confining potential). Production value is `1.0`; the
    /// fault-injection tests set it to `2.0` to make a run that must violate
    /// the recorded characteristic bounds.
    pub interaction_scale: f64,
}

impl<'a> ForceField<'a> {
    /// Field with the production scale of one.
    pub fn new(
        kernel: &'a KernelTable,
        sigma: &'a InteractionKernel,
        potential: &'a ExternalPotential,
        drive: &'a ExternalDrive,
    ) -> Self {
        ForceField { kernel, sigma, potential, drive, interaction_scale: 1.0 }
    }

    /// Rigorous bound on the memory-force magnitude at time `t` for total
    /// source mass `mass`: `mass * sup|grad Sigma| * int_0^t |p|`.
    pub fn memory_grad_bound(&self, mass: f64, t: f64) -> f64 {
        let prefix = self.kernel.p_l1_prefix();
        let idx = ((t / self.kernel.dt).floor() as usize).min(prefix.len() - 1);
        mass * self.sigma.grad_sup_norm() * prefix[idx.max(0)]
    }
}

/// Total force (memory + potential + drive) on every particle at positions
/// `positions` and time `t`, using the snapshot history in `hist`.
///
/// The positions may differ from those in the newest snapshot — the
/// integrator re-evaluates the force at updated positions against the same
/// snapshot set.
pub fn total_force(
    field: &ForceField,
    positions: &[f64],
    dim: usize,
    t: f64,
    hist: &HistoryBuffer,
) -> Result<Vec<f64>, DynamicsError> {
    let mut out = memory_force(field, positions, dim, t, hist)?;
    let n = positions.len() / dim;
    let mut grad_v = [0.0f64; 3];
    let mut grad_d = [0.0f64; 3];
    for k in 0..n {
        let x = &positions[k * dim..(k + 1) * dim];
        field.potential.gradient(x, &mut grad_v[..dim]);
        field.drive.gradient(t, x, &mut grad_d[..dim]);
        for a in 0..dim {
            let f = &mut out[k * dim + a];
            *f = field.interaction_scale * (*f - grad_d[a]) - grad_v[a];
        }
    }
    for k in 0..n {
        if out[k * dim..(k + 1) * dim].iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFiniteForce { particle: k });
        }
    }
    Ok(out)
}

/// Memory term of the force (no potential, no drive, no scaling).
pub fn memory_force(
    field: &ForceField,
    positions: &[f64],
    dim: usize,
    t: f64,
    hist: &HistoryBuffer,
) -> Result<Vec<f64>, DynamicsError> {
    let n = positions.len() / dim;
    let lo = (t - field.kernel.window).max(0.0);
    match (hist.earliest_time(), hist.latest_time()) {
        (Some(e), Some(l))
            if e <= lo + 0.5 * hist.stride() + 1e-12 && l >= t - hist.stride() - 1e-12 => {}
        (earliest, _) => {
            return Err(DynamicsError::HistoryUnderrun {
                needed: lo,
                earliest: earliest.unwrap_or(f64::INFINITY),
            })
        }
    }
    let snaps = hist.snapshots_between(lo, t);
    let times: Vec<f64> = snaps.iter().map(|s| s.time).collect();
    let coeffs = trapezoid_coefficients(&times);
    // Combined scalar weight per snapshot: trapezoid coefficient times the
    // kernel value at the lag.
    let scales: Vec<f64> = times
        .iter()
        .zip(&coeffs)
        .map(|(&s, &c)| c * field.kernel.p_at(t - s))
        .collect();

    match &hist.policy {
        HistoryPolicy::Positions => {
            let rows: Vec<[f64; 3]> = deterministic_map(n, |k| {
                let x = &positions[k * dim..(k + 1) * dim];
                particle_memory_force(field.sigma, x, dim, &snaps, &scales)
            });
            let mut out = vec![0.0f64; n * dim];
            for (k, row) in rows.iter().enumerate() {
                out[k * dim..(k + 1) * dim].copy_from_slice(&row[..dim]);
            }
            Ok(out)
        }
        HistoryPolicy::GriddedField { grid } => {
            // Accumulate the combined field on the grid once, then
            // interpolate per particle.
            let mut combined = vec![0.0f64; grid.len() * dim];
            for (snap, &scale) in snaps.iter().zip(&scales) {
                if scale == 0.0 {
                    continue;
                }
                let table = snap
                    .field
                    .as_ref()
                    .expect("gridded history buffer must carry field tables");
                for (acc, &v) in combined.iter_mut().zip(table) {
                    *acc += scale * v;
                }
            }
            let rows: Vec<Result<[f64; 3], DynamicsError>> = deterministic_map(n, |k| {
                let x = &positions[k * dim..(k + 1) * dim];
                let mut f = [0.0f64; 3];
                interpolate_field(grid, &combined, x, &mut f[..dim])?;
                Ok(f)
            });
            let mut out = vec![0.0f64; n * dim];
            for (k, row) in rows.into_iter().enumerate() {
                out[k * dim..(k + 1) * dim].copy_from_slice(&row?[..dim]);
            }
            Ok(out)
        }
    }
}

/// Memory force on a single target point under the positions policy:
/// per-snapshot pair sums in cell-visit order, then a pairwise tree over
/// snapshots per component.
fn particle_memory_force(
    sigma: &InteractionKernel,
    x: &[f64],
    dim: usize,
    snaps: &[&Snapshot],
    scales: &[f64],
) -> [f64; 3] {
    let mut partial = vec![[0.0f64; 3]; snaps.len()];
    let mut disp = [0.0f64; 3];
    let mut grad = [0.0f64; 3];
    for (si, snap) in snaps.iter().enumerate() {
        let scale = scales[si];
        if scale == 0.0 {
            continue;
        }
        let cells = snap
            .cells
            .as_ref()
            .expect("positions-policy snapshot must carry a cell map");
        let mut acc = [0.0f64; 3];
        cells.visit_neighbors(x, |j| {
            let j = j as usize;
            let q = &snap.positions[j * dim..(j + 1) * dim];
            for a in 0..dim {
                disp[a] = x[a] - q[a];
            }
            // `gradient` is identically zero beyond the support, so the
            // cell pruning (which only skips such pairs) is exact.
            sigma.gradient(&disp[..dim], &mut grad[..dim]);
            let w = snap.weights[j];
            for a in 0..dim {
                acc[a] += w * grad[a];
            }
        });
        for a in 0..dim {
            partial[si][a] = scale * acc[a];
        }
    }
    let mut force = [0.0f64; 3];
    let mut column = vec![0.0f64; snaps.len()];
    for a in 0..dim {
        for (c, row) in column.iter_mut().zip(&partial) {
            *c = row[a];
        }
        force[a] = pairwise_sum(&column);
    }
    force
}

/// Reference evaluation: plain ascending double sum over every stored
/// snapshot and every pair, with no window truncation, no pair pruning and
/// no tree reduction. Slow; used to pin the production path in tests.
pub fn brute_force_reference(
    field: &ForceField,
    positions: &[f64],
    dim: usize,
    t: f64,
    hist: &HistoryBuffer,
) -> Vec<f64> {
    let snaps: Vec<&Snapshot> = hist
        .all_snapshots()
        .filter(|s| s.time <= t + 1e-12)
        .collect();
    let times: Vec<f64> = snaps.iter().map(|s| s.time).collect();
    let coeffs = trapezoid_coefficients(&times);
    let n = positions.len() / dim;
    let mut out = vec![0.0f64; n * dim];
    let mut disp = [0.0f64; 3];
    let mut grad = [0.0f64; 3];
    for k in 0..n {
        let x = &positions[k * dim..(k + 1) * dim];
        for (si, snap) in snaps.iter().enumerate() {
            let scale = coeffs[si] * field.kernel.p_at(t - snap.time);
            let m = snap.positions.len() / dim;
            for j in 0..m {
                let q = &snap.positions[j * dim..(j + 1) * dim];
                for a in 0..dim {
                    disp[a] = x[a] - q[a];
                }
                field.sigma.gradient(&disp[..dim], &mut grad[..dim]);
                for a in 0..dim {
                    out[k * dim + a] += scale * snap.weights[j] * grad[a];
                }
            }
        }
        let mut grad_v = [0.0f64; 3];
        let mut grad_d = [0.0f64; 3];
        field.potential.gradient(x, &mut grad_v[..dim]);
        field.drive.gradient(t, x, &mut grad_d[..dim]);
        for a in 0..dim {
            let f = &mut out[k * dim + a];
            *f = field.interaction_scale * (*f - grad_d[a]) - grad_v[a];
        }
    }
    out
}
