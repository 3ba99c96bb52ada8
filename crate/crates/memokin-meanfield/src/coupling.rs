//! The coupling experiment: an N-particle run and its mean-field twin.
//!
//! Both trajectories start from the same initial ensemble. The true run
//! feels the memory force generated by its own empirical history; the twin
//! feels the force generated by the reference solution's history instead.
//! The twin's stepper mirrors the particle stepper operation for
//! operation, so when the initial data and the reference coincide the two
//! runs agree bit for bit.

use crate::density::{discretize_density, DensitySpec, DiscretizationMode};
use crate::solve::{phase_cloud, MeanfieldTrajectory};
use crate::MeanfieldError;
use memokin_dynamics::{
    total_force, ExternalDrive, ForceField, HistoryBuffer, HistoryPolicy, ParticleEnsemble,
    Simulation,
};
use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_numerics::linfit::log_log_slope;
use memokin_potential::ExternalPotential;
use memokin_transport::w1_truncated;
use rayon::prelude::*;

/// Outcome of one coupled run.
#[derive(Debug, Clone)]
pub struct CouplingReport {
    /// Times at the snapshot stride (starting at the initial time).
    pub times: Vec<f64>,
    /// `max_k |z_k - z~_k|` (phase-space Euclidean norm) at `times`.
    pub max_error: Vec<f64>,
    /// Supremum of `max_k |z_k - z~_k|` over every step, not just the
    /// recorded ones.
    pub sup_error: f64,
    /// Times at which the transport distance to the reference was taken.
    pub w1_times: Vec<f64>,
    /// Truncated-metric distance between the true run's empirical phase
    /// cloud and the reference cloud at `w1_times`.
    pub w1_to_reference: Vec<f64>,
    /// Final state of the true N-particle run.
    pub final_true: ParticleEnsemble,
    /// Final state of the coupled (mean-field-driven) run.
    pub final_coupled: ParticleEnsemble,
}

/// Aggregate of a seed sweep over ensemble sizes.
#[derive(Debug, Clone)]
pub struct CouplingSweep {
    /// Ensemble sizes.
    pub ns: Vec<usize>,
    /// Per-size sup-errors, one entry per seed.
    pub sup_errors: Vec<Vec<f64>>,
    /// Per-size median sup-error.
    pub medians: Vec<f64>,
    /// Fitted log-log slope of median versus size (about -1/2 when the
    /// sampling error dominates).
    pub slope: f64,
}

/// Phase-space Euclidean distance between particle `k` of two ensembles.
fn particle_gap(a: &ParticleEnsemble, b: &ParticleEnsemble, k: usize) -> f64 {
    let d = a.dim;
    let mut acc = 0.0;
    for i in k * d..(k + 1) * d {
        acc += (a.q[i] - b.q[i]).powi(2) + (a.p[i] - b.p[i]).powi(2);
    }
    acc.sqrt()
}

fn max_gap(a: &ParticleEnsemble, b: &ParticleEnsemble) -> f64 {
    (0..a.count).map(|k| particle_gap(a, b, k)).fold(0.0, f64::max)
}

/// Run the coupling experiment from an explicit initial ensemble.
///
/// The step size and snapshot stride are taken from the reference
/// trajectory; the run marches to `t_end`, which the reference must cover.
/// `w1_every` selects how often (in recorded snapshots) the transport
/// distance to the reference is evaluated; `0` skips it entirely.
#[allow(clippy::too_many_arguments)]
pub fn coupled_run_from(
    ens0: ParticleEnsemble,
    reference: &MeanfieldTrajectory,
    kernel: &KernelTable,
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    drive: &ExternalDrive,
    policy: HistoryPolicy,
    t_end: f64,
    w1_every: usize,
) -> Result<CouplingReport, MeanfieldError> {
    let first = reference
        .states
        .first()
        .ok_or(MeanfieldError::MismatchedRuns { detail: "reference trajectory is empty" })?;
    if first.dim != ens0.dim {
        return Err(MeanfieldError::MismatchedRuns {
            detail: "reference and initial ensemble have different dimensions",
        });
    }
    if ens0.t != reference.times[0] {
        return Err(MeanfieldError::MismatchedRuns {
            detail: "initial ensemble time differs from the reference start time",
        });
    }
    let last_time = *reference.times.last().expect("nonempty");
    if t_end > last_time + 1e-9 * last_time.abs().max(1.0) {
        return Err(MeanfieldError::MismatchedRuns {
            detail: "reference trajectory does not cover the requested horizon",
        });
    }

    let dt = reference.dt;
    let stride = reference.stride;
    let dim = ens0.dim;
    let n = ens0.count;
    let steps = ((t_end - ens0.t) / dt).round().max(0.0) as usize;

    // True run: standard particle dynamics on its own history.
    let field = ForceField::new(kernel, sigma, potential, drive);
    let hist_true = HistoryBuffer::new(policy.clone(), dt, stride, kernel.window, sigma);
    let mut sim = Simulation::new(ens0.clone(), hist_true, field, dt)?;

    // Coupled run: same stepper, but the history holds reference states.
    let field_c = ForceField::new(kernel, sigma, potential, drive);
    let mut hist_c = HistoryBuffer::new(policy, dt, stride, kernel.window, sigma);
    hist_c.append(first, sigma)?;
    let mut ens = ens0;

    let mut times = vec![ens.t];
    let mut max_error = vec![max_gap(&sim.ens, &ens)];
    let mut sup_error = max_error[0];
    let mut w1_times = Vec::new();
    let mut w1_to_reference = Vec::new();
    let take_w1 = |recorded: usize,
                       state: &ParticleEnsemble,
                       out_t: &mut Vec<f64>,
                       out_d: &mut Vec<f64>|
     -> Result<(), MeanfieldError> {
        if w1_every > 0 && recorded % w1_every == 0 {
            let dist = w1_truncated(&phase_cloud(state), &reference.phase_cloud(recorded))?;
            out_t.push(state.t);
            out_d.push(dist.distance);
        }
        Ok(())
    };
    take_w1(0, &sim.ens, &mut w1_times, &mut w1_to_reference)?;

    let half = 0.5 * dt;
    for step_index in 1..=steps {
        sim.step()?;

        // Mirror of the particle stepper with the reference history.
        let t = ens.t;
        let f0 = total_force(&field_c, &ens.q, dim, t, &hist_c)?;
        for i in 0..n * dim {
            ens.p[i] += half * f0[i];
            ens.q[i] += dt * ens.p[i];
        }
        let f1 = total_force(&field_c, &ens.q, dim, t + dt, &hist_c)?;
        for i in 0..n * dim {
            ens.p[i] += half * f1[i];
        }
        ens.t = t + dt;
        if step_index % stride == 0 {
            let snap = reference.states.get(step_index / stride).ok_or(
                MeanfieldError::MismatchedRuns {
                    detail: "reference trajectory ran out of snapshots",
                },
            )?;
            hist_c.maybe_append(snap, sigma, step_index)?;
        }
        ens.check_finite()?;

        let gap = max_gap(&sim.ens, &ens);
        sup_error = sup_error.max(gap);
        if step_index % stride == 0 {
            times.push(ens.t);
            max_error.push(gap);
            take_w1(step_index / stride, &sim.ens, &mut w1_times, &mut w1_to_reference)?;
        }
    }

    Ok(CouplingReport {
        times,
        max_error,
        sup_error,
        w1_times,
        w1_to_reference,
        final_true: sim.ens.clone(),
        final_coupled: ens,
    })
}

/// Run the coupling experiment from `n` iid samples of the density drawn
/// with `seed` (shared by the true and the coupled trajectory).
#[allow(clippy::too_many_arguments)]
pub fn coupled_run(
    n: usize,
    seed: u64,
    spec: &DensitySpec,
    reference: &MeanfieldTrajectory,
    kernel: &KernelTable,
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    drive: &ExternalDrive,
    policy: HistoryPolicy,
    t_end: f64,
    w1_every: usize,
) -> Result<CouplingReport, MeanfieldError> {
    let ens0 = discretize_density(spec, n, DiscretizationMode::Iid { seed })?;
    coupled_run_from(ens0, reference, kernel, sigma, potential, drive, policy, t_end, w1_every)
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Sweep ensemble sizes and seeds, collecting the sup-error statistics
/// that the mean-field theorem controls. Seeds run in parallel; each run
/// is independent.
#[allow(clippy::too_many_arguments)]
pub fn coupling_sweep(
    spec: &DensitySpec,
    reference: &MeanfieldTrajectory,
    kernel: &KernelTable,
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    drive: &ExternalDrive,
    policy: HistoryPolicy,
    t_end: f64,
    ns: &[usize],
    seeds: &[u64],
) -> Result<CouplingSweep, MeanfieldError> {
    let mut sup_errors = Vec::with_capacity(ns.len());
    let mut medians = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut errs = seeds
            .par_iter()
            .map(|&seed| {
                coupled_run(
                    n,
                    seed,
                    spec,
                    reference,
                    kernel,
                    sigma,
                    potential,
                    drive,
                    policy.clone(),
                    t_end,
                    0,
                )
                .map(|rep| rep.sup_error)
            })
            .collect::<Result<Vec<f64>, MeanfieldError>>()?;
        errs.sort_by(f64::total_cmp);
        medians.push(median(&errs));
        sup_errors.push(errs);
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = log_log_slope(&xs, &medians);
    Ok(CouplingSweep { ns: ns.to_vec(), sup_errors, medians, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityShape;
    use crate::solve::solve_meanfield;

    fn toy_kernel(dt: f64, steps: usize, amplitude: f64) -> KernelTable {
        let p: Vec<f64> = (0..=steps)
            .map(|i| {
                let t = dt * i as f64;
                amplitude * t * (-t).exp()
            })
            .collect();
        let big_p: Vec<f64> = (0..=steps)
            .map(|i| {
                let t = dt * i as f64;
                -amplitude * (t + 1.0) * (-t).exp()
            })
            .collect();
        KernelTable::assemble(dt, p, big_p, 1e-9, None, Some(2.0))
    }

    struct Setup {
        spec: DensitySpec,
        sigma: InteractionKernel,
        kernel: KernelTable,
        pot: ExternalPotential,
        drive: ExternalDrive,
    }

    fn setup() -> Setup {
        Setup {
            spec: DensitySpec {
                dim: 1,
                shape: DensityShape::UniformBall { radius: 0.8 },
                mass: 1.0,
            },
            sigma: InteractionKernel::build(
                memokin_formfactor::RadialProfile::new(1.0, 0.6),
                1,
            )
            .unwrap(),
            kernel: toy_kernel(0.01, 400, 0.8),
            pot: ExternalPotential::harmonic(),
            drive: ExternalDrive::Zero,
        }
    }

    fn reference(s: &Setup, nodes: usize, t_end: f64) -> MeanfieldTrajectory {
        let ens =
            discretize_density(&s.spec, nodes, DiscretizationMode::GridQuadrature).unwrap();
        solve_meanfield(
            ens,
            &s.kernel,
            &s.sigma,
            &s.pot,
            &s.drive,
            HistoryPolicy::Positions,
            0.02,
            2,
            t_end,
        )
        .unwrap()
    }

    #[test]
    fn matched_run_has_exactly_zero_coupling_error() {
        let s = setup();
        let reference = reference(&s, 49, 1.0);
        let report = coupled_run_from(
            reference.states[0].clone(),
            &reference,
            &s.kernel,
            &s.sigma,
            &s.pot,
            &s.drive,
            HistoryPolicy::Positions,
            1.0,
            0,
        )
        .unwrap();
        assert_eq!(report.sup_error, 0.0, "matched runs must agree bit for bit");
        assert!(report.max_error.iter().all(|&e| e == 0.0));
        assert_eq!(report.final_true.q, report.final_coupled.q);
        assert_eq!(report.final_true.p, report.final_coupled.p);
    }

    #[test]
    fn initial_error_is_exactly_zero_and_grows_continuously() {
        let s = setup();
        let reference = reference(&s, 49, 1.0);
        let report = coupled_run(
            24,
            7,
            &s.spec,
            &reference,
            &s.kernel,
            &s.sigma,
            &s.pot,
            &s.drive,
            HistoryPolicy::Positions,
            1.0,
            5,
        )
        .unwrap();
        assert_eq!(report.max_error[0], 0.0, "shared initial data");
        assert!(report.sup_error > 0.0, "distinct fields must separate the runs");
        assert!(report.sup_error < 1.0, "short horizon keeps the drift small");
        assert_eq!(report.w1_times.len(), report.w1_to_reference.len());
        assert!(!report.w1_times.is_empty());
        // The t = 0 transport distance reflects the iid sampling gap only.
        assert!(report.w1_to_reference[0] > 0.0);
        assert!(report.w1_to_reference[0] < 0.5);
    }

    #[test]
    fn horizon_beyond_the_reference_is_rejected() {
        let s = setup();
        let reference = reference(&s, 25, 0.5);
        let err = coupled_run(
            8,
            1,
            &s.spec,
            &reference,
            &s.kernel,
            &s.sigma,
            &s.pot,
            &s.drive,
            HistoryPolicy::Positions,
            1.0,
            0,
        )
        .unwrap_err();
        assert!(matches!(err, MeanfieldError::MismatchedRuns { .. }));
    }

    #[test]
    fn seed_sweep_reports_monotone_medians_and_a_negative_slope() {
        let s = setup();
        let reference = reference(&s, 49, 0.6);
        let sweep = coupling_sweep(
            &s.spec,
            &reference,
            &s.kernel,
            &s.sigma,
            &s.pot,
            &s.drive,
            HistoryPolicy::Positions,
            0.6,
            &[8, 32, 128],
            &[1, 2, 3, 4, 5, 6, 7],
        )
        .unwrap();
        assert_eq!(sweep.medians.len(), 3);
        assert!(sweep.slope < 0.0, "medians must decay with N, slope {}", sweep.slope);
        assert!(
            sweep.medians[2] < sweep.medians[0],
            "largest N beats smallest: {:?}",
            sweep.medians
        );
    }
}
