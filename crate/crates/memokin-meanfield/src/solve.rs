//! Reference solution of the kinetic system by weighted-particle
//! quadrature: the same integrator as the N-particle run, applied to the
//! quadrature ensemble, with states recorded at the history stride.

use crate::MeanfieldError;
use memokin_dynamics::{
    ForceField, HistoryBuffer, HistoryPolicy, ParticleEnsemble, Simulation,
};
use memokin_formfactor::InteractionKernel;
use memokin_kernel::KernelTable;
use memokin_potential::ExternalPotential;
use memokin_transport::WeightedCloud;

/// Weighted-particle approximation of `f(t)`, sampled at the history
/// stride; `states[k]` is the ensemble at `times[k]`.
#[derive(Debug, Clone)]
pub struct MeanfieldTrajectory {
    /// Step size used by the integrator.
    pub dt: f64,
    /// Snapshot stride in steps.
    pub stride: usize,
    /// Recorded times (multiples of `stride * dt`, starting at the initial
    /// ensemble time).
    pub times: Vec<f64>,
    /// Recorded ensembles.
    pub states: Vec<ParticleEnsemble>,
}

impl MeanfieldTrajectory {
    /// Final recorded state.
    pub fn final_state(&self) -> &ParticleEnsemble {
        self.states.last().expect("trajectory has at least the initial state")
    }

    /// Phase-space cloud `(q, p)` of the state at index `k`.
    pub fn phase_cloud(&self, k: usize) -> WeightedCloud {
        phase_cloud(&self.states[k])
    }

    /// Spatial cloud (positions only) of the state at index `k`.
    pub fn spatial_cloud(&self, k: usize) -> WeightedCloud {
        spatial_cloud(&self.states[k])
    }

    /// Index of the recorded time nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let mut best = 0;
        let mut gap = f64::INFINITY;
        for (k, &tk) in self.times.iter().enumerate() {
            let g = (tk - t).abs();
            if g < gap {
                gap = g;
                best = k;
            }
        }
        best
    }
}

/// Phase-space cloud `(q_k, p_k) in R^{2d}` of an ensemble.
pub fn phase_cloud(ens: &ParticleEnsemble) -> WeightedCloud {
    let d = ens.dim;
    let mut pts = Vec::with_capacity(ens.count * 2 * d);
    for k in 0..ens.count {
        pts.extend_from_slice(ens.position(k));
        pts.extend_from_slice(ens.momentum(k));
    }
    WeightedCloud::new(2 * d, pts, ens.w.clone()).expect("finite ensemble makes a valid cloud")
}

/// Spatial cloud (positions with the ensemble weights).
pub fn spatial_cloud(ens: &ParticleEnsemble) -> WeightedCloud {
    WeightedCloud::new(ens.dim, ens.q.clone(), ens.w.clone())
        .expect("finite ensemble makes a valid cloud")
}

/// Integrate the weighted ensemble under the memory force law up to
/// `t_end`, recording states every `stride` steps. This is the identical
/// code path as the N-particle run — only the weights differ.
#[allow(clippy::too_many_arguments)]
pub fn solve_meanfield(
    ens: ParticleEnsemble,
    kernel: &KernelTable,
    sigma: &InteractionKernel,
    potential: &ExternalPotential,
    drive: &memokin_dynamics::ExternalDrive,
    policy: HistoryPolicy,
    dt: f64,
    stride: usize,
    t_end: f64,
) -> Result<MeanfieldTrajectory, MeanfieldError> {
    let field = ForceField::new(kernel, sigma, potential, drive);
    let hist = HistoryBuffer::new(policy, dt, stride, kernel.window, sigma);
    let mut sim = Simulation::new(ens, hist, field, dt)?;
    let mut times = vec![sim.ens.t];
    let mut states = vec![sim.ens.clone()];
    sim.run(t_end, |state, step_index| {
        if step_index % stride == 0 {
            times.push(state.t);
            states.push(state.clone());
        }
    })?;
    Ok(MeanfieldTrajectory { dt, stride, times, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{discretize_density, DensityShape, DensitySpec, DiscretizationMode};
    use memokin_dynamics::ExternalDrive;
    use memokin_formfactor::RadialProfile;
    use memokin_transport::w1_truncated;

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

    fn ball_spec(radius: f64) -> DensitySpec {
        DensitySpec { dim: 1, shape: DensityShape::UniformBall { radius }, mass: 1.0 }
    }

    #[test]
    fn matches_a_direct_particle_run_bit_for_bit() {
        let spec = ball_spec(0.8);
        let ens = discretize_density(&spec, 36, DiscretizationMode::GridQuadrature).unwrap();
        let sigma = InteractionKernel::build(RadialProfile::new(1.0, 0.6), 1).unwrap();
        let kernel = toy_kernel(0.01, 400, 0.8);
        let pot = ExternalPotential::harmonic();
        let drive = ExternalDrive::Zero;
        let traj = solve_meanfield(
            ens.clone(),
            &kernel,
            &sigma,
            &pot,
            &drive,
            HistoryPolicy::Positions,
            0.02,
            2,
            1.0,
        )
        .unwrap();
        // Drive the dynamics API directly with the same inputs.
        let field = ForceField::new(&kernel, &sigma, &pot, &drive);
        let hist =
            HistoryBuffer::new(HistoryPolicy::Positions, 0.02, 2, kernel.window, &sigma);
        let mut sim = Simulation::new(ens, hist, field, 0.02).unwrap();
        sim.run(1.0, |_, _| {}).unwrap();
        let last = traj.final_state();
        assert_eq!(last.q, sim.ens.q, "identical code path must agree bitwise");
        assert_eq!(last.p, sim.ens.p);
        assert_eq!(traj.times.len(), 26); // t = 0 plus 25 recorded strides
    }

    #[test]
    fn particle_refinement_self_converges_in_w1() {
        let spec = ball_spec(0.8);
        let sigma = InteractionKernel::build(RadialProfile::new(1.0, 0.6), 1).unwrap();
        let kernel = toy_kernel(0.01, 400, 0.8);
        let pot = ExternalPotential::harmonic();
        let drive = ExternalDrive::Zero;
        let run = |nodes: usize| {
            let ens = discretize_density(&spec, nodes, DiscretizationMode::GridQuadrature).unwrap();
            solve_meanfield(
                ens,
                &kernel,
                &sigma,
                &pot,
                &drive,
                HistoryPolicy::Positions,
                0.02,
                5,
                1.0,
            )
            .unwrap()
        };
        let coarse = run(64);
        let mid = run(256);
        let fine = run(1024);
        let last = |t: &MeanfieldTrajectory| t.phase_cloud(t.states.len() - 1);
        let d_coarse = w1_truncated(&last(&coarse), &last(&mid)).unwrap().distance;
        let d_fine = w1_truncated(&last(&mid), &last(&fine)).unwrap().distance;
        assert!(
            d_fine < d_coarse,
            "refinement must contract: {d_fine} !< {d_coarse}"
        );
    }

    #[test]
    fn even_data_in_an_even_field_stays_even() {
        let spec = ball_spec(0.8);
        let ens = discretize_density(&spec, 64, DiscretizationMode::GridQuadrature).unwrap();
        let sigma = InteractionKernel::build(RadialProfile::new(1.0, 0.6), 1).unwrap();
        let kernel = toy_kernel(0.01, 400, 0.8);
        let pot = ExternalPotential::harmonic();
        let drive = ExternalDrive::Zero;
        let traj = solve_meanfield(
            ens,
            &kernel,
            &sigma,
            &pot,
            &drive,
            HistoryPolicy::Positions,
            0.02,
            5,
            1.0,
        )
        .unwrap();
        let last = traj.final_state();
        // Every particle's mirror image (-q, -p) must appear in the final
        // state with the same weight, up to accumulated rounding.
        for k in 0..last.count {
            let (qk, pk, wk) = (last.position(k)[0], last.momentum(k)[0], last.w[k]);
            let found = (0..last.count).any(|j| {
                (last.position(j)[0] + qk).abs() <= 1e-9
                    && (last.momentum(j)[0] + pk).abs() <= 1e-9
                    && (last.w[j] - wk).abs() <= 1e-12
            });
            assert!(found, "no mirror for particle {k} at ({qk}, {pk})");
        }
    }
}
