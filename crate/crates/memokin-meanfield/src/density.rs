//! Analytic initial phase-space densities and their particle quadratures.
//!
//! A density spec describes `f0` in closed form on `R^d x R^d`; the
//! discretizer turns it into a weighted ensemble either by deterministic
//! midpoint quadrature on a tensor grid (weights = cell mass) or by iid
//! sampling (uniform weights).

use crate::MeanfieldError;
use memokin_dynamics::ParticleEnsemble;
use memokin_numerics::grid::TensorGrid;
use memokin_numerics::quad::integrate_panels;
use memokin_numerics::rng::seeded;
use rand::Rng;
use rand_distr::StandardNormal;

/// Shape of the initial density, always centered at the phase-space origin.
#[derive(Debug, Clone)]
pub enum DensityShape {
    /// Product of centered Gaussians, truncated to the box
    /// `[-half_width, half_width]^{2d}`: standard deviation `sigma_x` on
    /// every position axis, `sigma_v` on every momentum axis.
    GaussianProduct {
        /// Position-axis standard deviation.
        sigma_x: f64,
        /// Momentum-axis standard deviation.
        sigma_v: f64,
        /// Truncation half-width (same on all axes).
        half_width: f64,
    },
    /// Uniform density on the phase-space ball `|z| <= radius`.
    UniformBall {
        /// Ball radius in `R^{2d}`.
        radius: f64,
    },
}

/// Analytic description of the initial density `f0`, with total mass.
#[derive(Debug, Clone)]
pub struct DensitySpec {
    /// Spatial dimension `d` (phase space has `2d` coordinates).
    pub dim: usize,
    /// Density shape.
    pub shape: DensityShape,
    /// Total mass (the paper's default is 1).
    pub mass: f64,
}

/// How to turn a density into particles.
#[derive(Debug, Clone, Copy)]
pub enum DiscretizationMode {
    /// Tensor midpoint quadrature: deterministic nodes, weights = cell mass,
    /// renormalized so the weights sum to the total mass exactly.
    GridQuadrature,
    /// Independent samples from the density with uniform weights.
    Iid {
        /// Sampling seed; two seeds give different point sets of equal mass.
        seed: u64,
    },
}

impl DensitySpec {
    /// Phase-space dimension `2d`.
    pub fn phase_dim(&self) -> usize {
        2 * self.dim
    }

    /// Normalized density value at the phase point `z = (x, v)`.
    pub fn value(&self, z: &[f64]) -> f64 {
        assert_eq!(z.len(), self.phase_dim());
        match &self.shape {
            DensityShape::GaussianProduct { sigma_x, sigma_v, half_width } => {
                let d = self.dim;
                let mut val = self.mass;
                for (a, &u) in z.iter().enumerate() {
                    if u.abs() > *half_width {
                        return 0.0;
                    }
                    let s = if a < d { *sigma_x } else { *sigma_v };
                    val *= (-0.5 * u * u / (s * s)).exp() / truncated_gauss_norm(s, *half_width);
                }
                val
            }
            DensityShape::UniformBall { radius } => {
                let r2: f64 = z.iter().map(|u| u * u).sum();
                if r2 <= radius * radius {
                    self.mass / ball_volume(self.phase_dim(), *radius)
                } else {
                    0.0
                }
            }
        }
    }

    /// Certified supremum of the density.
    pub fn linf_bound(&self) -> f64 {
        match &self.shape {
            DensityShape::GaussianProduct { .. } => self.value(&vec![0.0; self.phase_dim()]),
            DensityShape::UniformBall { radius } => {
                self.mass / ball_volume(self.phase_dim(), *radius)
            }
        }
    }

    /// Axis-aligned bounding box of the support.
    pub fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        let half = match &self.shape {
            DensityShape::GaussianProduct { half_width, .. } => *half_width,
            DensityShape::UniformBall { radius } => *radius,
        };
        (vec![-half; self.phase_dim()], vec![half; self.phase_dim()])
    }

    /// One iid sample from the density.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        match &self.shape {
            DensityShape::GaussianProduct { sigma_x, sigma_v, half_width } => {
                let d = self.dim;
                (0..self.phase_dim())
                    .map(|a| {
                        let s = if a < d { *sigma_x } else { *sigma_v };
                        loop {
                            let u: f64 = rng.sample::<f64, _>(StandardNormal) * s;
                            if u.abs() <= *half_width {
                                return u;
                            }
                        }
                    })
                    .collect()
            }
            DensityShape::UniformBall { radius } => {
                let n = self.phase_dim();
                let mut dir: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let norm: f64 = dir.iter().map(|u| u * u).sum::<f64>().sqrt();
                let u: f64 = rng.gen_range(0.0..1.0f64);
                let r = radius * u.powf(1.0 / n as f64);
                for c in &mut dir {
                    *c *= r / norm;
                }
                dir
            }
        }
    }

    /// Mean energy `∫ (V(x) + |v|^2/2) f0 dz` by midpoint quadrature with
    /// the given per-axis cell count.
    pub fn mean_energy(
        &self,
        potential: &memokin_potential::ExternalPotential,
        cells_per_axis: usize,
    ) -> f64 {
        let (min, max) = self.support_box();
        let cells = vec![cells_per_axis; self.phase_dim()];
        let grid = TensorGrid::cell_centers(&min, &max, &cells);
        let vol = grid.cell_volume();
        let d = self.dim;
        let mut total = 0.0;
        let mut mass = 0.0;
        grid.for_each_point(|_, z| {
            let f = self.value(z);
            if f > 0.0 {
                let kin: f64 = z[d..].iter().map(|v| 0.5 * v * v).sum();
                total += f * vol * (potential.value(&z[..d]) + kin);
                mass += f * vol;
            }
        });
        // Renormalize the quadrature mass so the energy is exact for
        // constant integrands regardless of resolution.
        total * self.mass / mass
    }
}

/// `∫_{-h}^{h} exp(-u^2 / (2 s^2)) du` for the truncated Gaussian factor.
fn truncated_gauss_norm(sigma: f64, half_width: f64) -> f64 {
    integrate_panels(
        |u| (-0.5 * u * u / (sigma * sigma)).exp(),
        -half_width,
        half_width,
        24,
        8,
    )
}

/// Volume of the `n`-ball of the given radius for even `n = 2d`:
/// `pi^d r^{2d} / d!`.
fn ball_volume(n: usize, radius: f64) -> f64 {
    assert!(n % 2 == 0, "phase space has even dimension");
    let d = n / 2;
    let mut vol = radius.powi(n as i32);
    for k in 1..=d {
        vol *= std::f64::consts::PI / k as f64;
    }
    vol
}

/// Discretize a density into a weighted particle ensemble at time zero.
///
/// Grid mode places nodes at tensor-cell midpoints with weights equal to
/// the cell mass (zero-weight cells dropped, weights renormalized to the
/// exact total mass); iid mode draws `nodes` samples with uniform weights.
pub fn discretize_density(
    spec: &DensitySpec,
    nodes: usize,
    mode: DiscretizationMode,
) -> Result<ParticleEnsemble, MeanfieldError> {
    if nodes == 0 {
        return Err(MeanfieldError::BadSpec { detail: "node count must be at least 1" });
    }
    let pd = spec.phase_dim();
    let d = spec.dim;
    let (mut q, mut p, mut w) = (Vec::new(), Vec::new(), Vec::new());
    match mode {
        DiscretizationMode::GridQuadrature => {
            let per_axis = (nodes as f64).powf(1.0 / pd as f64).round().max(1.0) as usize;
            let (min, max) = spec.support_box();
            let cells = vec![per_axis; pd];
            let grid = TensorGrid::cell_centers(&min, &max, &cells);
            let vol = grid.cell_volume();
            grid.for_each_point(|_, z| {
                let weight = spec.value(z) * vol;
                if weight > 0.0 {
                    q.extend_from_slice(&z[..d]);
                    p.extend_from_slice(&z[d..]);
                    w.push(weight);
                }
            });
            if w.is_empty() {
                return Err(MeanfieldError::BadSpec {
                    detail: "quadrature grid missed the density support",
                });
            }
            let total: f64 = memokin_numerics::reduce::pairwise_sum(&w);
            let scale = spec.mass / total;
            for v in &mut w {
                *v *= scale;
            }
        }
        DiscretizationMode::Iid { seed } => {
            let mut rng = seeded(seed, 40);
            for _ in 0..nodes {
                let z = spec.sample(&mut rng);
                q.extend_from_slice(&z[..d]);
                p.extend_from_slice(&z[d..]);
            }
            w = vec![spec.mass / nodes as f64; nodes];
        }
    }
    Ok(ParticleEnsemble::new(d, q, p, w, 0.0))
}
