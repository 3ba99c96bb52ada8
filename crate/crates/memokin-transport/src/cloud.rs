//! Weighted point clouds and the truncated ground cost.

use crate::TransportError;

/// Truncation level of the ground cost `min(|z1 - z2|, 1)`.
pub const COST_CAP: f64 = 1.0;

/// A finite nonnegative measure given by weighted points in `R^dim`.
#[derive(Debug, Clone)]
pub struct WeightedCloud {
    /// Ambient dimension (phase-space clouds use `2 d`).
    pub dim: usize,
    /// Flattened coordinates, `count x dim` row-major.
    pub points: Vec<f64>,
    /// Nonnegative weights, one per point.
    pub weights: Vec<f64>,
}

impl WeightedCloud {
    /// Build a cloud, validating shapes, finiteness, and weight signs.
    pub fn new(dim: usize, points: Vec<f64>, weights: Vec<f64>) -> Result<Self, TransportError> {
        if dim == 0 || points.len() != weights.len() * dim {
            return Err(TransportError::MalformedCloud {
                detail: "points length must equal weights length times dim",
            });
        }
        if points.iter().any(|v| !v.is_finite())
            || weights.iter().any(|w| !w.is_finite() || *w < 0.0)
        {
            return Err(TransportError::MalformedCloud {
                detail: "coordinates must be finite and weights nonnegative",
            });
        }
        Ok(WeightedCloud { dim, points, weights })
    }

    /// Cloud with every point carrying the same weight `mass / count`.
    pub fn uniform(dim: usize, points: Vec<f64>, mass: f64) -> Result<Self, TransportError> {
        let count = points.len() / dim.max(1);
        let w = mass / count as f64;
        Self::new(dim, points, vec![w; count])
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Coordinates of point `k`.
    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    /// Total mass.
    pub fn total_mass(&self) -> f64 {
        memokin_numerics::reduce::pairwise_sum(&self.weights)
    }

    /// Whether all weights are equal to within a relative `1e-12`.
    pub fn is_uniform(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let w0 = self.weights[0];
        self.weights
            .iter()
            .all(|&w| (w - w0).abs() <= 1e-12 * w0.abs().max(1e-300))
    }

    /// Spatial marginal of a phase-space cloud: keep the first
    /// `space_dim` coordinates of every point.
    pub fn spatial_marginal(&self, space_dim: usize) -> WeightedCloud {
        assert!(space_dim <= self.dim);
        let pts = (0..self.len())
            .flat_map(|k| self.point(k)[..space_dim].iter().copied().collect::<Vec<_>>())
            .collect();
        WeightedCloud {
            dim: space_dim,
            points: pts,
            weights: self.weights.clone(),
        }
    }

    /// Integral of a function against the cloud.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let vals: Vec<f64> = (0..self.len()).map(|k| self.weights[k] * f(self.point(k))).collect();
        memokin_numerics::reduce::pairwise_sum(&vals)
    }
}

/// Truncated Euclidean ground cost between two points.
pub fn truncated_cost(a: &[f64], b: &[f64]) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    d2.sqrt().min(COST_CAP)
}
