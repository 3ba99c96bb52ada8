//! The control inequality tying sup norms of `Sigma * u` to the
//! interaction energy `<u, Sigma * u>`.
//!
//! For any order-zero compactly supported distribution `u`,
//!
//! `||Sigma * u||^2_{W^{k,inf}} <= Lambda_k <u, Sigma * u>`
//!
//! where the left side uses the jet norm `sum_{j<=k} ||grad^j h||^2_inf`
//! and `Lambda_k` is the kernel's control constant. Atomic measures make
//! both sides exactly computable (pair sums for the energy, dense sampling
//! for the sups), which is how the inequality is exercised in tests.

use crate::kernel::InteractionKernel;
use memokin_numerics::grid::TensorGrid;

/// A finite signed atomic measure `u = sum_i c_i delta_{x_i}` in
/// `dim` dimensions; positions are flattened (`positions[i*dim + axis]`).
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    pub dim: usize,
    pub positions: Vec<f64>,
    pub coeffs: Vec<f64>,
}

impl AtomicMeasure {
    pub fn new(dim: usize, positions: Vec<f64>, coeffs: Vec<f64>) -> Self {
        assert!(dim >= 1 && positions.len() == coeffs.len() * dim);
        AtomicMeasure { dim, positions, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(Sigma * u)(x) = sum_i c_i Sigma(x - x_i)`.
    pub fn field(&self, kernel: &InteractionKernel, x: &[f64]) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut r2 = 0.0;
            for axis in 0..d {
                let dx = x[axis] - self.positions[i * d + axis];
                r2 += dx * dx;
            }
            acc += c * kernel.value(r2.sqrt());
        }
        acc
    }

    /// `grad (Sigma * u)(x)` written into `out`.
    pub fn field_gradient(&self, kernel: &InteractionKernel, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        out.fill(0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let mut r2 = 0.0;
            for axis in 0..d {
                let dx = x[axis] - self.positions[i * d + axis];
                r2 += dx * dx;
            }
            let factor = c * kernel.grad_factor(r2.sqrt());
            for axis in 0..d {
                out[axis] += factor * (x[axis] - self.positions[i * d + axis]);
            }
        }
    }

    /// Interaction energy `<u, Sigma * u> = sum_{ij} c_i c_j Sigma(x_i - x_j)`.
    /// Nonnegative for every atomic measure because `Sigma` is
    /// positive-definite.
    pub fn self_energy(&self, kernel: &InteractionKernel) -> f64 {
        let d = self.dim;
        let n = self.len();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut r2 = 0.0;
                for axis in 0..d {
                    let dx = self.positions[i * d + axis] - self.positions[j * d + axis];
                    r2 += dx * dx;
                }
                acc += self.coeffs[i] * self.coeffs[j] * kernel.value(r2.sqrt());
            }
        }
        acc
    }
}

/// Both sides of the control inequality at order `k` (0 or 1): returns
/// `(lhs_squared, energy)` where `lhs_squared` is the sampled jet norm
/// squared of `Sigma * u` and the inequality to check is
/// `lhs_squared <= kernel.lambda(k) * energy` up to roundoff.
///
/// Sup norms are sampled on a covering grid (cloud bounding box inflated by
/// the kernel support, spacing `sup_dx`) plus the atom positions
/// themselves; sampling can only under-estimate a sup, which weakens the
/// left side and never produces a spurious violation.
pub fn controle_sides(
    kernel: &InteractionKernel,
    u: &AtomicMeasure,
    k: usize,
    sup_dx: f64,
) -> (f64, f64) {
    assert!(k <= 1, "jet order 0 or 1 only");
    assert_eq!(kernel.dim, u.dim);
    let d = u.dim;
    let grid = TensorGrid::covering_cloud(&u.positions, d, kernel.support_radius(), sup_dx);

    let mut sup_value: f64 = 0.0;
    let mut sup_grad_sq: f64 = 0.0;
    let mut gbuf = vec![0.0; d];
    let mut visit = |x: &[f64]| {
        sup_value = sup_value.max(u.field(kernel, x).abs());
        if k >= 1 {
            u.field_gradient(kernel, x, &mut gbuf);
            let g2: f64 = gbuf.iter().map(|v| v * v).sum();
            sup_grad_sq = sup_grad_sq.max(g2);
        }
    };
    grid.for_each_point(|_, x| visit(x));
    for atom in u.positions.chunks_exact(d) {
        visit(atom);
    }

    let lhs_sq = sup_value * sup_value + if k >= 1 { sup_grad_sq } else { 0.0 };
    (lhs_sq, u.self_energy(kernel))
}
