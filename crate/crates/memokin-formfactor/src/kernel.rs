//! The interaction kernel: self-convolution of the coupling profile.
//!
//! `Sigma = sigma1 * sigma1` is radial, smooth, compactly supported in the
//! ball of radius `2 rho`, and positive-definite (its Fourier transform is
//! `|sigma1_hat|^2 >= 0`). The kernel is tabulated radially once and then
//! evaluated through a clamped cubic spline; gradients and Hessians come
//! from the spline's derivatives.

use crate::convolve::radial_pair_convolution;
use crate::profile::RadialProfile;
use crate::FormFactorError;
use memokin_numerics::fft::fft_along_axis;
use memokin_numerics::quad::integrate_panels;
use memokin_numerics::sphere::unit_sphere_area;
use memokin_numerics::spline::{CubicSpline, SplineBc};
use memokin_numerics::fft::Complex;

/// Default number of radial cells in the tabulation of `Sigma`.
pub const DEFAULT_RADIAL_CELLS: usize = 1024;

/// Gauss-Legendre order per direction and panel in the convolution
/// quadrature.
const CONVOLUTION_ORDER: usize = 32;

/// Relative tolerance of the order-refinement convergence probe.
const CONVERGENCE_TOL: f64 = 1e-9;

/// Sampled radial data for `Sigma` and its first two derivatives on
/// `[0, 2 rho]`.
#[derive(Debug, Clone)]
pub struct RadialTable {
    pub r: Vec<f64>,
    pub sigma: Vec<f64>,
    pub dsigma: Vec<f64>,
    pub d2sigma: Vec<f64>,
}

/// The interaction kernel `Sigma = sigma1 * sigma1` in `dim` dimensions,
/// with its tabulated radial profile and the control constants
/// `Lambda_k = sum_{j<=k} (-Laplacian)^j Sigma(0)`.
#[derive(Debug, Clone)]
pub struct InteractionKernel {
    pub dim: usize,
    pub sigma1: RadialProfile,
    pub table: RadialTable,
    /// `[Lambda_0, Lambda_1, Lambda_2]`, computed as squared L2 norms of
    /// `sigma1`, its gradient, and its Laplacian.
    pub lambda: [f64; 3],
    spline: CubicSpline,
    sup_value: f64,
    sup_grad: f64,
    sup_hess: f64,
    support: f64,
}

impl InteractionKernel {
    /// Build the kernel by self-convolving `sigma1` in `dim` dimensions.
    pub fn build(sigma1: RadialProfile, dim: usize) -> Result<Self, FormFactorError> {
        Self::build_with_cells(sigma1, dim, DEFAULT_RADIAL_CELLS)
    }

    pub fn build_with_cells(
        sigma1: RadialProfile,
        dim: usize,
        cells: usize,
    ) -> Result<Self, FormFactorError> {
        if !(1..=3).contains(&dim) {
            return Err(FormFactorError::UnsupportedDimension { dim });
        }
        assert!(cells >= 64, "radial table too coarse");
        let rho = sigma1.support_radius();
        let support = 2.0 * rho;
        let dr = support / cells as f64;
        let value_fn = |r: f64| sigma1.value(r);

        let sigma: Vec<f64> = (0..=cells)
            .map(|i| {
                radial_pair_convolution(&value_fn, rho, &value_fn, rho, dim, i as f64 * dr, CONVOLUTION_ORDER)
            })
            .collect();
        let scale = sigma[0];

        // Order-refinement probe at a few radii: the quadrature must be
        // converged well below the tolerances the tables are used at.
        for &frac in &[0.07, 0.23, 0.41, 0.58, 0.76, 0.93] {
            let r = frac * support;
            let coarse =
                radial_pair_convolution(&value_fn, rho, &value_fn, rho, dim, r, CONVOLUTION_ORDER);
            let fine = radial_pair_convolution(
                &value_fn,
                rho,
                &value_fn,
                rho,
                dim,
                r,
                CONVOLUTION_ORDER + 16,
            );
            let delta = (coarse - fine).abs();
            if delta > CONVERGENCE_TOL * scale {
                return Err(FormFactorError::QuadratureNotConverged {
                    r,
                    delta,
                    tol: CONVERGENCE_TOL * scale,
                });
            }
        }

        // Radial symmetry forces Sigma'(0) = 0; smooth compact support
        // forces Sigma'(2 rho) = 0.
        let spline = CubicSpline::new(0.0, dr, sigma.clone(), SplineBc::Clamped(0.0), SplineBc::Clamped(0.0))?;

        let r: Vec<f64> = (0..=cells).map(|i| i as f64 * dr).collect();
        let dsigma: Vec<f64> = r.iter().map(|&ri| spline.derivative(ri)).collect();
        let d2sigma: Vec<f64> = r.iter().map(|&ri| spline.second_derivative(ri)).collect();

        let lambda = control_constants(&sigma1, dim);

        let sup_value = sigma[0];
        let sup_grad = dsigma.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let mut sup_hess = 0.0f64;
        for (i, &ri) in r.iter().enumerate() {
            let radial_dir = d2sigma[i].abs();
            let tangential = if i == 0 {
                d2sigma[0].abs()
            } else {
                (dsigma[i] / ri).abs()
            };
            sup_hess = sup_hess.max(radial_dir).max(tangential);
        }

        Ok(InteractionKernel {
            dim,
            sigma1,
            table: RadialTable { r, sigma, dsigma, d2sigma },
            lambda,
            spline,
            sup_value,
            sup_grad,
            sup_hess,
            support,
        })
    }

    /// `Sigma(r)`; zero at and beyond the support radius `2 rho`.
    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.support {
            0.0
        } else {
            self.spline.value(r)
        }
    }

    /// Radial derivative `Sigma'(r)`.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.support {
            0.0
        } else {
            self.spline.derivative(r)
        }
    }

    /// Second radial derivative `Sigma''(r)`.
    pub fn second_radial_derivative(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.support {
            0.0
        } else {
            self.spline.second_derivative(r)
        }
    }

    /// `Sigma'(r)/r` with the removable singularity resolved
    /// (`-> Sigma''(0)` as `r -> 0`).
    pub fn grad_factor(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.support {
            0.0
        } else if r < 1e-9 * self.support {
            self.spline.second_derivative(0.0)
        } else {
            self.spline.derivative(r) / r
        }
    }

    /// `grad Sigma(x)` written into `out` for the displacement `x`.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let factor = self.grad_factor(r2.sqrt());
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = factor * xi;
        }
    }

    /// Hessian of `Sigma` at displacement `x`, row-major into `out`
    /// (`dim * dim` entries):
    /// `H = (Sigma'' - Sigma'/r) rhat rhat^T + (Sigma'/r) Id`.
    pub fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        debug_assert_eq!(x.len(), d);
        debug_assert_eq!(out.len(), d * d);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let r = r2.sqrt();
        let tangential = self.grad_factor(r);
        let radial = if r >= self.support {
            0.0
        } else {
            self.spline.second_derivative(r)
        };
        out.fill(0.0);
        if r < 1e-12 * self.support {
            for i in 0..d {
                out[i * d + i] = radial;
            }
            return;
        }
        let aniso = radial - tangential;
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = aniso * x[i] * x[j] / r2;
            }
            out[i * d + i] += tangential;
        }
    }

    /// Support radius of `Sigma` (twice the profile radius).
    pub fn support_radius(&self) -> f64 {
        self.support
    }

    /// `sup |Sigma| = Sigma(0)` (positive-definiteness puts the maximum at
    /// the origin).
    pub fn sup_norm(&self) -> f64 {
        self.sup_value
    }

    /// `sup |grad Sigma|`, read off the radial table.
    pub fn grad_sup_norm(&self) -> f64 {
        self.sup_grad
    }

    /// Supremum of the Hessian operator norm; for a radial function the
    /// eigenvalues at radius r are `Sigma''(r)` and `Sigma'(r)/r`.
    pub fn hessian_sup_norm(&self) -> f64 {
        self.sup_hess
    }

    /// `||Sigma||_{W^{1,inf}} = ||Sigma||_inf + ||grad Sigma||_inf`.
    pub fn w1inf_norm(&self) -> f64 {
        self.sup_value + self.sup_grad
    }

    /// The control constant `Lambda_k`, `k <= 2`.
    pub fn lambda(&self, k: usize) -> f64 {
        self.lambda[k]
    }

    /// True iff the tabulated radial derivative never exceeds `tol`
    /// (the kernel is radially nonincreasing, `x . grad Sigma <= 0`).
    pub fn monotone_radial(&self, tol: f64) -> bool {
        self.table.dsigma.iter().all(|&d| d <= tol)
    }

    /// Conservative radius within which `grad Sigma` has no zero except the
    /// origin: the first strictly positive table node where `Sigma'`
    /// vanishes (to a relative tolerance), minus one grid cell.
    pub fn critical_radius_estimate(&self) -> f64 {
        let tol = 1e-10 * self.sup_grad;
        let dr = self.table.r[1] - self.table.r[0];
        for (i, &d) in self.table.dsigma.iter().enumerate().skip(1) {
            if d.abs() <= tol {
                return (self.table.r[i] - dr).max(0.0);
            }
        }
        self.support - dr
    }

    /// Minimum and maximum real part of the discrete Fourier transform of
    /// `Sigma` sampled on a `cells^dim` periodic grid of side `2 box_half`
    /// (which must exceed the kernel support so periodic images do not
    /// overlap). Samples are laid out with the origin at index zero and
    /// negative offsets wrapped to the top half, so the transform of the
    /// even function is real; positive-definiteness means the minimum
    /// should not dip below a roundoff-sized fraction of the maximum.
    pub fn dft_real_range(&self, cells: usize, box_half: f64) -> (f64, f64) {
        assert!(box_half >= self.support, "periodic images would overlap");
        let d = self.dim;
        let n = cells;
        let h = 2.0 * box_half / n as f64;
        let total: usize = n.pow(d as u32);
        let mut data = vec![Complex::new(0.0, 0.0); total];
        let shape = vec![n; d];
        for (flat, slot) in data.iter_mut().enumerate() {
            let mut rem = flat;
            let mut r2 = 0.0;
            for _ in 0..d {
                let idx = rem % n;
                rem /= n;
                let x = if idx <= n / 2 { idx as f64 } else { idx as f64 - n as f64 } * h;
                r2 += x * x;
            }
            *slot = Complex::new(self.value(r2.sqrt()), 0.0);
        }
        let mut buf = data;
        for axis in 0..d {
            fft_along_axis(&mut buf, &shape, axis, false);
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in &buf {
            min = min.min(v.re);
            max = max.max(v.re);
        }
        (min * h.powi(d as i32), max * h.powi(d as i32))
    }
}

/// `Lambda_k` for k = 0, 1, 2 from radial quadratures of the profile:
/// `Lambda_0 = ||sigma||^2`, then adding `||grad sigma||^2` and
/// `||Laplacian sigma||^2`.
fn control_constants(sigma1: &RadialProfile, dim: usize) -> [f64; 3] {
    let rho = sigma1.support_radius();
    let area = unit_sphere_area(dim);
    let moment = |f: &dyn Fn(f64) -> f64| -> f64 {
        area * integrate_panels(|r| f(r) * r.powi(dim as i32 - 1), 0.0, rho, 32, 16)
    };
    let l2 = moment(&|r| sigma1.value(r).powi(2));
    let grad_l2 = moment(&|r| sigma1.deriv(r).powi(2));
    let lap_l2 = moment(&|r| sigma1.laplacian(r, dim).powi(2));
    [l2, l2 + grad_l2, l2 + grad_l2 + lap_l2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use memokin_numerics::quad::integrate_panels;

    fn bump_kernel(dim: usize) -> InteractionKernel {
        InteractionKernel::build(RadialProfile::new(1.0, 1.0), dim).unwrap()
    }

    #[test]
    fn value_at_origin_is_l2_norm_squared() {
        // Sigma(0) = integral of sigma1^2 (self-convolution at the origin).
        for dim in 1..=3 {
            let k = bump_kernel(dim);
            assert!(
                (k.value(0.0) - k.lambda[0]).abs() <= 1e-8 * k.lambda[0],
                "dim {dim}: {} vs {}",
                k.value(0.0),
                k.lambda[0]
            );
        }
    }

    #[test]
    fn hessian_at_origin_is_minus_grad_norm_over_d_times_identity() {
        // The spline's second derivative carries O(h^2) error (~4e-6
        // relative at the default table resolution), so the tolerance is
        // set accordingly.
        for dim in 1..=3usize {
            let k = bump_kernel(dim);
            let grad_l2 = k.lambda[1] - k.lambda[0];
            let expected = -grad_l2 / dim as f64;
            let mut h = vec![0.0; dim * dim];
            k.hessian(&vec![0.0; dim], &mut h);
            for i in 0..dim {
                for j in 0..dim {
                    let want = if i == j { expected } else { 0.0 };
                    assert!(
                        (h[i * dim + j] - want).abs() <= 2e-5 * grad_l2,
                        "dim {dim} entry ({i},{j}): {} vs {want}",
                        h[i * dim + j]
                    );
                }
            }
        }
    }

    #[test]
    fn trace_identities_tie_table_to_profile_norms() {
        // trace Hessian(0) = -||grad sigma1||^2 means
        // Sigma''(0) = -(1/d)||grad sigma1||^2; check the spline agrees.
        for dim in 1..=3usize {
            let k = bump_kernel(dim);
            let grad_l2 = k.lambda[1] - k.lambda[0];
            let got = k.second_radial_derivative(0.0);
            let want = -grad_l2 / dim as f64;
            assert!(
                (got - want).abs() <= 2e-5 * grad_l2,
                "dim {dim}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn vanishes_beyond_twice_the_profile_radius() {
        let k = bump_kernel(2);
        assert_eq!(k.value(2.0), 0.0);
        assert_eq!(k.value(3.7), 0.0);
        let mut g = [0.0; 2];
        k.gradient(&[2.1, 0.3], &mut g);
        assert_eq!(g, [0.0, 0.0]);
        assert!(k.value(1.99) >= 0.0);
    }

    #[test]
    fn doubling_amplitude_quadruples_control_constants() {
        let base = InteractionKernel::build(RadialProfile::new(1.0, 0.8), 2).unwrap();
        let doubled = InteractionKernel::build(RadialProfile::new(2.0, 0.8), 2).unwrap();
        for k in 0..3 {
            assert!(
                (doubled.lambda[k] - 4.0 * base.lambda[k]).abs() <= 1e-10 * doubled.lambda[k]
            );
        }
    }

    #[test]
    fn control_constants_match_spectral_moments() {
        // Independent route: Lambda increments are the moments
        // (2 pi)^{-d} |S^{d-1}| integral k^{2j} |sigma1_hat(k)|^2 k^{d-1} dk.
        use crate::projection::ProjectedProfile;
        let profile = RadialProfile::new(1.0, 1.0);
        for dim in 2..=3usize {
            let kern = InteractionKernel::build(profile, dim).unwrap();
            let proj = ProjectedProfile::new(&profile, dim, 2048);
            let area = unit_sphere_area(dim);
            let two_pi_d = (2.0 * std::f64::consts::PI).powi(dim as i32);
            // The profile transform decays root-exponentially; 150 covers
            // the k^5-weighted tail of the j = 2 moment to ~1e-6 relative.
            let moment = |j: i32| -> f64 {
                area / two_pi_d
                    * integrate_panels(
                        |k: f64| k.powi(2 * j) * proj.fourier(k).powi(2) * k.powi(dim as i32 - 1),
                        0.0,
                        150.0,
                        24,
                        300,
                    )
            };
            let l2 = kern.lambda[0];
            assert!((moment(0) - l2).abs() <= 1e-6 * l2, "dim {dim} j=0");
            let grad_l2 = kern.lambda[1] - kern.lambda[0];
            assert!(
                (moment(1) - grad_l2).abs() <= 1e-6 * grad_l2,
                "dim {dim} j=1: {} vs {grad_l2}",
                moment(1)
            );
            let lap_l2 = kern.lambda[2] - kern.lambda[1];
            assert!(
                (moment(2) - lap_l2).abs() <= 1e-5 * lap_l2,
                "dim {dim} j=2: {} vs {lap_l2}",
                moment(2)
            );
        }
    }

    #[test]
    fn maximum_is_at_the_origin() {
        for dim in 1..=3 {
            let k = bump_kernel(dim);
            let origin = k.value(0.0);
            let mut running_tail_max = f64::NEG_INFINITY;
            for i in (1..k.table.r.len()).rev() {
                running_tail_max = running_tail_max.max(k.table.sigma[i]);
                assert!(
                    origin - running_tail_max > 0.0,
                    "dim {dim}: tail max from r={} reaches the origin value",
                    k.table.r[i]
                );
            }
        }
    }

    #[test]
    fn dft_of_tabulated_kernel_is_nonnegative() {
        // Sigma_hat = |sigma1_hat|^2 >= 0; the discrete transform of the
        // table should match to roundoff.
        for (dim, cells) in [(1usize, 512usize), (2, 128), (3, 48)] {
            let k = bump_kernel(dim);
            let (min, max) = k.dft_real_range(cells, 2.5);
            assert!(max > 0.0);
            assert!(
                min >= -1e-10 * max,
                "dim {dim}: min real part {min} vs max {max}"
            );
        }
    }

    #[test]
    fn monotone_kernel_detected_and_critical_radius_positive() {
        for dim in 1..=3 {
            let k = bump_kernel(dim);
            assert!(k.monotone_radial(1e-12 * k.grad_sup_norm()));
            let r_est = k.critical_radius_estimate();
            assert!(r_est > 0.0 && r_est < k.support_radius());
            // Within the estimate, Sigma' must be strictly negative away
            // from the origin.
            for i in 1..k.table.r.len() {
                if k.table.r[i] < r_est * 0.999 && k.table.r[i] > 0.05 {
                    assert!(k.table.dsigma[i] < 0.0, "dim {dim} at r={}", k.table.r[i]);
                }
            }
        }
    }

    #[test]
    fn gradient_matches_finite_difference_of_value() {
        let k = bump_kernel(3);
        let x = [0.45, -0.3, 0.2];
        let mut g = [0.0; 3];
        k.gradient(&x, &mut g);
        let h = 1e-6;
        for axis in 0..3 {
            let mut xp = x;
            xp[axis] += h;
            let mut xm = x;
            xm[axis] -= h;
            let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let fd = (k.value(norm(xp)) - k.value(norm(xm))) / (2.0 * h);
            assert!((g[axis] - fd).abs() <= 1e-6 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn hessian_matches_finite_difference_of_gradient() {
        let k = bump_kernel(2);
        let x = [0.6, 0.25];
        let mut hess = [0.0; 4];
        k.hessian(&x, &mut hess);
        let h = 1e-5;
        for i in 0..2 {
            for j in 0..2 {
                let mut xp = x;
                xp[j] += h;
                let mut xm = x;
                xm[j] -= h;
                let mut gp = [0.0; 2];
                let mut gm = [0.0; 2];
                k.gradient(&xp, &mut gp);
                k.gradient(&xm, &mut gm);
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                assert!(
                    (hess[i * 2 + j] - fd).abs() <= 1e-4 * (1.0 + fd.abs()),
                    "entry ({i},{j}): {} vs {fd}",
                    hess[i * 2 + j]
                );
            }
        }
    }
}
