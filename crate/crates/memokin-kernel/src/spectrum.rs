//! Frequency-domain view of the memory kernel.
//!
//! The closed form for the transform of the primitive is
//!
//! ```text
//! P_hat(omega) = - pi |S^{n-1}| / (2 pi c)^n . |omega|^{n-3} |sigma2_hat(omega/c)|^2
//! ```
//!
//! which is nonpositive for every frequency — the sign certificate behind
//! the dissipation estimates. `table_spectrum` computes the same quantity
//! directly from a synthesized table (cosine transform of the even
//! extension), so formula and table can be cross-checked.

use crate::table::{KernelTable, MediumParams};
use crate::KernelError;
use memokin_formfactor::ProjectedProfile;
use memokin_numerics::sphere::unit_sphere_area;

/// Samples across the projected profile when tabulating it.
const PROJECTION_SAMPLES: usize = 2048;

/// Tabulated transform of the kernel primitive on a frequency grid.
#[derive(Debug, Clone)]
pub struct SpectralKernel {
    /// Frequencies (nonnegative; the transform is even).
    pub omega_grid: Vec<f64>,
    /// Transform values; nonpositive for admissible media.
    pub p_hat: Vec<f64>,
}

/// Evaluate the closed-form transform on the given frequencies.
pub fn p_hat_spectrum(params: &MediumParams, omegas: &[f64]) -> Result<SpectralKernel, KernelError> {
    params.validate()?;
    let n = params.n;
    let c = params.c;
    let proj = ProjectedProfile::new(&params.sigma2, n, PROJECTION_SAMPLES);
    let prefactor = std::f64::consts::PI * unit_sphere_area(n)
        / (2.0 * std::f64::consts::PI * c).powi(n as i32);
    let p_hat = omegas
        .iter()
        .map(|&omega| {
            let w = omega.abs();
            let weight = if n == 3 {
                1.0 // |omega|^0
            } else if w == 0.0 {
                return 0.0; // |omega|^{n-3} -> 0 for n >= 4
            } else {
                w.powi(n as i32 - 3)
            };
            let shat = proj.fourier(w / c);
            -prefactor * weight * shat * shat
        })
        .collect();
    Ok(SpectralKernel { omega_grid: omegas.to_vec(), p_hat })
}

/// Cosine transform of the tabulated primitive's even extension:
/// `P_hat(omega) ~= dt [ P(0) + 2 sum_{i>=1} P(t_i) cos(omega t_i) ]`
/// with the last sample half-weighted (composite trapezoid on the line).
pub fn table_spectrum(table: &KernelTable, omegas: &[f64]) -> SpectralKernel {
    let dt = table.dt;
    let samples = &table.big_p_samples;
    let last = samples.len() - 1;
    let p_hat = omegas
        .iter()
        .map(|&omega| {
            let mut acc = samples[0] * 0.5; // half weight at t = 0 after doubling
            for (i, &v) in samples.iter().enumerate().skip(1) {
                let w = if i == last { 0.5 } else { 1.0 };
                acc += w * v * (omega * i as f64 * dt).cos();
            }
            2.0 * dt * acc
        })
        .collect();
    SpectralKernel { omega_grid: omegas.to_vec(), p_hat }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::synthesize_p_radial;
    use crate::table::TimeGrid;
    use memokin_formfactor::RadialProfile;

    fn medium(n: usize) -> MediumParams {
        MediumParams { n, c: 1.0, sigma2: RadialProfile::new(1.0, 1.0) }
    }

    #[test]
    fn transform_is_nonpositive_on_a_wide_sweep() {
        for n in [3usize, 4, 5] {
            let omegas: Vec<f64> = (0..256).map(|i| 0.1 * i as f64).collect();
            let spec = p_hat_spectrum(&medium(n), &omegas).unwrap();
            let max = spec.p_hat.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
            for &v in &spec.p_hat {
                assert!(v <= 1e-12 * max, "n={n}: positive transform value {v}");
            }
        }
    }

    #[test]
    fn zero_frequency_values_match_the_dimension_split() {
        // n >= 4 vanishes at omega = 0; n = 3 equals the closed form
        // -pi |S^2| / (2 pi c)^3 . sigma2_hat(0)^2 with
        // sigma2_hat(0) = integral of sigma2 over R^3.
        let spec4 = p_hat_spectrum(&medium(4), &[0.0]).unwrap();
        assert_eq!(spec4.p_hat[0], 0.0);
        let spec5 = p_hat_spectrum(&medium(5), &[0.0]).unwrap();
        assert_eq!(spec5.p_hat[0], 0.0);

        let params = medium(3);
        let proj = ProjectedProfile::new(&params.sigma2, 3, 2048);
        let mass = proj.fourier(0.0);
        let want = -std::f64::consts::PI * unit_sphere_area(3)
            / (2.0 * std::f64::consts::PI).powi(3)
            * mass
            * mass;
        let spec3 = p_hat_spectrum(&params, &[0.0]).unwrap();
        assert!((spec3.p_hat[0] - want).abs() <= 1e-12 * want.abs());
        assert!(spec3.p_hat[0] < 0.0);
    }

    #[test]
    fn table_transform_matches_the_closed_form() {
        // Odd dimension: the table is exactly supported, so its cosine
        // transform converges to the closed form at O(dt^2).
        let params = medium(5);
        let grid = TimeGrid::new(0.005, 440); // t_end = 2.2 covers the support
        let table = synthesize_p_radial(&params, &grid).unwrap();
        let omegas: Vec<f64> = (0..40).map(|i| 0.25 * i as f64).collect();
        let formula = p_hat_spectrum(&params, &omegas).unwrap();
        let tabled = table_spectrum(&table, &omegas);
        let scale = formula.p_hat.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        for (f, t) in formula.p_hat.iter().zip(&tabled.p_hat) {
            assert!((f - t).abs() <= 1e-4 * scale, "{f} vs {t}");
        }
    }
}
