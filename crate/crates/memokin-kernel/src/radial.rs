//! Memory kernel synthesis by radial frequency quadrature.
//!
//! Writing the kernel as an integral over the medium's radial frequency
//! variable `r = |xi|`:
//!
//! `p(t) = C_n / c   * integral_0^inf sin(c r t) |sigma2_hat(r)|^2 r^{n-2} dr`
//! `P(t) = -C_n/c^2  * integral_0^inf cos(c r t) |sigma2_hat(r)|^2 r^{n-3} dr`
//!
//! with `C_n = (2 pi)^{-n} |S^{n-1}|`. The cosine form of `P` is the
//! closed-form evaluation of `P(t) = -integral_t^inf p`: differentiating it
//! under the integral sign returns the `p` integrand, and it vanishes at
//! infinity, so the pair satisfies `P' = p` with `P(+inf) = 0` by
//! construction.

use crate::table::{KernelTable, MediumParams, TimeGrid};
use crate::KernelError;
use memokin_formfactor::ProjectedProfile;
use memokin_numerics::quad::gauss_legendre;
use memokin_numerics::sphere::unit_sphere_area;

/// Samples of the profile transform per support lobe when tabulating the
/// projected profile.
const PROJECTION_SAMPLES: usize = 2048;

/// Gauss-Legendre order per frequency panel.
const GL_ORDER: usize = 16;

/// Relative tolerance of the panel-refinement convergence probe.
const CONVERGENCE_TOL: f64 = 1e-9;

/// A fixed composite frequency rule with the squared profile transform
/// cached on its nodes.
struct FrequencyRule {
    nodes: Vec<f64>,
    /// weight * |sigma2_hat(r)|^2 at each node.
    weighted: Vec<f64>,
}

impl FrequencyRule {
    fn build(params: &MediumParams, t_max: f64, refine: f64) -> Result<Self, KernelError> {
        let rho = params.sigma2.support_radius();
        let proj = ProjectedProfile::new(&params.sigma2, params.n, PROJECTION_SAMPLES);

        // Find the frequency cutoff: the transform decays root-
        // exponentially, so scan lobe-width windows of the heaviest
        // integrand weight until three consecutive windows are negligible.
        let lobe = std::f64::consts::PI / rho;
        let heaviest = |r: f64| proj.fourier(r).powi(2) * r.powi(params.n as i32 - 1);
        let mut r_max = 0.0;
        let mut total = 0.0;
        let mut quiet = 0;
        let (gl_nodes, gl_weights) = gauss_legendre(GL_ORDER);
        while quiet < 3 {
            let mut window = 0.0;
            for (&x, &w) in gl_nodes.iter().zip(&gl_weights) {
                let r = r_max + 0.5 * lobe * (x + 1.0);
                window += 0.5 * lobe * w * heaviest(r);
            }
            total += window;
            r_max += lobe;
            if window < 1e-15 * total {
                quiet += 1;
            } else {
                quiet = 0;
            }
            if r_max > 2000.0 / rho {
                return Err(KernelError::QuadratureNotConverged {
                    what: "frequency cutoff search",
                    delta: window,
                    tol: 1e-15 * total,
                });
            }
        }

        // Panel width resolves both the transform's lobes and the fastest
        // time oscillation sin(c r t_max).
        let osc_limit = 2.0 * std::f64::consts::PI / (params.c * t_max.max(1e-6));
        let width = (lobe / 4.0).min(osc_limit) * refine;
        let panels = (r_max / width).ceil() as usize;
        let mut nodes = Vec::with_capacity(panels * GL_ORDER);
        let mut weighted = Vec::with_capacity(panels * GL_ORDER);
        let h = r_max / panels as f64;
        for p in 0..panels {
            let left = p as f64 * h;
            for (&x, &w) in gl_nodes.iter().zip(&gl_weights) {
                let r = left + 0.5 * h * (x + 1.0);
                nodes.push(r);
                weighted.push(0.5 * h * w * proj.fourier(r).powi(2));
            }
        }
        Ok(FrequencyRule { nodes, weighted })
    }

    /// `integral weight(r) * |sigma2_hat|^2 * r^power * phase(c r t) dr`.
    fn oscillatory(&self, c: f64, t: f64, power: i32, cosine: bool) -> f64 {
        let mut acc = 0.0;
        for (&r, &w) in self.nodes.iter().zip(&self.weighted) {
            let phase = c * r * t;
            let osc = if cosine { phase.cos() } else { phase.sin() };
            acc += w * osc * r.powi(power);
        }
        acc
    }
}

/// Synthesize the kernel table by radial frequency quadrature.
pub fn synthesize_p_radial(params: &MediumParams, grid: &TimeGrid) -> Result<KernelTable, KernelError> {
    params.validate()?;
    let n = params.n;
    let c = params.c;
    let prefactor = unit_sphere_area(n) / (2.0 * std::f64::consts::PI).powi(n as i32);

    // For odd n the kernel vanishes identically beyond twice the retarded
    // support; the oscillatory quadrature only reproduces that zero up to
    // roundoff, so it is enforced exactly there.
    let support_bound = if n % 2 == 1 { Some(2.0 * params.retarded_support()) } else { None };
    let beyond = |t: f64| support_bound.is_some_and(|b| t >= b);

    let rule = FrequencyRule::build(params, grid.t_end(), 1.0)?;
    let times = grid.times();
    let p_samples: Vec<f64> = times
        .iter()
        .map(|&t| {
            if beyond(t) { 0.0 } else { prefactor / c * rule.oscillatory(c, t, n as i32 - 2, false) }
        })
        .collect();
    let big_p_samples: Vec<f64> = times
        .iter()
        .map(|&t| {
            if beyond(t) {
                0.0
            } else {
                -prefactor / (c * c) * rule.oscillatory(c, t, n as i32 - 3, true)
            }
        })
        .collect();

    // Refinement probe: halved panel width must reproduce a spread of
    // samples to the declared tolerance.
    let fine_rule = FrequencyRule::build(params, grid.t_end(), 0.5)?;
    let scale = big_p_samples[0]
        .abs()
        .max(p_samples.iter().fold(0.0f64, |m, &v| m.max(v.abs())));
    for idx in [0, times.len() / 4, times.len() / 2, times.len() - 1] {
        let t = times[idx];
        if beyond(t) {
            continue;
        }
        let p_fine = prefactor / c * fine_rule.oscillatory(c, t, n as i32 - 2, false);
        let bp_fine = -prefactor / (c * c) * fine_rule.oscillatory(c, t, n as i32 - 3, true);
        let delta = (p_fine - p_samples[idx]).abs().max((bp_fine - big_p_samples[idx]).abs());
        if delta > CONVERGENCE_TOL * scale {
            return Err(KernelError::QuadratureNotConverged {
                what: "kernel time samples",
                delta,
                tol: CONVERGENCE_TOL * scale,
            });
        }
    }

    Ok(KernelTable::assemble(
        grid.dt,
        p_samples,
        big_p_samples,
        crate::table::DEFAULT_TOL_TAIL,
        support_bound,
        Some((n as f64 - 2.0).max(1.5)),
    ))
}
