//! Hyperplane projections of radial profiles and radial Fourier transforms.
//!
//! For a radial function `sigma` on R^n, the projection onto one coordinate,
//! `proj(t) = integral of sigma over the hyperplane x_1 = t`, reduces to a
//! 1-D integral. By the projection-slice identity, the n-dimensional Fourier
//! transform of `sigma` restricted to a ray is the 1-D cosine transform of
//! `proj`, which is how all radial transforms in this crate are computed:
//!
//! `sigma_hat(k) = 2 * integral_0^rho proj(t) cos(k t) dt`
//!
//! (transform convention: `f_hat(xi) = integral f(x) exp(-i x . xi) dx`).

use crate::profile::RadialProfile;
use memokin_numerics::quad::{gauss_legendre, integrate_panels};
use memokin_numerics::sphere::unit_sphere_area;
use memokin_numerics::spline::{CubicSpline, SplineBc};

/// Number of Gauss-Legendre nodes for the (smooth) projection integrand.
const PROJECTION_GL_ORDER: usize = 64;

/// Direct quadrature of the hyperplane projection at offset `t`.
///
/// For `ambient_dim = 1` the projection is the profile itself; for `n >= 2`
/// it is `|S^{n-2}| * integral_0^{sqrt(rho^2 - t^2)} sigma(sqrt(t^2 + s^2))
/// s^{n-2} ds`. The integrand is jointly smooth because the bump depends on
/// its argument only through its square.
pub fn projection_value(profile: &RadialProfile, ambient_dim: usize, t: f64) -> f64 {
    assert!(ambient_dim >= 1);
    let t = t.abs();
    let rho = profile.support_radius();
    if t >= rho {
        return 0.0;
    }
    if ambient_dim == 1 {
        return profile.value(t);
    }
    let s_max = (rho * rho - t * t).sqrt();
    let (nodes, weights) = gauss_legendre(PROJECTION_GL_ORDER);
    let mut acc = 0.0;
    let half = 0.5 * s_max;
    for (&x, &w) in nodes.iter().zip(&weights) {
        let s = half * (x + 1.0);
        let r = (t * t + s * s).sqrt();
        acc += w * profile.value(r) * s.powi(ambient_dim as i32 - 2);
    }
    unit_sphere_area(ambient_dim - 1) * half * acc
}

/// A tabulated hyperplane projection with its cosine-transform evaluator.
#[derive(Debug, Clone)]
pub struct ProjectedProfile {
    spline: CubicSpline,
    support: f64,
    ambient_dim: usize,
}

impl ProjectedProfile {
    /// Tabulate the projection of `profile` (viewed in `ambient_dim`
    /// dimensions) on `samples + 1` uniform nodes and spline it. The
    /// projection is even with flat decay at the support edge, so both
    /// spline ends are clamped to zero slope.
    pub fn new(profile: &RadialProfile, ambient_dim: usize, samples: usize) -> Self {
        assert!(samples >= 8);
        let rho = profile.support_radius();
        let dx = rho / samples as f64;
        let values: Vec<f64> = (0..=samples)
            .map(|i| projection_value(profile, ambient_dim, i as f64 * dx))
            .collect();
        let spline = CubicSpline::new(0.0, dx, values, SplineBc::Clamped(0.0), SplineBc::Clamped(0.0))
            .expect("projection table construction");
        ProjectedProfile {
            spline,
            support: rho,
            ambient_dim,
        }
    }

    /// Projection value (even in `t`, zero outside the support).
    pub fn value(&self, t: f64) -> f64 {
        let t = t.abs();
        if t >= self.support {
            0.0
        } else {
            self.spline.value(t)
        }
    }

    /// Half-width of the projection's support (the profile radius).
    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Radial Fourier transform of the ambient profile at wavenumber `k`,
    /// via the projection-slice identity. Panel count scales with `k` so
    /// the cosine oscillation stays resolved.
    pub fn fourier(&self, k: f64) -> f64 {
        let k = k.abs();
        let panels = 4 + (k * self.support / std::f64::consts::PI) as usize;
        2.0 * integrate_panels(|t| self.value(t) * (k * t).cos(), 0.0, self.support, 16, panels)
    }
}
