//! Smooth compactly supported radial profiles.
//!
//! The profile family is the standard bump
//! `sigma(r) = A * exp(-1 / (1 - (r/rho)^2))` for `r < rho`, zero beyond.
//! It is C-infinity, nonnegative, radially nonincreasing, and all radial
//! derivatives used by the force and kernel computations are analytic.

/// A radial bump profile with amplitude `A` and support radius `rho`.
///
/// The peak value is `A / e` at the origin; the function vanishes with all
/// derivatives at `r = rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialProfile {
    /// Multiplicative scale `A > 0`.
    pub amplitude: f64,
    /// Support radius `rho > 0`.
    pub radius: f64,
}

impl RadialProfile {
    pub fn new(amplitude: f64, radius: f64) -> Self {
        assert!(amplitude > 0.0 && radius > 0.0, "profile parameters must be positive");
        RadialProfile { amplitude, radius }
    }

    /// Profile value at radius `r >= 0` (clamps negative input by symmetry).
    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.radius {
            return 0.0;
        }
        let w = self.radius * self.radius - r * r;
        self.amplitude * (-self.radius * self.radius / w).exp()
    }

    /// First radial derivative; nonpositive everywhere (the bump is
    /// radially nonincreasing), zero at the origin and outside the support.
    pub fn deriv(&self, r: f64) -> f64 {
        if r.abs() >= self.radius {
            return 0.0;
        }
        let rho2 = self.radius * self.radius;
        let w = rho2 - r * r;
        -2.0 * r * rho2 * self.value(r) / (w * w)
    }

    /// `deriv(r) / r`, evaluated with the removable singularity at the
    /// origin resolved analytically (needed for Laplacians and Hessians).
    pub fn deriv_over_r(&self, r: f64) -> f64 {
        if r.abs() >= self.radius {
            return 0.0;
        }
        let rho2 = self.radius * self.radius;
        let w = rho2 - r * r;
        -2.0 * rho2 * self.value(r) / (w * w)
    }

    /// Second radial derivative.
    pub fn second_deriv(&self, r: f64) -> f64 {
        if r.abs() >= self.radius {
            return 0.0;
        }
        let rho2 = self.radius * self.radius;
        let r2 = r * r;
        let w = rho2 - r2;
        let bracket = w * w + 4.0 * r2 * w - 2.0 * r2 * rho2;
        -2.0 * rho2 * self.value(r) * bracket / (w * w * w * w)
    }

    /// Radial part of the Laplacian in `d` dimensions,
    /// `sigma'' + (d-1) sigma'/r`, stable at the origin.
    pub fn laplacian(&self, r: f64, d: usize) -> f64 {
        self.second_deriv(r) + (d as f64 - 1.0) * self.deriv_over_r(r)
    }

    /// Support radius (value and all derivatives vanish at and beyond it).
    pub fn support_radius(&self) -> f64 {
        self.radius
    }

    /// The bump family is radially nonincreasing by construction, so
    /// `x . grad sigma(x) = r sigma'(r) <= 0` holds identically.
    pub fn is_monotone(&self) -> bool {
        true
    }

    /// Sup over x of `|grad sigma(x)| = |sigma'(|x|)|`, by a dense radial
    /// scan (the profile is smooth with one interior extremum of sigma').
    pub fn grad_sup(&self) -> f64 {
        (0..=2048)
            .map(|i| self.deriv(self.radius * i as f64 / 2048.0).abs())
            .fold(0.0, f64::max)
    }

    /// Sup over x of the Hessian operator norm: for a radial function the
    /// eigenvalues are `sigma''(r)` and `sigma'(r)/r`.
    pub fn hessian_sup(&self) -> f64 {
        (0..=2048)
            .map(|i| {
                let r = self.radius * i as f64 / 2048.0;
                self.second_deriv(r).abs().max(self.deriv_over_r(r).abs())
            })
            .fold(0.0, f64::max)
    }
}
