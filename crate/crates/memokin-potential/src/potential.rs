//! External confining potentials.
//!
//! Every built-in is radial, `V(x) = v(|x|)`, so gradients and Hessians
//! reduce to the scalar profile: `grad V = v'(r) x/r` and
//! `hess V = (v'' - v'/r) x x^T / r^2 + (v'/r) Id`, with the limits at the
//! origin handled through the stable ratio `v'(r)/r`.

use crate::PotentialError;
use memokin_numerics::spline::{CubicSpline, SplineBc};

/// Which potential profile is in force.
#[derive(Debug, Clone)]
pub enum PotentialKind {
    /// `V = 0`; no confinement.
    Zero,
    /// `V(x) = |x|^2 / 2`.
    Harmonic,
    /// `V(x) = max(|x| - radius, 0)^2`: flat well of the given radius.
    ShiftedWell { radius: f64 },
    /// Tabulated radial profile, interpolated by a clamped cubic spline on
    /// `[0, r_max]` and continued quadratically beyond with the curvature
    /// frozen at `r_max` (keeps the Hessian globally bounded).
    RadialSpline { spline: CubicSpline, r_max: f64 },
}

/// External potential with exact derivative evaluators.
#[derive(Debug, Clone)]
pub struct ExternalPotential {
    kind: PotentialKind,
}

impl ExternalPotential {
    /// The zero potential.
    pub fn zero() -> Self {
        Self { kind: PotentialKind::Zero }
    }

    /// The harmonic potential `|x|^2 / 2`.
    pub fn harmonic() -> Self {
        Self { kind: PotentialKind::Harmonic }
    }

    /// The shifted well `max(|x| - radius, 0)^2`.
    pub fn shifted_well(radius: f64) -> Self {
        assert!(radius > 0.0, "well radius must be positive");
        Self { kind: PotentialKind::ShiftedWell { radius } }
    }

    /// A tabulated radial profile on a uniform grid from `r = 0`.
    ///
    /// The profile must be nonnegative with `v(0) = 0` slope; the spline is
    /// clamped to zero slope at the origin so the gradient stays finite.
    pub fn radial_spline(dr: f64, values: Vec<f64>) -> Result<Self, PotentialError> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(PotentialError::InvalidRadialTable {
                detail: format!("profile value {bad} is negative or non-finite"),
            });
        }
        let r_max = dr * (values.len() - 1) as f64;
        let spline = CubicSpline::new(0.0, dr, values, SplineBc::Clamped(0.0), SplineBc::Natural)?;
        Ok(Self { kind: PotentialKind::RadialSpline { spline, r_max } })
    }

    /// Access the underlying variant.
    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    /// Well radius for the shifted well, if that is the active variant.
    pub fn well_radius(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::ShiftedWell { radius } => Some(radius),
            _ => None,
        }
    }

    /// Radial profile value `v(r)`.
    fn v(&self, r: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Harmonic => 0.5 * r * r,
            PotentialKind::ShiftedWell { radius } => {
                let s = (r - radius).max(0.0);
                s * s
            }
            PotentialKind::RadialSpline { spline, r_max } => {
                if r <= *r_max {
                    spline.value(r)
                } else {
                    let dr = r - r_max;
                    spline.value(*r_max)
                        + spline.derivative(*r_max) * dr
                        + 0.5 * spline.second_derivative(*r_max) * dr * dr
                }
            }
        }
    }

    /// Stable ratio `v'(r)/r` (finite as r -> 0).
    fn dv_over_r(&self, r: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Harmonic => 1.0,
            PotentialKind::ShiftedWell { radius } => {
                if r <= *radius {
                    0.0
                } else {
                    2.0 * (r - radius) / r
                }
            }
            PotentialKind::RadialSpline { spline, r_max } => {
                if r < 1e-12 * r_max.max(1.0) {
                    spline.second_derivative(0.0)
                } else if r <= *r_max {
                    spline.derivative(r) / r
                } else {
                    let dr = r - r_max;
                    (spline.derivative(*r_max) + spline.second_derivative(*r_max) * dr) / r
                }
            }
        }
    }

    /// Radial second derivative `v''(r)` (a.e. for the shifted well, with
    /// the convention `v'' = 0` strictly inside the well).
    fn d2v(&self, r: f64) -> f64 {
        match &self.kind {
            PotentialKind::Zero => 0.0,
            PotentialKind::Harmonic => 1.0,
            PotentialKind::ShiftedWell { radius } => {
                if r <= *radius {
                    0.0
                } else {
                    2.0
                }
            }
            PotentialKind::RadialSpline { spline, r_max } => {
                spline.second_derivative(r.min(*r_max))
            }
        }
    }

    /// Potential value at a point.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.v(norm(x))
    }

    /// Gradient written into `out`.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let factor = self.dv_over_r(norm(x));
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = factor * xi;
        }
    }

    /// Euclidean norm of the gradient.
    pub fn gradient_norm(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        (self.dv_over_r(r) * r).abs()
    }

    /// Hessian written into `out` (row-major d x d).
    pub fn hessian(&self, x: &[f64], out: &mut [f64]) {
        let d = x.len();
        assert_eq!(out.len(), d * d);
        let r = norm(x);
        let tangential = self.dv_over_r(r);
        let radial = self.d2v(r);
        let aniso = if r > 0.0 { (radial - tangential) / (r * r) } else { 0.0 };
        for i in 0..d {
            for j in 0..d {
                // Grouped product keeps the matrix bit-exactly symmetric.
                out[i * d + j] = aniso * (x[i] * x[j]) + if i == j { tangential } else { 0.0 };
            }
        }
    }

    /// Operator norm of the Hessian at a point: for radial profiles the
    /// eigenvalues are `v''(r)` (radial direction) and `v'(r)/r`
    /// (tangential), so the norm is the larger magnitude.
    pub fn hessian_operator_norm(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        self.d2v(r).abs().max(self.dv_over_r(r).abs())
    }

    /// Sup of the Hessian operator norm over the ball `B(center, radius)`,
    /// scanned over the radial interval the ball covers (plus the well
    /// boundary, where the second derivative jumps).
    pub fn hessian_ball_sup(&self, center: &[f64], radius: f64) -> f64 {
        let rc = norm(center);
        let lo = (rc - radius).max(0.0);
        let hi = rc + radius;
        let mut sup = 0.0f64;
        let cells = 256;
        for i in 0..=cells {
            let r = lo + (hi - lo) * i as f64 / cells as f64;
            sup = sup.max(self.d2v(r).abs().max(self.dv_over_r(r).abs()));
        }
        if let PotentialKind::ShiftedWell { radius: well } = &self.kind {
            if *well >= lo && *well <= hi {
                let just_outside = well * (1.0 + 1e-12) + 1e-300;
                sup = sup.max(self.d2v(just_outside).abs());
            }
        }
        sup
    }

    /// Global bound on the Hessian operator norm, when one exists.
    pub fn global_hessian_bound(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Zero => Some(0.0),
            PotentialKind::Harmonic => Some(1.0),
            PotentialKind::ShiftedWell { .. } => Some(2.0),
            PotentialKind::RadialSpline { r_max, .. } => {
                Some(self.hessian_ball_sup(&[0.0], 2.0 * r_max))
            }
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
