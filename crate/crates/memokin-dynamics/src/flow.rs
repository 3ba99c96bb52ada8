//! Characteristic flow in a frozen effective field.
//!
//! For linearization studies the interaction field is frozen at one instant:
//! a test particle moves in the static potential
//! `U(x) = V(x) - kappa (Sigma * rho)(x)` built from a fixed source cloud.
//! The flow map `(x, v) -> (X(t), V(t))` is integrated by velocity Verlet,
//! which is symplectic (unit phase-space Jacobian) and time-reversible, and
//! the probe checks both properties numerically.

use crate::DynamicsError;
use memokin_formfactor::InteractionKernel;
use memokin_potential::ExternalPotential;

/// Static effective field `V - kappa (Sigma * rho)` from a frozen source
/// cloud.
pub struct FrozenField<'a> {
    /// Confining potential.
    pub potential: &'a ExternalPotential,
    /// Interaction form factor.
    pub sigma: &'a InteractionKernel,
    /// Memory mass `kappa` multiplying the interaction term.
    pub kappa: f64,
    /// Source positions, flattened `count x dim`.
    pub sources: Vec<f64>,
    /// Source weights.
    pub weights: Vec<f64>,
    /// Ambient dimension.
    pub dim: usize,
}

impl<'a> FrozenField<'a> {
    /// Force `-grad U(x)` on a test particle.
    pub fn force(&self, x: &[f64], out: &mut [f64]) {
        let dim = self.dim;
        let mut grad_v = [0.0f64; 3];
        self.potential.gradient(x, &mut grad_v[..dim]);
        let mut disp = [0.0f64; 3];
        let mut grad_s = [0.0f64; 3];
        for a in 0..dim {
            out[a] = -grad_v[a];
        }
        for (j, w) in self.weights.iter().enumerate() {
            let q = &self.sources[j * dim..(j + 1) * dim];
            for a in 0..dim {
                disp[a] = x[a] - q[a];
            }
            self.sigma.gradient(&disp[..dim], &mut grad_s[..dim]);
            for a in 0..dim {
                out[a] += self.kappa * w * grad_s[a];
            }
        }
    }

    /// Effective potential value `U(x)`.
    pub fn value(&self, x: &[f64]) -> f64 {
        let dim = self.dim;
        let mut disp = [0.0f64; 3];
        let mut u = self.potential.value(x);
        for (j, w) in self.weights.iter().enumerate() {
            let q = &self.sources[j * dim..(j + 1) * dim];
            for a in 0..dim {
                disp[a] = x[a] - q[a];
            }
            let r = disp[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
            u -= self.kappa * w * self.sigma.value(r);
        }
        u
    }
}

/// Verlet flow map in a frozen field, with Jacobian and reversibility
/// diagnostics.
pub struct FlowMapProbe<'a> {
    /// The static field.
    pub field: FrozenField<'a>,
    /// Step size for the flow integration.
    pub dt: f64,
}

impl<'a> FlowMapProbe<'a> {
    /// Integrate the flow from `(x0, v0)` for time `t` (negative `t` runs
    /// the flow backward). Returns the endpoint `(x, v)`.
    pub fn flow(&self, x0: &[f64], v0: &[f64], t: f64) -> (Vec<f64>, Vec<f64>) {
        let dim = self.field.dim;
        let steps = (t.abs() / self.dt).round().max(0.0) as usize;
        let dt = if t < 0.0 { -self.dt } else { self.dt };
        let half = 0.5 * dt;
        let mut x = x0.to_vec();
        let mut v = v0.to_vec();
        let mut f = vec![0.0f64; dim];
        self.field.force(&x, &mut f);
        for _ in 0..steps {
            for a in 0..dim {
                v[a] += half * f[a];
                x[a] += dt * v[a];
            }
            self.field.force(&x, &mut f);
            for a in 0..dim {
                v[a] += half * f[a];
            }
        }
        (x, v)
    }

    /// Phase-space Jacobian determinant of the time-`t` flow map at
    /// `(x0, v0)`, by central differences with increment `h`.
    pub fn jacobian_determinant(
        &self,
        x0: &[f64],
        v0: &[f64],
        t: f64,
        h: f64,
    ) -> Result<f64, DynamicsError> {
        let dim = self.field.dim;
        let m = 2 * dim;
        let mut jac = vec![0.0f64; m * m];
        for col in 0..m {
            let mut xp = x0.to_vec();
            let mut vp = v0.to_vec();
            let mut xm = x0.to_vec();
            let mut vm = v0.to_vec();
            if col < dim {
                xp[col] += h;
                xm[col] -= h;
            } else {
                vp[col - dim] += h;
                vm[col - dim] -= h;
            }
            let (fx_p, fv_p) = self.flow(&xp, &vp, t);
            let (fx_m, fv_m) = self.flow(&xm, &vm, t);
            for row in 0..dim {
                jac[row * m + col] = (fx_p[row] - fx_m[row]) / (2.0 * h);
                jac[(dim + row) * m + col] = (fv_p[row] - fv_m[row]) / (2.0 * h);
            }
        }
        let det = determinant(&mut jac, m);
        if !det.is_finite() {
            return Err(DynamicsError::NonFiniteForce { particle: 0 });
        }
        Ok(det)
    }

    /// Round-trip defect: flow forward for `t`, backward for `t`, and
    /// return the sup distance to the starting point in phase space.
    pub fn reversibility_defect(&self, x0: &[f64], v0: &[f64], t: f64) -> f64 {
        let (x1, v1) = self.flow(x0, v0, t);
        let (x2, v2) = self.flow(&x1, &v1, -t);
        let dx = x2
            .iter()
            .zip(x0)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let dv = v2
            .iter()
            .zip(v0)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        dx.max(dv)
    }
}

/// Determinant of a small row-major matrix by Gaussian elimination with
/// partial pivoting. Destroys the input.
fn determinant(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let d = a[col * n + col];
        det *= d;
        for row in col + 1..n {
            let factor = a[row * n + col] / d;
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
        }
    }
    det
}
