//! Cubic spline interpolation on a uniform grid with natural or clamped
//! boundary conditions, exposing value, first, and second derivatives.

use crate::NumericsError;

/// Boundary condition for a cubic spline end point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineBc {
    /// Second derivative zero at the end point.
    Natural,
    /// First derivative pinned to the given value at the end point.
    Clamped(f64),
}

/// Cubic spline through uniformly spaced samples.
///
/// Stores the knot second derivatives (moments); evaluation is the standard
/// piecewise-cubic Hermite form in the moments.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
    moments: Vec<f64>,
}

impl CubicSpline {
    /// Build a spline through `values` sampled at x0 + i·dx.
    pub fn new(
        x0: f64,
        dx: f64,
        values: Vec<f64>,
        bc_left: SplineBc,
        bc_right: SplineBc,
    ) -> Result<Self, NumericsError> {
        let n = values.len();
        if n < 3 {
            return Err(NumericsError::InvalidSplineInput(format!(
                "need at least 3 samples, got {n}"
            )));
        }
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(NumericsError::InvalidSplineInput(format!("bad spacing {dx}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::InvalidSplineInput("non-finite sample".into()));
        }

        // Tridiagonal system for the moments M_i = S''(x_i):
        //   M_{i-1}/6 + 2M_i/3 + M_{i+1}/6 = (y_{i+1} - 2y_i + y_{i-1})/dx².
        let mut diag = vec![2.0 / 3.0; n];
        let mut sub = vec![1.0 / 6.0; n - 1];
        let mut sup = vec![1.0 / 6.0; n - 1];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            rhs[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (dx * dx);
        }
        match bc_left {
            SplineBc::Natural => {
                diag[0] = 1.0;
                sup[0] = 0.0;
                rhs[0] = 0.0;
            }
            SplineBc::Clamped(d) => {
                // S'(x0) = d  ⇒  dx/3·M_0 + dx/6·M_1 = (y_1 - y_0)/dx - d.
                diag[0] = dx / 3.0;
                sup[0] = dx / 6.0;
                rhs[0] = (values[1] - values[0]) / dx - d;
            }
        }
        match bc_right {
            SplineBc::Natural => {
                diag[n - 1] = 1.0;
                sub[n - 2] = 0.0;
                rhs[n - 1] = 0.0;
            }
            SplineBc::Clamped(d) => {
                // S'(x_{n-1}) = d ⇒ dx/6·M_{n-2} + dx/3·M_{n-1} = d - (y_{n-1}-y_{n-2})/dx.
                diag[n - 1] = dx / 3.0;
                sub[n - 2] = dx / 6.0;
                rhs[n - 1] = d - (values[n - 1] - values[n - 2]) / dx;
            }
        }
        let moments = solve_tridiagonal(&sub, &mut diag, &sup, &mut rhs);
        Ok(Self { x0, dx, values, moments })
    }

    /// First sample abscissa.
    pub fn x_min(&self) -> f64 {
        self.x0
    }

    /// Last sample abscissa.
    pub fn x_max(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    #[inline]
    fn segment(&self, x: f64) -> (usize, f64) {
        let n = self.values.len();
        let t = (x - self.x0) / self.dx;
        let i = (t.floor() as isize).clamp(0, n as isize - 2) as usize;
        (i, x - (self.x0 + i as f64 * self.dx))
    }

    /// Spline value at `x` (extrapolates the end cubics outside the range).
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        let (i, s) = self.segment(x);
        let h = self.dx;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let a = (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0;
        y0 + s * (a + s * (m0 / 2.0 + s * (m1 - m0) / (6.0 * h)))
    }

    /// First derivative at `x`.
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        let (i, s) = self.segment(x);
        let h = self.dx;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let a = (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0;
        a + s * (m0 + s * (m1 - m0) / (2.0 * h))
    }

    /// Second derivative at `x`.
    #[inline]
    pub fn second_derivative(&self, x: f64) -> f64 {
        let (i, s) = self.segment(x);
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        m0 + s * (m1 - m0) / self.dx
    }
}

/// Thomas algorithm for a tridiagonal system; consumes diag/rhs as scratch.
fn solve_tridiagonal(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) -> Vec<f64> {
    let n = diag.len();
    for i in 1..n {
        let w = sub[i - 1] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    }
    x
}
