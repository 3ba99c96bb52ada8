//! Gauss–Legendre quadrature with panel subdivision, plus trapezoid
//! helpers for sampled data.

use crate::NumericsError;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Computed by Newton iteration on the Legendre polynomial from the
/// Chebyshev-based initial guess; accurate to machine precision for the
/// orders used here (n ≤ 256).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess: Chebyshev-like approximation to the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..64 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = (n as f64) * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Fixed-order Gauss–Legendre integral of `f` over [a, b].
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Gauss–Legendre integral over [a, b] split into `panels` equal panels.
///
/// Use when the integrand oscillates: choose `panels` so each panel covers
/// at most about one oscillation period.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    order: usize,
    panels: usize,
) -> f64 {
    assert!(panels >= 1);
    let (nodes, weights) = gauss_legendre(order);
    let step = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * step;
        let mid = lo + 0.5 * step;
        let half = 0.5 * step;
        let mut panel = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            panel += w * f(mid + half * x);
        }
        acc += panel * half;
    }
    acc
}

/// Adaptive integral: doubles the panel count until two refinements agree
/// to `tol` (relative to the integral's magnitude, floored at `tol`
/// absolute), or errors with the last estimate.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<f64, NumericsError> {
    let order = 16;
    let mut panels = 1;
    let mut prev = integrate_panels(&mut f, a, b, order, panels);
    while panels < max_panels {
        panels *= 2;
        let next = integrate_panels(&mut f, a, b, order, panels);
        let scale = next.abs().max(1.0);
        if (next - prev).abs() <= tol * scale {
            return Ok(next);
        }
        prev = next;
    }
    let next = integrate_panels(&mut f, a, b, order, panels * 2);
    let delta = (next - prev).abs();
    let scale = next.abs().max(1.0);
    if delta <= tol * scale {
        Ok(next)
    } else {
        Err(NumericsError::QuadratureNotConverged { estimate: next, delta, tol })
    }
}

/// Trapezoid rule over uniformly sampled values with spacing `dx`.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    dx * (0.5 * (values[0] + values[values.len() - 1]) + inner)
}

/// Cumulative trapezoid: output[i] = ∫ from x₀ to x_i, with output[0] = 0.
pub fn cumulative_trapezoid(values: &[f64], dx: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for pair in values.windows(2) {
        acc += 0.5 * dx * (pair[0] + pair[1]);
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-13;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        // n-point GL is exact for degree 2n-1.
        // ∫_{-1}^{1} x^6 dx = 2/7; n-point GL is exact for degree ≤ 2n-1.
        for n in [4, 5, 8, 32] {
            let got = integrate(|x| x.powi(6), -1.0, 1.0, n);
            assert!((got - 2.0 / 7.0).abs() < TOL, "n={n} got={got}");
        }
    }

    #[test]
    fn gl_weights_sum_to_interval_length() {
        for n in [1, 2, 3, 17, 64, 128] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n={n} sum={s}");
        }
    }

    #[test]
    fn adaptive_handles_oscillatory_integrand() {
        // ∫_0^{10π} sin(x) dx = 0, ∫_0^{10π} sin^2 = 5π.
        let v = integrate_adaptive(|x| x.sin() * x.sin(), 0.0, 10.0 * std::f64::consts::PI, 1e-12, 1 << 12)
            .expect("converges");
        assert!((v - 5.0 * std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn trapezoid_matches_closed_form_on_linear_data() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        let got = trapezoid(&ys, 0.1);
        assert!((got - (1.5 + 1.0)).abs() < TOL); // ∫_0^1 (3x+1) = 2.5
        assert!((got - 2.5).abs() < TOL);
    }

    #[test]
    fn cumulative_trapezoid_endpoints() {
        let ys = [0.0, 1.0, 2.0, 3.0];
        let c = cumulative_trapezoid(&ys, 1.0);
        assert_eq!(c[0], 0.0);
        assert!((c[3] - 4.5).abs() < TOL);
    }
}
