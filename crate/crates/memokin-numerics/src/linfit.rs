//! Least-squares line fitting, used for convergence-order and scaling-rate
//! estimates (slope of error against resolution in log-log coordinates).

/// Ordinary least-squares fit of `y = slope * x + intercept`.
///
/// Returns `(slope, intercept)`. Panics if fewer than two points are given
/// or the abscissae are all identical.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len(), "mismatched sample lengths");
    assert!(x.len() >= 2, "need at least two points to fit a line");
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    assert!(sxx > 0.0, "abscissae are degenerate");
    let slope = sxy / sxx;
    (slope, mean_y - slope * mean_x)
}

/// Slope of `ln(y)` against `ln(x)`; all entries must be strictly positive.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let (slope, intercept) = linear_fit(&x, &y);
        assert!((slope - 2.0).abs() < 1e-14);
        assert!((intercept - 1.0).abs() < 1e-14);
    }

    #[test]
    fn power_law_slope() {
        let x: Vec<f64> = (1..=6).map(|k| 2.0_f64.powi(k)).collect();
        let y: Vec<f64> = x.iter().map(|v| 5.0 * v.powf(-0.5)).collect();
        assert!((log_log_slope(&x, &y) + 0.5).abs() < 1e-12);
    }
}
