//! Volumes and surface areas of Euclidean balls and spheres.
//!
//! Computed by the two-step recursion `omega_d = omega_{d-2} * 2 pi / d`
//! rather than through the Gamma function, so the values are exact products
//! of machine constants for every dimension used in the codebase.

use std::f64::consts::PI;

/// Volume of the unit ball in `d` dimensions (`omega_0 = 1`, `omega_1 = 2`).
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// Surface measure of the unit sphere `S^{n-1}` in `n` dimensions,
/// i.e. `|S^{n-1}| = n * omega_n` (perimeter 2 pi for n = 2, area 4 pi
/// for n = 3).
pub fn unit_sphere_area(n: usize) -> f64 {
    assert!(n >= 1, "sphere dimension must be at least 1");
    n as f64 * unit_ball_volume(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_dimensional_values() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(5) - 8.0 * PI * PI / 15.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0).abs() < 1e-15); // two points
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }
}
