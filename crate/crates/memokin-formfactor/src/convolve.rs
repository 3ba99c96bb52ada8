//! Radial convolution quadratures.
//!
//! The convolution of two radial functions is radial; its profile is
//! computed without any d-dimensional grid. In d = 1 it is a single
//! interval integral; in d = 2, 3 the angular integration is made explicit,
//! reducing to a (radius x angle) double quadrature with smooth integrands.

use memokin_numerics::quad::{gauss_legendre, integrate_panels};
use memokin_numerics::sphere::unit_sphere_area;

/// `(f * g)(r e_1)` for radial `f`, `g` with the given support radii, in
/// dimension `dim` (1, 2, or 3), using Gauss-Legendre rules of the given
/// order along each direction.
pub fn radial_pair_convolution(
    f: &dyn Fn(f64) -> f64,
    f_radius: f64,
    g: &dyn Fn(f64) -> f64,
    g_radius: f64,
    dim: usize,
    r: f64,
    order: usize,
) -> f64 {
    if r >= f_radius + g_radius {
        return 0.0;
    }
    match dim {
        1 => {
            let a = (-f_radius).max(r - g_radius);
            let b = f_radius.min(r + g_radius);
            if a >= b {
                return 0.0;
            }
            // Split at 0 and r so the rule never straddles a point where a
            // generic radial integrand could lose smoothness.
            let mut cuts = vec![a];
            for c in [0.0, r] {
                if c > a && c < b {
                    cuts.push(c);
                }
            }
            cuts.push(b);
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut acc = 0.0;
            for pair in cuts.windows(2) {
                acc += integrate_panels(|y| f(y.abs()) * g((r - y).abs()), pair[0], pair[1], order, 4);
            }
            acc
        }
        2 | 3 => {
            // Radius and angle are each integrated with PANELS panels of
            // the given Gauss-Legendre order: the bump's derivatives grow
            // steeply near its support edge, and panelling keeps the rule
            // spectrally accurate there.
            const PANELS: usize = 4;
            let (nodes, weights) = gauss_legendre(order);
            let mut u_nodes = Vec::with_capacity(PANELS * order);
            let panel_u = f_radius / PANELS as f64;
            for p in 0..PANELS {
                let left = p as f64 * panel_u;
                for (&x, &w) in nodes.iter().zip(&weights) {
                    u_nodes.push((left + 0.5 * panel_u * (x + 1.0), 0.5 * panel_u * w));
                }
            }
            let (a_lo, a_hi) = if dim == 2 { (0.0, std::f64::consts::PI) } else { (-1.0, 1.0) };
            let mut a_nodes = Vec::with_capacity(PANELS * order);
            let panel_a = (a_hi - a_lo) / PANELS as f64;
            for p in 0..PANELS {
                let left = a_lo + p as f64 * panel_a;
                for (&x, &w) in nodes.iter().zip(&weights) {
                    a_nodes.push((left + 0.5 * panel_a * (x + 1.0), 0.5 * panel_a * w));
                }
            }
            let mut acc = 0.0;
            for &(u, wu) in &u_nodes {
                let fu = f(u) * u.powi(dim as i32 - 1);
                if fu == 0.0 {
                    continue;
                }
                let mut inner = 0.0;
                for &(a, wa) in &a_nodes {
                    let mu = if dim == 2 { a.cos() } else { a };
                    let dist2 = r * r + u * u - 2.0 * r * u * mu;
                    inner += wa * g(dist2.max(0.0).sqrt());
                }
                acc += wu * fu * inner;
            }
            unit_sphere_area(dim - 1) * acc
        }
        _ => panic!("radial convolution implemented for dim 1..3 only"),
    }
}
