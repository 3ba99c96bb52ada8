//! Cross-validation of the production transport routes against independent
//! oracles, plus the metric axioms on random instances.

use memokin_numerics::rng::seeded;
use memokin_transport::{
    exhaustive_uniform, quantile_upper_bound_1d, transportation_simplex, w1_assignment,
    w1_entropic, w1_network, w1_truncated, EntropicParams, SolveMethod, WeightedCloud,
};
use proptest::prelude::*;
use rand::Rng;

const ORACLE_TOL: f64 = 1e-9;

fn random_uniform(rng: &mut impl Rng, dim: usize, n: usize, spread: f64) -> WeightedCloud {
    let pts: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-spread..spread)).collect();
    WeightedCloud::uniform(dim, pts, 1.0).unwrap()
}

fn random_general(rng: &mut impl Rng, dim: usize, n: usize, spread: f64, mass: f64) -> WeightedCloud {
    let pts: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-spread..spread)).collect();
    let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = w.iter().sum();
    for v in &mut w {
        *v *= mass / total;
    }
    WeightedCloud::new(dim, pts, w).unwrap()
}

#[test]
fn assignment_route_matches_the_permutation_oracle() {
    let mut rng = seeded(11, 0);
    for case in 0..60 {
        let dim = 1 + case % 2;
        let n = 2 + case % 6;
        let mu = random_uniform(&mut rng, dim, n, 1.5);
        let nu = random_uniform(&mut rng, dim, n, 1.5);
        let got = w1_truncated(&mu, &nu).unwrap();
        assert!(matches!(got.method, SolveMethod::Assignment));
        let want = exhaustive_uniform(&mu, &nu);
        assert!(
            (got.distance - want).abs() <= ORACLE_TOL,
            "case {case}: assignment {} vs oracle {want}",
            got.distance
        );
    }
}

#[test]
fn network_route_matches_the_simplex_oracle() {
    let mut rng = seeded(12, 0);
    for case in 0..60 {
        let dim = 1 + case % 2;
        let n = 1 + case % 4;
        let m = 1 + (case / 2) % 4;
        let mu = random_general(&mut rng, dim, n, 1.5, 1.0);
        let nu = random_general(&mut rng, dim, m, 1.5, 1.0);
        let (got, _) = w1_network(&mu, &nu).unwrap();
        let want = transportation_simplex(&mu, &nu).unwrap();
        assert!(
            (got - want).abs() <= ORACLE_TOL,
            "case {case}: network {got} vs simplex {want}"
        );
    }
}

#[test]
fn the_two_exact_routes_agree_on_larger_uniform_clouds() {
    let mut rng = seeded(13, 0);
    for case in 0..6 {
        let dim = 1 + case % 2;
        let mu = random_uniform(&mut rng, dim, 30, 2.0);
        let nu = random_uniform(&mut rng, dim, 30, 2.0);
        let (a, _) = w1_assignment(&mu, &nu).unwrap();
        let (b, _) = w1_network(&mu, &nu).unwrap();
        assert!((a - b).abs() <= ORACLE_TOL, "case {case}: assignment {a} vs network {b}");
    }
}

#[test]
fn distance_is_exactly_symmetric() {
    let mut rng = seeded(14, 0);
    for case in 0..30 {
        let dim = 1 + case % 2;
        let (mu, nu) = if case % 2 == 0 {
            (
                random_uniform(&mut rng, dim, 5, 1.5),
                random_uniform(&mut rng, dim, 5, 1.5),
            )
        } else {
            (
                random_general(&mut rng, dim, 3 + case % 3, 1.5, 1.0),
                random_general(&mut rng, dim, 2 + case % 4, 1.5, 1.0),
            )
        };
        let ab = w1_truncated(&mu, &nu).unwrap().distance;
        let ba = w1_truncated(&nu, &mu).unwrap().distance;
        assert_eq!(ab.to_bits(), ba.to_bits(), "case {case}: {ab} vs {ba}");
    }
}

#[test]
fn triangle_inequality_holds_on_sampled_triples() {
    let mut rng = seeded(15, 0);
    for case in 0..40 {
        let dim = 1 + case % 2;
        let (a, b, c) = if case % 2 == 0 {
            (
                random_uniform(&mut rng, dim, 5, 2.0),
                random_uniform(&mut rng, dim, 5, 2.0),
                random_uniform(&mut rng, dim, 5, 2.0),
            )
        } else {
            (
                random_general(&mut rng, dim, 3, 2.0, 1.0),
                random_general(&mut rng, dim, 4, 2.0, 1.0),
                random_general(&mut rng, dim, 2, 2.0, 1.0),
            )
        };
        let dab = w1_truncated(&a, &b).unwrap().distance;
        let dbc = w1_truncated(&b, &c).unwrap().distance;
        let dac = w1_truncated(&a, &c).unwrap().distance;
        assert!(
            dac <= dab + dbc + ORACLE_TOL,
            "case {case}: d(a,c) = {dac} > {dab} + {dbc}"
        );
    }
}

#[test]
fn entropic_certificates_bracket_the_exact_value_on_midsize_clouds() {
    let mut rng = seeded(16, 0);
    for case in 0..3 {
        let dim = 1 + case % 2;
        let mu = random_general(&mut rng, dim, 50, 1.0, 2.0);
        let nu = random_general(&mut rng, dim, 45, 1.0, 2.0);
        let (exact, _) = w1_network(&mu, &nu).unwrap();
        let sol = w1_entropic(&mu, &nu, EntropicParams::default());
        assert!(
            sol.lower_bound <= exact + ORACLE_TOL && exact <= sol.distance + ORACLE_TOL,
            "case {case}: exact {exact} outside [{}, {}]",
            sol.lower_bound,
            sol.distance
        );
        assert!(sol.gap >= (sol.distance - exact) - ORACLE_TOL);
    }
}

#[test]
fn quantile_coupling_upper_bounds_the_exact_distance_on_the_line() {
    let mut rng = seeded(17, 0);
    for case in 0..50 {
        let mu = random_general(&mut rng, 1, 2 + case % 5, 1.5, 1.0);
        let nu = random_general(&mut rng, 1, 2 + (case / 3) % 5, 1.5, 1.0);
        let (exact, _) = w1_network(&mu, &nu).unwrap();
        let bound = quantile_upper_bound_1d(&mu, &nu).unwrap();
        assert!(
            bound >= exact - 1e-12,
            "case {case}: quantile {bound} below exact {exact}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn network_agrees_with_simplex_on_arbitrary_tiny_clouds(
        xs in prop::collection::vec(-3.0f64..3.0, 1..4),
        ys in prop::collection::vec(-3.0f64..3.0, 1..4),
        ws in prop::collection::vec(0.1f64..1.0, 4),
    ) {
        let n = xs.len();
        let m = ys.len();
        let mut wa: Vec<f64> = ws[..n.min(4)].iter().cycle().take(n).cloned().collect();
        let mut wb: Vec<f64> = ws[..m.min(4)].iter().rev().cycle().take(m).cloned().collect();
        let sa: f64 = wa.iter().sum();
        let sb: f64 = wb.iter().sum();
        for w in &mut wa { *w /= sa; }
        for w in &mut wb { *w /= sb; }
        let mu = WeightedCloud::new(1, xs, wa).unwrap();
        let nu = WeightedCloud::new(1, ys, wb).unwrap();
        let (got, _) = w1_network(&mu, &nu).unwrap();
        let want = transportation_simplex(&mu, &nu).unwrap();
        prop_assert!((got - want).abs() <= ORACLE_TOL, "network {got} vs simplex {want}");
    }

    #[test]
    fn point_mass_distance_is_the_truncated_metric(
        a in -10.0f64..10.0,
        b in -10.0f64..10.0,
        mass in 0.1f64..5.0,
    ) {
        let mu = WeightedCloud::new(1, vec![a], vec![mass]).unwrap();
        let nu = WeightedCloud::new(1, vec![b], vec![mass]).unwrap();
        let d = w1_truncated(&mu, &nu).unwrap().distance;
        let want = mass * (a - b).abs().min(1.0);
        prop_assert!((d - want).abs() <= 1e-12 * (1.0 + want));
    }
}
