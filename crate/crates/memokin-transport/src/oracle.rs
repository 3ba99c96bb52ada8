//! Independent reference solvers used only to cross-check the production
//! routes in tests. Both are deliberately different algorithm families:
//! brute-force permutation enumeration for uniform clouds, and a dense
//! transportation simplex (MODI) for general weights.

use crate::cloud::{truncated_cost, WeightedCloud};
use crate::TransportError;

/// Exhaustive minimum over all couplings of two equal-count uniform clouds
/// (a Birkhoff vertex is a permutation). Only viable for tiny inputs.
pub fn exhaustive_uniform(mu: &WeightedCloud, nu: &WeightedCloud) -> f64 {
    let n = mu.len();
    assert_eq!(n, nu.len());
    assert!(n <= 9, "factorial enumeration is only for tiny clouds");
    let mut cost = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = truncated_cost(mu.point(i), nu.point(j));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let total: f64 = p.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum();
        if total < best {
            best = total;
        }
    });
    best * mu.total_mass() / n as f64
}

fn permute(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

const MAX_PIVOTS: usize = 20_000;

/// Dense transportation simplex (MODI / u-v method) on the truncated cost
/// matrix. Expects equal total masses. Returns the optimal cost.
pub fn transportation_simplex(
    mu: &WeightedCloud,
    nu: &WeightedCloud,
) -> Result<f64, TransportError> {
    let n = mu.len();
    let m = nu.len();
    let mut cost = vec![0.0f64; n * m];
    for i in 0..n {
        for j in 0..m {
            cost[i * m + j] = truncated_cost(mu.point(i), nu.point(j));
        }
    }
    // Tiny deterministic perturbation of the supplies breaks degeneracy so
    // the northwest-corner basis is a genuine spanning tree.
    let mass = mu.total_mass();
    let eps = 1e-13 * mass / (n as f64 + 1.0);
    let mut s: Vec<f64> = mu.weights.iter().enumerate().map(|(i, &w)| w + eps * (i + 1) as f64).collect();
    let mut d: Vec<f64> = nu.weights.clone();
    d[m - 1] += eps * (n * (n + 1) / 2) as f64;

    // Northwest-corner start: n + m - 1 basic cells.
    let mut flow = vec![0.0f64; n * m];
    let mut basis = vec![false; n * m];
    {
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let amt = s[i].min(d[j]);
            flow[i * m + j] = amt;
            basis[i * m + j] = true;
            s[i] -= amt;
            d[j] -= amt;
            if i == n - 1 && j == m - 1 {
                break;
            }
            if s[i] <= d[j] && i + 1 < n {
                i += 1;
            } else if j + 1 < m {
                j += 1;
            } else {
                i += 1;
            }
        }
    }

    let scale: f64 = cost.iter().cloned().fold(1.0, f64::max);
    for _pivot in 0..MAX_PIVOTS {
        // Duals from the basis tree: u[0] = 0, propagate over basic cells.
        let mut u = vec![f64::NAN; n];
        let mut v = vec![f64::NAN; m];
        u[0] = 0.0;
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in 0..m {
                    if !basis[i * m + j] {
                        continue;
                    }
                    if u[i].is_finite() && v[j].is_nan() {
                        v[j] = cost[i * m + j] - u[i];
                        changed = true;
                    } else if v[j].is_finite() && u[i].is_nan() {
                        u[i] = cost[i * m + j] - v[j];
                        changed = true;
                    }
                }
            }
        }
        if u.iter().any(|x| x.is_nan()) || v.iter().any(|x| x.is_nan()) {
            return Err(TransportError::SolverStalled {
                detail: "transportation basis is not a spanning tree",
            });
        }
        // Entering cell: most negative reduced cost.
        let mut enter = None;
        let mut best = -1e-12 * scale;
        for i in 0..n {
            for j in 0..m {
                if basis[i * m + j] {
                    continue;
                }
                let r = cost[i * m + j] - u[i] - v[j];
                if r < best {
                    best = r;
                    enter = Some((i, j));
                }
            }
        }
        let Some((ei, ej)) = enter else {
            let total: f64 = (0..n * m).map(|k| flow[k] * cost[k]).sum();
            return Ok(total);
        };
        // Find the unique alternating cycle in basis + entering cell by
        // walking the bipartite tree from row ei to column ej.
        let path = cycle_path(&basis, n, m, ei, ej).ok_or(TransportError::SolverStalled {
            detail: "no pivot cycle found in transportation basis",
        })?;
        // Odd-position cells lose flow; take the minimum as the step.
        let mut theta = f64::INFINITY;
        let mut leave = (usize::MAX, usize::MAX);
        for (k, &(i, j)) in path.iter().enumerate() {
            if k % 2 == 1 && flow[i * m + j] < theta {
                theta = flow[i * m + j];
                leave = (i, j);
            }
        }
        for (k, &(i, j)) in path.iter().enumerate() {
            if k % 2 == 0 {
                flow[i * m + j] += theta;
            } else {
                flow[i * m + j] -= theta;
            }
        }
        basis[ei * m + ej] = true;
        basis[leave.0 * m + leave.1] = false;
        flow[leave.0 * m + leave.1] = 0.0;
    }
    Err(TransportError::SolverStalled { detail: "transportation simplex hit the pivot cap" })
}

/// Path of basic cells forming the cycle closed by the entering cell
/// `(ei, ej)`, starting with the entering cell itself. Cells alternate
/// gain/lose along the returned order.
fn cycle_path(basis: &[bool], n: usize, m: usize, ei: usize, ej: usize) -> Option<Vec<(usize, usize)>> {
    // Bipartite tree search: nodes are rows (0..n) and cols (n..n+m); edges
    // are basic cells. Find the tree path from row ei to col ej.
    let nodes = n + m;
    let mut parent = vec![usize::MAX; nodes];
    let mut seen = vec![false; nodes];
    let mut stack = vec![ei];
    seen[ei] = true;
    while let Some(x) = stack.pop() {
        if x < n {
            for j in 0..m {
                if basis[x * m + j] && !seen[n + j] {
                    seen[n + j] = true;
                    parent[n + j] = x;
                    stack.push(n + j);
                }
            }
        } else {
            let j = x - n;
            for i in 0..n {
                if basis[i * m + j] && !seen[i] {
                    seen[i] = true;
                    parent[i] = x;
                    stack.push(i);
                }
            }
        }
    }
    if !seen[n + ej] {
        return None;
    }
    // Walk back from column ej to row ei, collecting cells.
    let mut cells = vec![(ei, ej)];
    let mut x = n + ej;
    while x != ei {
        let p = parent[x];
        let (i, j) = if x < n { (x, p - n) } else { (p, x - n) };
        cells.push((i, j));
        x = p;
    }
    Some(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_matches_enumeration_on_uniform_clouds() {
        let mu = WeightedCloud::uniform(1, vec![0.0, 0.3, 1.7, 2.0], 1.0).unwrap();
        let nu = WeightedCloud::uniform(1, vec![0.1, 0.5, 1.0, 4.0], 1.0).unwrap();
        let brute = exhaustive_uniform(&mu, &nu);
        let simplex = transportation_simplex(&mu, &nu).unwrap();
        assert!((brute - simplex).abs() <= 1e-9, "brute {brute} simplex {simplex}");
    }

    #[test]
    fn simplex_on_a_textbook_instance() {
        // Unbalanced counts with non-uniform weights, all pairs near.
        let mu = WeightedCloud::new(1, vec![0.0, 0.5], vec![0.7, 0.3]).unwrap();
        let nu = WeightedCloud::new(1, vec![0.2, 0.4, 0.6], vec![0.2, 0.5, 0.3]).unwrap();
        let got = transportation_simplex(&mu, &nu).unwrap();
        // Hand solution: send 0.2 to 0.2 (cost .04), 0.5 to 0.4 (.20 at d=.4),
        // then source 0.5 covers col 0.6 with 0.3 at d=.1 (.03): total 0.27.
        // Check against a slightly better alternative: 0->0.2:0.2, 0->0.4:0.5...
        // supply0 = 0.7: 0.2@d.2 + 0.5@d.4 = 0.04+0.20; supply1 = 0.3: 0.3@d.1 = 0.03.
        assert!((got - 0.27).abs() <= 1e-9, "got {got}");
    }
}
