//! Exact solvers for the truncated-cost transport problem.
//!
//! Two routes:
//!
//! * equal-count uniform clouds reduce to a min-cost perfect assignment,
//!   solved by the shortest-augmenting-path method with dual potentials;
//! * general weighted clouds become a min-cost flow on a sparsified
//!   bipartite graph: only pairs closer than the truncation level get a
//!   direct arc, and a single hub node carries all far mass at split cost
//!   `0.5 + 0.5 = 1`. Any coupling has the same cost in this graph as under
//!   the truncated metric, so the sparsification is exact. The flow is
//!   solved by successive shortest paths with Johnson potentials.

use crate::cloud::{truncated_cost, WeightedCloud, COST_CAP};
use crate::{PlanEntry, TransportError};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Minimum-cost perfect assignment on a dense `n x n` cost matrix
/// (row-major). Returns the total cost and the row-to-column assignment.
pub fn solve_assignment(cost: &[f64], n: usize) -> (f64, Vec<usize>) {
    assert_eq!(cost.len(), n * n);
    // Dual-potential shortest augmenting path, one row at a time.
    // Columns are 1-indexed internally; index 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if matched[j] > 0 {
            assignment[matched[j] - 1] = j - 1;
        }
    }
    let total = (0..n).map(|i| cost[i * n + assignment[i]]).sum();
    (total, assignment)
}

/// Assignment route for two uniform clouds with equal counts.
pub fn w1_assignment(
    mu: &WeightedCloud,
    nu: &WeightedCloud,
) -> Result<(f64, Vec<PlanEntry>), TransportError> {
    let n = mu.len();
    assert_eq!(n, nu.len());
    let mut cost = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = truncated_cost(mu.point(i), nu.point(j));
        }
    }
    let (unit_cost, assignment) = solve_assignment(&cost, n);
    let w = mu.total_mass() / n as f64;
    let plan = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| PlanEntry { from: i, to: j, mass: w })
        .collect();
    Ok((unit_cost * w, plan))
}

struct Arc {
    to: usize,
    residual: f64,
    cost: f64,
    forward: bool,
}

struct FlowGraph {
    adj: Vec<Vec<usize>>, // node -> arc indices
    arcs: Vec<Arc>,
}

impl FlowGraph {
    fn new(nodes: usize) -> Self {
        FlowGraph { adj: vec![Vec::new(); nodes], arcs: Vec::new() }
    }

    fn add(&mut self, from: usize, to: usize, cost: f64) {
        let a = self.arcs.len();
        self.arcs.push(Arc { to, residual: f64::INFINITY, cost, forward: true });
        self.arcs.push(Arc { to: from, residual: 0.0, cost: -cost, forward: false });
        self.adj[from].push(a);
        self.adj[to].push(a + 1);
    }
}

#[derive(PartialEq)]
struct HeapKey(f64, usize);
impl Eq for HeapKey {}
impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest distance.
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}
impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact truncated-cost transport between general weighted clouds via the
/// hub-sparsified min-cost flow. Assumes equal total mass (the caller
/// validates).
pub fn w1_network(
    mu: &WeightedCloud,
    nu: &WeightedCloud,
) -> Result<(f64, Vec<PlanEntry>), TransportError> {
    let n = mu.len();
    let m = nu.len();
    let hub = n + m;
    let nodes = n + m + 1;
    let mut graph = FlowGraph::new(nodes);
    // Direct arcs for near pairs only; far mass rides through the hub at
    // exactly the truncation cost.
    for i in 0..n {
        for j in 0..m {
            let c = truncated_cost(mu.point(i), nu.point(j));
            if c < COST_CAP {
                graph.add(i, n + j, c);
            }
        }
    }
    for i in 0..n {
        graph.add(i, hub, 0.5 * COST_CAP);
    }
    for j in 0..m {
        graph.add(hub, n + j, 0.5 * COST_CAP);
    }

    let mut supply: Vec<f64> = mu.weights.clone();
    let mut demand: Vec<f64> = nu.weights.clone();
    let mass: f64 = mu.total_mass();
    let tol = 1e-13 * mass.max(1e-300);
    let mut remaining: f64 = mass;

    let mut potential = vec![0.0f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut parent_arc = vec![usize::MAX; nodes];
    let max_rounds = 6 * (n + m) + 64;
    let mut rounds = 0usize;

    while remaining > tol {
        rounds += 1;
        if rounds > max_rounds {
            return Err(TransportError::SolverStalled {
                detail: "min-cost flow made no progress within the round budget",
            });
        }
        // Multi-source Dijkstra on reduced costs. Reverse arcs of tight path
        // arcs are exactly zero only in exact arithmetic; clamping at zero
        // keeps the arc weights nonnegative so the search terminates, and
        // costs are settled from the original arc data afterwards.
        dist.fill(f64::INFINITY);
        parent_arc.fill(usize::MAX);
        let mut heap = BinaryHeap::new();
        for (i, &s) in supply.iter().enumerate() {
            if s > tol {
                dist[i] = 0.0;
                heap.push(HeapKey(0.0, i));
            }
        }
        let mut pops = 0usize;
        let pop_budget = 16 * (graph.arcs.len() + nodes) + 1024;
        while let Some(HeapKey(d, node)) = heap.pop() {
            pops += 1;
            if pops > pop_budget {
                return Err(TransportError::SolverStalled {
                    detail: "shortest-path search exceeded its pop budget",
                });
            }
            if d > dist[node] {
                continue;
            }
            for &ai in &graph.adj[node] {
                let arc = &graph.arcs[ai];
                if arc.residual <= tol {
                    continue;
                }
                let nd = d + (arc.cost + potential[node] - potential[arc.to]).max(0.0);
                if nd < dist[arc.to] {
                    dist[arc.to] = nd;
                    parent_arc[arc.to] = ai;
                    heap.push(HeapKey(nd, arc.to));
                }
            }
        }
        // Cheapest sink still in demand.
        let mut best: Option<(f64, usize)> = None;
        for (j, &d) in demand.iter().enumerate() {
            if d > tol && dist[n + j].is_finite() {
                let key = dist[n + j];
                if best.map_or(true, |(bd, _)| key < bd) {
                    best = Some((key, n + j));
                }
            }
        }
        let Some((_, sink)) = best else {
            return Err(TransportError::SolverStalled {
                detail: "no augmenting path to remaining demand",
            });
        };
        // Bottleneck along the path.
        let mut amount = demand[sink - n];
        let mut node = sink;
        let mut source = usize::MAX;
        while parent_arc[node] != usize::MAX {
            let ai = parent_arc[node];
            amount = amount.min(graph.arcs[ai].residual);
            let from = graph.arcs[ai ^ 1].to;
            node = from;
            source = from;
        }
        amount = amount.min(supply[source]);
        // Apply the augmentation.
        let mut node = sink;
        while parent_arc[node] != usize::MAX {
            let ai = parent_arc[node];
            graph.arcs[ai].residual -= amount;
            graph.arcs[ai ^ 1].residual += amount;
            node = graph.arcs[ai ^ 1].to;
        }
        supply[source] -= amount;
        demand[sink - n] -= amount;
        remaining -= amount;
        // Johnson potential update keeps reduced costs nonnegative; capping
        // at the sink distance handles nodes the search never settled.
        let settled = dist[sink];
        for v in 0..nodes {
            potential[v] += if dist[v].is_finite() { dist[v].min(settled) } else { settled };
        }
    }

    // Read the plan off the forward arcs; flow on a forward arc equals the
    // residual accumulated on its twin.
    let mut plan = Vec::new();
    let mut hub_in: Vec<(usize, f64)> = Vec::new();
    let mut hub_out: Vec<(usize, f64)> = Vec::new();
    let mut total_cost = 0.0;
    for (ai, arc) in graph.arcs.iter().enumerate() {
        if !arc.forward {
            continue;
        }
        let flow = graph.arcs[ai ^ 1].residual;
        if flow <= 0.0 {
            continue;
        }
        total_cost += flow * arc.cost;
        let from = graph.arcs[ai ^ 1].to;
        if arc.to == hub {
            hub_in.push((from, flow));
        } else if from == hub {
            hub_out.push((arc.to - n, flow));
        } else {
            plan.push(PlanEntry { from, to: arc.to - n, mass: flow });
        }
    }
    // Pair hub traffic greedily in index order: every pairing costs exactly
    // the truncation level, so any one is optimal.
    let (mut i, mut j) = (0usize, 0usize);
    while i < hub_in.len() && j < hub_out.len() {
        let amt = hub_in[i].1.min(hub_out[j].1);
        if amt > 0.0 {
            plan.push(PlanEntry { from: hub_in[i].0, to: hub_out[j].0, mass: amt });
        }
        hub_in[i].1 -= amt;
        hub_out[j].1 -= amt;
        if hub_in[i].1 <= tol {
            i += 1;
        }
        if hub_out[j].1 <= tol {
            j += 1;
        }
    }
    Ok((total_cost, plan))
}
