//! Deterministic floating-point reductions.
//!
//! Parallel sums are computed over fixed-size chunks whose partial sums are
//! combined in chunk order, so the result is bit-identical for any thread
//! count (including 1). Within a chunk, pairwise (tree) summation keeps the
//! rounding error at O(log n) ulps instead of O(n).

use rayon::prelude::*;

/// Chunk length used by the deterministic parallel reductions. Fixed (not
/// derived from the thread count) so results never depend on parallelism.
pub const REDUCTION_CHUNK: usize = 1024;

/// Pairwise (tree) sum of a slice; deterministic and cache-friendly.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Deterministic parallel sum of `f(i)` for i in 0..n.
///
/// Work is split into [`REDUCTION_CHUNK`]-sized chunks evaluated in
/// parallel; chunk partial sums are then combined sequentially in chunk
/// order, so the floating-point result is independent of the thread count.
pub fn deterministic_sum<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> f64 {
    let chunks: Vec<(usize, usize)> = (0..n)
        .step_by(REDUCTION_CHUNK)
        .map(|start| (start, (start + REDUCTION_CHUNK).min(n)))
        .collect();
    let partials: Vec<f64> = chunks
        .par_iter()
        .map(|&(a, b)| {
            let vals: Vec<f64> = (a..b).map(&f).collect();
            pairwise_sum(&vals)
        })
        .collect();
    pairwise_sum(&partials)
}

/// Deterministic parallel map: evaluates `f(i)` into a vector, preserving
/// index order regardless of scheduling.
pub fn deterministic_map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}
