//! Fixed benchmark corpora.

use ndt_core::{compute_params, filter_feasible, generate, Family, GenSpec, MultiGraph, Params};

/// Feasible random multigraphs on `n` vertices with about `fill` times the
/// threshold edge count; infeasible draws are skipped.
pub fn feasible_corpus(params: &Params, n: usize, fill: f64, count: usize) -> Vec<MultiGraph> {
    let t = params.threshold();
    let m = ((n - 1) as f64 * *t.numer() as f64 / *t.denom() as f64 * fill) as usize;
    (0u64..)
        .map(|seed| {
            let family = if seed % 2 == 0 { Family::RandomMultigraph } else { Family::ForestPlusNoise };
            generate(&GenSpec { family, n, m, k: params.k, d: params.d, seed }).expect("n >= 2")
        })
        .filter(|g| filter_feasible(g, params))
        .take(count)
        .collect()
}

/// `(k, d)` pairs used across the benchmarks.
pub fn param_grid() -> Vec<Params> {
    [(1, 2), (2, 3), (3, 5)].into_iter().map(|(k, d)| compute_params(k, d).expect("positive")).collect()
}
