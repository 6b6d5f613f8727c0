use crate::decomposition::{Component, Decomposition};
use crate::params::Params;

use super::SolverError;

/// For each vertex `v` of the red tree `comp`: the minimum, over red edges
/// `e` at `v`, of the number of edges on `v`'s side of `comp - e`.
pub fn balance(dec: &Decomposition, comp: &Component) -> Vec<(usize, usize)> {
    let g = dec.graph();
    let n = dec.vertex_count();
    let total = comp.edge_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in &comp.edges {
        let (u, v) = g.endpoints(e);
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    // root the tree at its smallest vertex; sub[v] = edges strictly below v
    let start = comp.min_vertex();
    let mut order = vec![start];
    let mut parent = vec![usize::MAX; n];
    parent[start] = start;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &(w, _) in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
    }
    let mut sub = vec![0usize; n];
    for &v in order.iter().rev() {
        if v != start {
            sub[parent[v]] += sub[v] + 1;
        }
    }
    comp.vertices
        .iter()
        .map(|&v| {
            let mut beta = usize::MAX;
            for &(w, _) in &adj[v] {
                let side = if parent[w] == v { total - 1 - sub[w] } else { sub[v] };
                beta = beta.min(side);
            }
            (v, if beta == usize::MAX { 0 } else { beta })
        })
        .collect()
}

/// A vertex of the oversize red tree whose every incident red edge leaves
/// at least `ell + 1` edges on its side. Maximises the balance, ties by id.
pub fn choose_root(dec: &Decomposition, comp: &Component, params: &Params) -> Result<usize, SolverError> {
    if comp.edge_count() < params.d_prime + 1 {
        return Err(SolverError::ComponentTooSmall { edges: comp.edge_count() });
    }
    let (r, beta) = balance(dec, comp).into_iter().fold((usize::MAX, 0), |best, (v, b)| {
        if best.0 == usize::MAX || b > best.1 {
            (v, b)
        } else {
            best
        }
    });
    if beta < params.ell + 1 {
        return Err(SolverError::Internal(format!("root balance {beta} below ell+1")));
    }
    Ok(r)
}
