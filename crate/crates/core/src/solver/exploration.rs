use crate::decomposition::Decomposition;
use crate::Rational;

use super::SolverError;

/// Closure of the root under red adjacency and blue out-arcs.
#[derive(Debug, Clone)]
pub struct ExplorationSubgraph {
    pub contains: Vec<bool>,
    /// sorted
    pub vertices: Vec<usize>,
    pub red_edges: usize,
    pub blue_arcs: usize,
}

impl ExplorationSubgraph {
    /// `e_r(H) / (v(H) - 1)`, or `None` for a single vertex.
    pub fn red_density(&self) -> Option<Rational> {
        (self.vertices.len() > 1).then(|| Rational::new(self.red_edges as i64, self.vertices.len() as i64 - 1))
    }
}

pub fn build_exploration(dec: &Decomposition) -> Result<ExplorationSubgraph, SolverError> {
    let n = dec.vertex_count();
    let g = dec.graph();
    let inc = g.incidence();
    let r = dec.root();
    let mut contains = vec![false; n];
    contains[r] = true;
    let mut stack = vec![r];
    while let Some(v) = stack.pop() {
        let red_nbrs = inc[v].iter().filter(|&&(_, e)| dec.is_red(e)).map(|&(w, _)| w);
        let blue_parents = dec.out_arcs(v).map(|a| a.head);
        for w in red_nbrs.chain(blue_parents).collect::<Vec<_>>() {
            if !contains[w] {
                contains[w] = true;
                stack.push(w);
            }
        }
    }
    let vertices: Vec<usize> = (0..n).filter(|&v| contains[v]).collect();
    let red_edges = dec.red_edges().filter(|&e| contains[g.endpoints(e).0]).count();
    let blue_arcs = vertices.iter().flat_map(|&v| dec.out_arcs(v)).filter(|a| contains[a.head]).count();
    if blue_arcs != dec.k() * (vertices.len() - 1) {
        return Err(SolverError::Internal(format!(
            "exploration has {blue_arcs} blue arcs, expected {}",
            dec.k() * (vertices.len() - 1)
        )));
    }
    Ok(ExplorationSubgraph { contains, vertices, red_edges, blue_arcs })
}
