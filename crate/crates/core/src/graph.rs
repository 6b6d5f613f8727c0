//! Loop-free multigraphs with dense edge identifiers.

use crate::error::GraphError;

/// An undirected multigraph. Edge `i` is `edges[i]`; parallel edges are
/// allowed, loops are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { edge: id, n });
            }
            if u == v {
                return Err(GraphError::Loop { edge: id, vertex: u });
            }
        }
        Ok(Self { n, edges })
    }

    /// Graph on `n` vertices without edges.
    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// Incidence lists: for each vertex, `(neighbour, edge id)` pairs in edge-id order.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((v, id));
            inc[v].push((u, id));
        }
        inc
    }

    /// Number of edges with both endpoints in the vertex set given by `mask`.
    pub fn induced_edge_count(&self, mask: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| mask[u] && mask[v]).count()
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> SubGraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edges.push((local[u], local[v]));
                edge_map.push(id);
            }
        }
        SubGraph { graph: MultiGraph { n: vertices.len(), edges }, vertex_map: vertices.to_vec(), edge_map }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        components_of(self.n, self.edges.iter().copied())
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }
}

/// A subgraph rebuilt as a standalone graph, with maps back to the parent.
#[derive(Debug, Clone)]
pub struct SubGraph {
    pub graph: MultiGraph,
    /// local vertex -> parent vertex
    pub vertex_map: Vec<usize>,
    /// local edge id -> parent edge id
    pub edge_map: Vec<usize>,
}

/// Components of the graph on `0..n` with the given edge list.
pub fn components_of(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    let mut by_root: Vec<Option<usize>> = vec![None; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = uf.find(v);
        let slot = *by_root[r].get_or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[slot].push(v);
    }
    comps
}

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// True if the given edges form a forest on `0..n`.
pub fn is_forest(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut uf = UnionFind::new(n);
    edges.into_iter().all(|(u, v)| uf.union(u, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops() {
        assert!(matches!(MultiGraph::new(2, vec![(0, 0)]), Err(GraphError::Loop { edge: 0, vertex: 0 })));
        assert!(MultiGraph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn parallel_edges_are_kept() {
        let g = MultiGraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(!is_forest(2, g.edges().iter().copied()));
    }

    #[test]
    fn induced_subgraph_maps_back() {
        let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sub = g.induced(&[3, 2, 1]);
        assert_eq!(sub.graph.edges(), &[(2, 1), (1, 0)]);
        assert_eq!(sub.edge_map, vec![1, 2]);
        assert_eq!(sub.vertex_map[0], 3);
    }

    #[test]
    fn components() {
        let g = MultiGraph::new(5, vec![(0, 3), (4, 1)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 3], vec![1, 4], vec![2]]);
    }
}
