//! Exact fractional arboricity, `max e(H)/(v(H)-1)` over subgraphs with at
//! least two vertices, via a min-cut densest-subgraph oracle.
//!
//! For a threshold `p/q` the oracle maximises `q*e(H) - p*v(H)` over vertex
//! sets containing a fixed anchor (source side of a cut in the network
//! source -> edge node (cap q) -> both endpoints (inf) -> sink (cap p)).
//! Trying every anchor turns this into an exact test of
//! `q*e(H) - p*(v(H)-1) > 0`.

use std::collections::VecDeque;

use crate::error::ArboricityError;
use crate::graph::MultiGraph;
use crate::Rational;

/// A vertex set with its induced edge count and density `e/(v-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityWitness {
    /// sorted
    pub vertices: Vec<usize>,
    pub edge_count: usize,
    pub density: Rational,
}

impl DensityWitness {
    pub fn from_vertices(g: &MultiGraph, mut vertices: Vec<usize>) -> Option<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.len() < 2 {
            return None;
        }
        let mut mask = vec![false; g.vertex_count()];
        for &v in &vertices {
            mask[v] = true;
        }
        let edge_count = g.induced_edge_count(&mask);
        let density = Rational::new(edge_count as i64, vertices.len() as i64 - 1);
        Some(Self { vertices, edge_count, density })
    }

    /// Recounts the induced edges and checks the stored numbers.
    pub fn verify(&self, g: &MultiGraph) -> bool {
        DensityWitness::from_vertices(g, self.vertices.clone()).as_ref() == Some(self)
    }
}

/// Returns a vertex set whose density strictly exceeds `threshold`, or
/// `None` if no such set exists.
pub fn exceeds_density(g: &MultiGraph, threshold: Rational) -> Result<Option<DensityWitness>, ArboricityError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(ArboricityError::TooFewVertices);
    }
    if *threshold.denom() <= 0 {
        return Err(ArboricityError::BadThreshold);
    }
    let (p, q) = (*threshold.numer(), *threshold.denom());
    if p < 0 {
        // any edge, or any pair of vertices, beats a negative threshold
        let vs = match g.edges().first() {
            Some(&(u, v)) => vec![u, v],
            None => vec![0, 1],
        };
        return Ok(DensityWitness::from_vertices(g, vs));
    }
    let mut best: Option<(i64, Vec<usize>)> = None;
    for anchor in 0..n {
        let (value, set) = anchored_max(g, p, q, anchor);
        // value = q*e(H) - p*v(H); the anchored test is value + p > 0
        if value + p > 0 && best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, set));
        }
    }
    Ok(best.and_then(|(_, set)| DensityWitness::from_vertices(g, set)))
}

/// Max of `q*e(H) - p*v(H)` over vertex sets `H` containing `anchor`, and a
/// set attaining it.
fn anchored_max(g: &MultiGraph, p: i64, q: i64, anchor: usize) -> (i64, Vec<usize>) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let source = n + m;
    let sink = source + 1;
    let inf = q.saturating_mul(m as i64 + 1).saturating_add(p.saturating_mul(n as i64 + 1));
    let mut net = FlowNetwork::new(n + m + 2);
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        let node = n + id;
        net.add_edge(source, node, q);
        net.add_edge(node, u, inf);
        net.add_edge(node, v, inf);
    }
    for v in 0..n {
        net.add_edge(v, sink, p);
    }
    net.add_edge(source, anchor, inf);
    let cut = net.max_flow(source, sink);
    let reach = net.source_side(source);
    let set: Vec<usize> = (0..n).filter(|&v| reach[v]).collect();
    (q * m as i64 - cut, set)
}

/// The exact fractional arboricity and a subgraph attaining it.
pub fn fractional_arboricity(g: &MultiGraph) -> Result<(Rational, DensityWitness), ArboricityError> {
    if g.edge_count() == 0 {
        return Err(ArboricityError::Edgeless);
    }
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let mut witness = DensityWitness::from_vertices(g, all).ok_or(ArboricityError::TooFewVertices)?;
    // Dinkelbach: each step strictly raises the density, and densities are
    // fractions with denominator < n, so this terminates.
    while let Some(better) = exceeds_density(g, witness.density)? {
        debug_assert!(better.density > witness.density);
        witness = better;
    }
    Ok((witness.density, witness))
}

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Max over all vertex subsets of size >= 2 of `e(H)/(v(H)-1)`, by enumeration.
pub fn brute_force_gamma(g: &MultiGraph) -> Result<Rational, ArboricityError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(ArboricityError::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    if n < 2 {
        return Err(ArboricityError::TooFewVertices);
    }
    let masks: Vec<u32> = g.edges().iter().map(|&(u, v)| (1u32 << u) | (1u32 << v)).collect();
    let mut best = Rational::from_integer(0);
    for set in 0u32..(1u32 << n) {
        let size = set.count_ones() as i64;
        if size < 2 {
            continue;
        }
        let e = masks.iter().filter(|&&m| set & m == m).count() as i64;
        let dens = Rational::new(e, size - 1);
        if dens > best {
            best = dens;
        }
    }
    Ok(best)
}

/// Dinic max flow on integer capacities.
struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        Self { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<i32> {
        let mut level = vec![-1; self.head.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.head[u] {
                let v = self.to[id];
                if self.cap[id] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, f: i64, level: &[i32], it: &mut [usize]) -> i64 {
        if u == t {
            return f;
        }
        while it[u] < self.head[u].len() {
            let id = self.head[u][it[u]];
            let v = self.to[id];
            if self.cap[id] > 0 && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, f.min(self.cap[id]), level, it);
                if pushed > 0 {
                    self.cap[id] -= pushed;
                    self.cap[id ^ 1] += pushed;
                    return pushed;
                }
            }
            it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return flow;
            }
            let mut it = vec![0; self.head.len()];
            loop {
                let f = self.augment(s, t, i64::MAX, &level, &mut it);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual network.
    fn source_side(&self, s: usize) -> Vec<bool> {
        self.levels(s).into_iter().map(|l| l >= 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> MultiGraph {
        MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn k4_thresholds() {
        assert_eq!(exceeds_density(&k4(), Rational::from_integer(2)).unwrap(), None);
        let w = exceeds_density(&k4(), Rational::new(3, 2)).unwrap().unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2, 3]);
        assert_eq!(w.density, Rational::from_integer(2));
    }

    #[test]
    fn single_edge() {
        let g = MultiGraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(exceeds_density(&g, Rational::from_integer(1)).unwrap(), None);
        assert_eq!(fractional_arboricity(&g).unwrap().0, Rational::from_integer(1));
    }

    #[test]
    fn triangles_joined_by_edge() {
        let g = MultiGraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        let (gamma, w) = fractional_arboricity(&g).unwrap();
        assert_eq!(gamma, Rational::new(3, 2));
        assert!(w.verify(&g));
        assert_eq!(brute_force_gamma(&g).unwrap(), gamma);
    }

    #[test]
    fn brute_force_small_cases() {
        let tri = MultiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(brute_force_gamma(&tri).unwrap(), Rational::new(3, 2));
        assert_eq!(brute_force_gamma(&k4()).unwrap(), Rational::from_integer(2));
        let path = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(brute_force_gamma(&path).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn errors() {
        assert_eq!(fractional_arboricity(&MultiGraph::empty(3)), Err(ArboricityError::Edgeless));
        assert_eq!(
            exceeds_density(&MultiGraph::empty(1), Rational::from_integer(1)),
            Err(ArboricityError::TooFewVertices)
        );
        assert!(brute_force_gamma(&MultiGraph::empty(21)).is_err());
    }
}
