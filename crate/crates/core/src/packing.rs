//! Matroid-union packing of forests, Tutte–Nash-Williams partitions, and the
//! recursive normalisation of an input graph into cores that carry `k`
//! edge-disjoint spanning trees plus a leftover forest.

use std::collections::VecDeque;

use thiserror::Error;

use crate::arboricity::{exceeds_density, DensityWitness};
use crate::error::PackingError;
use crate::graph::{is_forest, MultiGraph, SubGraph, UnionFind};
use crate::params::Params;

/// `k` edge-disjoint forests of maximum total size, and the edges left over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestPacking {
    pub forests: Vec<Vec<usize>>,
    pub leftover: Vec<usize>,
}

impl ForestPacking {
    pub fn packed(&self) -> usize {
        self.forests.iter().map(Vec::len).sum()
    }
}

/// A vertex partition violating the Tutte–Nash-Williams condition for `k`
/// spanning trees: fewer than `k(|parts|-1)` edges cross it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub parts: Vec<Vec<usize>>,
    pub crossing: usize,
    pub defect: i64,
}

/// Union of `count` graphic matroids on one edge set, grown by shortest
/// augmenting paths in the exchange graph.
pub(crate) struct ForestUnion<'a> {
    g: &'a MultiGraph,
    count: usize,
    assign: Vec<Option<usize>>,
}

/// One forest rooted per component, for path queries.
struct RootedForest {
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    comp: Vec<usize>,
}

impl RootedForest {
    fn build(g: &MultiGraph, edges: impl Iterator<Item = usize>) -> Self {
        let n = g.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for e in edges {
            let (u, v) = g.endpoints(e);
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut comp = vec![usize::MAX; n];
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(w, e) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = s;
                        parent[w] = Some((v, e));
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        Self { parent, depth, comp }
    }

    /// Edge ids on the forest path between `u` and `v`, or `None` if they are
    /// in different trees.
    fn path(&self, mut u: usize, mut v: usize) -> Option<Vec<usize>> {
        if self.comp[u] != self.comp[v] {
            return None;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[u] > self.depth[v] {
            let (p, e) = self.parent[u].unwrap();
            left.push(e);
            u = p;
        }
        while self.depth[v] > self.depth[u] {
            let (p, e) = self.parent[v].unwrap();
            right.push(e);
            v = p;
        }
        while u != v {
            let (pu, eu) = self.parent[u].unwrap();
            let (pv, ev) = self.parent[v].unwrap();
            left.push(eu);
            right.push(ev);
            u = pu;
            v = pv;
        }
        right.reverse();
        left.extend(right);
        Some(left)
    }
}

impl<'a> ForestUnion<'a> {
    pub(crate) fn new(g: &'a MultiGraph, count: usize) -> Self {
        Self { g, count, assign: vec![None; g.edge_count()] }
    }

    pub(crate) fn from_forests(g: &'a MultiGraph, count: usize, forests: &[Vec<usize>]) -> Self {
        let mut fu = Self::new(g, count);
        for (j, f) in forests.iter().enumerate() {
            for &e in f {
                fu.assign[e] = Some(j);
            }
        }
        fu
    }

    fn rooted(&self) -> Vec<RootedForest> {
        (0..self.count)
            .map(|j| RootedForest::build(self.g, (0..self.assign.len()).filter(|&e| self.assign[e] == Some(j))))
            .collect()
    }

    /// Exchange-graph successors of `f`: `(forest j, displaced edge h)` for
    /// each forest not holding `f`; `Err(j)` if `f` fits into `j` directly.
    fn successors(&self, forests: &[RootedForest], f: usize) -> Result<Vec<(usize, usize)>, usize> {
        let (u, v) = self.g.endpoints(f);
        let mut out = Vec::new();
        for (j, rf) in forests.iter().enumerate() {
            if self.assign[f] == Some(j) {
                continue;
            }
            match rf.path(u, v) {
                None => return Err(j),
                Some(path) => out.extend(path.into_iter().map(|h| (j, h))),
            }
        }
        Ok(out)
    }

    /// Inserts edge `e` along a shortest augmenting path; false if the union
    /// cannot grow by `e`.
    pub(crate) fn try_insert(&mut self, e: usize) -> bool {
        self.try_insert_with(e, &[])
    }

    /// Like `try_insert`, but edges flagged in `frozen` keep their forest.
    pub(crate) fn try_insert_with(&mut self, e: usize, frozen: &[bool]) -> bool {
        debug_assert!(self.assign[e].is_none());
        let forests = self.rooted();
        let m = self.assign.len();
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; m];
        let mut seen = vec![false; m];
        seen[e] = true;
        let mut queue = VecDeque::from([e]);
        while let Some(f) = queue.pop_front() {
            match self.successors(&forests, f) {
                Err(j) => {
                    // f enters j; walk back the displacement chain
                    let mut cur = f;
                    let mut target = j;
                    loop {
                        let next = pred[cur];
                        self.assign[cur] = Some(target);
                        match next {
                            Some((g, jg)) => {
                                cur = g;
                                target = jg;
                            }
                            None => break,
                        }
                    }
                    debug_assert!(self.forests_valid());
                    return true;
                }
                Ok(succ) => {
                    for (j, h) in succ {
                        if !seen[h] && !frozen.get(h).copied().unwrap_or(false) {
                            seen[h] = true;
                            pred[h] = Some((f, j));
                            queue.push_back(h);
                        }
                    }
                }
            }
        }
        false
    }

    fn forests_valid(&self) -> bool {
        (0..self.count).all(|j| {
            is_forest(
                self.g.vertex_count(),
                (0..self.assign.len()).filter(|&e| self.assign[e] == Some(j)).map(|e| self.g.endpoints(e)),
            )
        })
    }

    pub(crate) fn forests(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (e, a) in self.assign.iter().enumerate() {
            if let Some(j) = a {
                out[*j].push(e);
            }
        }
        out
    }

    pub(crate) fn leftover(&self) -> Vec<usize> {
        (0..self.assign.len()).filter(|&e| self.assign[e].is_none()).collect()
    }

    /// Edges reachable from unpacked edges in the exchange graph. On a
    /// maximum packing every forest spans this set, so it minimises
    /// `|E \ A| + count * r(A)`.
    pub(crate) fn blocking_set(&self) -> Vec<bool> {
        let forests = self.rooted();
        let m = self.assign.len();
        let mut seen = vec![false; m];
        let mut queue: VecDeque<usize> = self.leftover().into();
        for &e in &queue {
            seen[e] = true;
        }
        while let Some(f) = queue.pop_front() {
            let succ = self.successors(&forests, f).expect("packing is maximum");
            for (_, h) in succ {
                if !seen[h] {
                    seen[h] = true;
                    queue.push_back(h);
                }
            }
        }
        seen
    }
}

/// Maximum-cardinality union of `k` forests.
pub fn pack_k_forests(g: &MultiGraph, k: usize) -> ForestPacking {
    let mut fu = ForestUnion::new(g, k);
    for e in 0..g.edge_count() {
        fu.try_insert(e);
    }
    ForestPacking { forests: fu.forests(), leftover: fu.leftover() }
}

/// `None` iff the connected graph `g` has `k` edge-disjoint spanning trees;
/// otherwise the partition minimising `crossing - k(|parts|-1)`.
pub fn tnw_violating_partition(g: &MultiGraph, k: usize) -> Result<Option<PartitionCertificate>, PackingError> {
    if !g.is_connected() {
        return Err(PackingError::Disconnected);
    }
    let mut fu = ForestUnion::new(g, k);
    for e in 0..g.edge_count() {
        fu.try_insert(e);
    }
    Ok(partition_from_union(g, k, &fu))
}

fn partition_from_union(g: &MultiGraph, k: usize, fu: &ForestUnion<'_>) -> Option<PartitionCertificate> {
    let n = g.vertex_count();
    let packed: usize = fu.forests().iter().map(Vec::len).sum();
    if packed == k * n.saturating_sub(1) {
        return None;
    }
    let a = fu.blocking_set();
    let mut uf = UnionFind::new(n);
    for (e, &inside) in a.iter().enumerate() {
        if inside {
            let (u, v) = g.endpoints(e);
            uf.union(u, v);
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = uf.find(v);
        if slot[r] == usize::MAX {
            slot[r] = parts.len();
            parts.push(Vec::new());
        }
        parts[slot[r]].push(v);
    }
    let crossing = g.edges().iter().filter(|&&(u, v)| uf.find(u) != uf.find(v)).count();
    let defect = crossing as i64 - (k * (parts.len() - 1)) as i64;
    debug_assert!(defect < 0);
    Some(PartitionCertificate { parts, crossing, defect })
}

/// A connected graph with `k` edge-disjoint spanning trees plus a red
/// forest holding every other edge.
#[derive(Debug, Clone)]
pub struct CoreInstance {
    pub graph: MultiGraph,
    pub trees: Vec<Vec<usize>>,
    pub red: Vec<usize>,
}

/// Recursion tree produced by [`normalize`].
#[derive(Debug, Clone)]
pub enum NormalNode {
    /// Handed to the solver.
    Core(CoreInstance),
    /// `k` forests covering every edge; the special forest is empty.
    Sparse { forests: Vec<Vec<usize>> },
    /// Vertex partition: each part is normalised on its own, the crossing
    /// edges are covered by `contracted` (k forests, parent edge ids).
    Split { parts: Vec<SubGraph>, children: Vec<NormalNode>, contracted: Vec<Vec<usize>> },
}

impl NormalNode {
    pub fn cores(&self) -> Vec<&CoreInstance> {
        let mut out = Vec::new();
        self.collect_cores(&mut out);
        out
    }

    fn collect_cores<'a>(&'a self, out: &mut Vec<&'a CoreInstance>) {
        match self {
            NormalNode::Core(c) => out.push(c),
            NormalNode::Sparse { .. } => {}
            NormalNode::Split { children, .. } => children.iter().for_each(|c| c.collect_cores(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("graph is denser than the threshold")]
    Dense(DensityWitness),
    #[error(transparent)]
    Packing(#[from] PackingError),
}

/// Splits `g` into cores (k spanning trees + leftover forest) and sparse
/// pieces. Requires fractional arboricity at most `params.threshold()`.
pub fn normalize(g: &MultiGraph, params: &Params) -> Result<NormalNode, NormalizeError> {
    let k = params.k;
    if g.edge_count() == 0 {
        return Ok(NormalNode::Sparse { forests: vec![Vec::new(); k] });
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        let parts: Vec<SubGraph> = comps.iter().map(|c| g.induced(c)).collect();
        return split_node(g, params, parts, vec![Vec::new(); k]);
    }
    let mut fu = ForestUnion::new(g, k);
    for e in 0..g.edge_count() {
        fu.try_insert(e);
    }
    let leftover = fu.leftover();
    if leftover.is_empty() {
        return Ok(NormalNode::Sparse { forests: fu.forests() });
    }
    match partition_from_union(g, k, &fu) {
        None => {
            let trees = fu.forests();
            let mut full = ForestUnion::from_forests(g, k + 1, &trees);
            for &e in &leftover {
                if !full.try_insert(e) {
                    return Err(dense_error(g, params));
                }
            }
            let mut forests = full.forests();
            let red = forests.pop().expect("k+1 forests");
            debug_assert!(forests.iter().all(|t| t.len() + 1 == g.vertex_count()));
            Ok(NormalNode::Core(CoreInstance { graph: g.clone(), trees: forests, red }))
        }
        Some(cert) => {
            let mut part_of = vec![0; g.vertex_count()];
            for (i, p) in cert.parts.iter().enumerate() {
                for &v in p {
                    part_of[v] = i;
                }
            }
            let mut crossing_ids = Vec::new();
            let mut crossing_edges = Vec::new();
            for (id, &(u, v)) in g.edges().iter().enumerate() {
                if part_of[u] != part_of[v] {
                    crossing_ids.push(id);
                    crossing_edges.push((part_of[u], part_of[v]));
                }
            }
            let contracted_graph =
                MultiGraph::new(cert.parts.len(), crossing_edges).expect("crossing edges join distinct parts");
            let packing = pack_k_forests(&contracted_graph, k);
            if !packing.leftover.is_empty() {
                return Err(PackingError::ContractedTooDense.into());
            }
            let contracted: Vec<Vec<usize>> =
                packing.forests.iter().map(|f| f.iter().map(|&e| crossing_ids[e]).collect()).collect();
            let parts: Vec<SubGraph> = cert.parts.iter().map(|p| g.induced(p)).collect();
            split_node(g, params, parts, contracted)
        }
    }
}

fn split_node(
    g: &MultiGraph,
    params: &Params,
    parts: Vec<SubGraph>,
    contracted: Vec<Vec<usize>>,
) -> Result<NormalNode, NormalizeError> {
    let mut children = Vec::with_capacity(parts.len());
    for part in &parts {
        match normalize(&part.graph, params) {
            Ok(node) => children.push(node),
            Err(NormalizeError::Dense(w)) => {
                let lifted = w.vertices.iter().map(|&v| part.vertex_map[v]).collect();
                let w = DensityWitness::from_vertices(g, lifted).expect("witness has two vertices");
                return Err(NormalizeError::Dense(w));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(NormalNode::Split { parts, children, contracted })
}

fn dense_error(g: &MultiGraph, params: &Params) -> NormalizeError {
    match exceeds_density(g, params.threshold()) {
        Ok(Some(w)) => NormalizeError::Dense(w),
        _ => NormalizeError::Packing(PackingError::ContractedTooDense),
    }
}

/// Combines per-part results into k+1 classes of `g`: class `j < k` is the
/// lifted contracted forest `j` plus every part's class `j`; class `k` is the
/// union of the parts' special forests.
pub fn glue(
    g: &MultiGraph,
    k: usize,
    children: &[(&SubGraph, Vec<Vec<usize>>)],
    contracted: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, PackingError> {
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for (j, f) in contracted.iter().enumerate() {
        classes[j].extend_from_slice(f);
    }
    for (part, result) in children {
        for (j, class) in result.iter().enumerate() {
            classes[j].extend(class.iter().map(|&e| part.edge_map[e]));
        }
    }
    for (j, class) in classes.iter_mut().enumerate() {
        class.sort_unstable();
        if !is_forest(g.vertex_count(), class.iter().map(|&e| g.endpoints(e))) {
            return Err(PackingError::GlueCycle { class: j });
        }
    }
    Ok(classes)
}

/// Errors that carry vertex ids of a part and must be renamed when they
/// propagate to the enclosing graph.
pub trait LiftVertices {
    fn lift(self, vertex_map: &[usize]) -> Self;
}

impl LiftVertices for PackingError {
    fn lift(self, _: &[usize]) -> Self {
        self
    }
}

/// Walks the recursion tree, solving every core with `solve` and gluing the
/// results into k+1 classes of `g`.
pub fn assemble<E>(
    g: &MultiGraph,
    k: usize,
    node: &NormalNode,
    solve: &mut impl FnMut(&CoreInstance) -> Result<Vec<Vec<usize>>, E>,
) -> Result<Vec<Vec<usize>>, E>
where
    E: From<PackingError> + LiftVertices,
{
    match node {
        NormalNode::Core(core) => solve(core),
        NormalNode::Sparse { forests } => {
            let mut out = forests.clone();
            out.push(Vec::new());
            Ok(out)
        }
        NormalNode::Split { parts, children, contracted } => {
            let mut results = Vec::with_capacity(parts.len());
            for (part, child) in parts.iter().zip(children) {
                let r = assemble(&part.graph, k, child, solve).map_err(|e| e.lift(&part.vertex_map))?;
                results.push((part, r));
            }
            Ok(glue(g, k, &results, contracted)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::compute_params;

    fn k4() -> MultiGraph {
        MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Two K4-plus-parallel-edge blobs on 0..4 and 4..8, bridge 3-4.
    pub(crate) fn blob_bridge() -> MultiGraph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for a in 0..4 {
                for b in a + 1..4 {
                    edges.push((base + a, base + b));
                }
            }
            edges.push((base, base + 1));
        }
        edges.push((3, 4));
        MultiGraph::new(8, edges).unwrap()
    }

    #[test]
    fn k4_two_spanning_trees() {
        let p = pack_k_forests(&k4(), 2);
        assert_eq!(p.packed(), 6);
        assert!(p.leftover.is_empty());
        assert_eq!(tnw_violating_partition(&k4(), 2).unwrap(), None);
    }

    #[test]
    fn triangle_one_forest() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = pack_k_forests(&g, 1);
        assert_eq!(p.packed(), 2);
        assert_eq!(p.leftover.len(), 1);
    }

    #[test]
    fn triangles_with_bridge_pack_fully() {
        let g = MultiGraph::new(6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        assert_eq!(pack_k_forests(&g, 2).packed(), 7);
    }

    #[test]
    fn blob_bridge_partition() {
        let cert = tnw_violating_partition(&blob_bridge(), 2).unwrap().unwrap();
        assert_eq!(cert.parts, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
        assert_eq!(cert.crossing, 1);
        assert_eq!(cert.defect, -1);
    }

    #[test]
    fn tree_has_itself() {
        let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(tnw_violating_partition(&g, 1).unwrap(), None);
        let g = MultiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(tnw_violating_partition(&g, 1), Err(PackingError::Disconnected));
    }

    #[test]
    fn normalize_blob_bridge() {
        let g = blob_bridge();
        let params = compute_params(2, 2).unwrap();
        let node = normalize(&g, &params).unwrap();
        let NormalNode::Split { parts, children, contracted } = &node else {
            panic!("expected a split");
        };
        assert_eq!(parts.len(), 2);
        assert_eq!(contracted.iter().map(Vec::len).sum::<usize>(), 1);
        for c in children {
            let NormalNode::Core(core) = c else { panic!("expected cores") };
            assert_eq!(core.trees.len(), 2);
            assert_eq!(core.red.len(), 1);
        }
        let classes = assemble::<PackingError>(&g, 2, &node, &mut |core| {
            let mut out = core.trees.clone();
            out.push(core.red.clone());
            Ok(out)
        })
        .unwrap();
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), g.edge_count());
        // the bridge lands in one of the tree classes
        assert!(classes[..2].iter().any(|c| c.contains(&14)));
    }

    #[test]
    fn normalize_sparse_and_disconnected() {
        let params = compute_params(2, 1).unwrap();
        let node = normalize(&k4(), &params).unwrap();
        assert!(matches!(node, NormalNode::Sparse { .. }));
        let g = MultiGraph::new(5, vec![(0, 1), (2, 3), (3, 4)]).unwrap();
        let node = normalize(&g, &params).unwrap();
        let NormalNode::Split { parts, contracted, .. } = node else { panic!() };
        assert_eq!(parts.len(), 2);
        assert!(contracted.iter().all(Vec::is_empty));
    }

    #[test]
    fn glue_detects_cycle() {
        let g = MultiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let sub = g.induced(&[0, 1, 2]);
        let res = glue(&g, 1, &[(&sub, vec![vec![0, 1, 2], vec![]])], &[vec![]]);
        assert_eq!(res, Err(PackingError::GlueCycle { class: 0 }));
    }
}
