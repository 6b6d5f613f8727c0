//! k rooted blue spanning trees plus an undirected red forest.
//!
//! Blue trees are stored as parent-pointer arrays: every non-root vertex has
//! exactly one out-arc per tree, pointing towards the root. Trees are
//! numbered `0..k`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{ExchangeError, StructureError};
use crate::graph::{MultiGraph, UnionFind};
use crate::params::Params;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Blue(usize),
    Red,
}

/// A blue arc: `tail`'s parent in `tree` is `head`, via `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlueArc {
    pub tail: usize,
    pub head: usize,
    pub tree: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    graph: Arc<MultiGraph>,
    k: usize,
    root: usize,
    color: Vec<Color>,
    /// parent[b][v] = (parent vertex, edge id)
    parent: Vec<Vec<Option<(usize, usize)>>>,
}

impl Decomposition {
    /// Builds a decomposition from `k` spanning trees (edge-id lists) and the
    /// red edges, orienting every tree towards `root`.
    pub fn from_trees(
        graph: Arc<MultiGraph>,
        root: usize,
        trees: &[Vec<usize>],
        red: &[usize],
    ) -> Result<Self, StructureError> {
        let n = graph.vertex_count();
        let mut color = vec![Color::Red; graph.edge_count()];
        let mut seen = vec![false; graph.edge_count()];
        for (b, tree) in trees.iter().enumerate() {
            for &e in tree {
                color[e] = Color::Blue(b);
                seen[e] = true;
            }
        }
        for &e in red {
            seen[e] = true;
        }
        if let Some(e) = seen.iter().position(|s| !s) {
            // every edge must be assigned somewhere
            return Err(StructureError::StrayBlue { tree: usize::MAX, edge: e });
        }
        let mut dec = Self { graph, k: trees.len(), root, color, parent: vec![vec![None; n]; trees.len()] };
        dec.orient_all(root)?;
        dec.check_structure()?;
        Ok(dec)
    }

    fn orient_all(&mut self, root: usize) -> Result<(), StructureError> {
        let n = self.graph.vertex_count();
        let inc = self.graph.incidence();
        for b in 0..self.k {
            let mut parent = vec![None; n];
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, e) in &inc[v] {
                    if self.color[e] == Color::Blue(b) && !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((v, e));
                        queue.push_back(w);
                    }
                }
            }
            if let Some(v) = seen.iter().position(|s| !s) {
                return Err(StructureError::MissingParent { tree: b, vertex: v });
            }
            self.parent[b] = parent;
        }
        self.root = root;
        Ok(())
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<MultiGraph> {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn color(&self, e: usize) -> Color {
        self.color[e]
    }

    pub fn colors(&self) -> &[Color] {
        &self.color
    }

    pub fn is_red(&self, e: usize) -> bool {
        self.color[e] == Color::Red
    }

    /// Parent of `v` in tree `b` together with the connecting edge.
    pub fn parent(&self, b: usize, v: usize) -> Option<(usize, usize)> {
        self.parent[b][v]
    }

    pub fn arc(&self, b: usize, v: usize) -> Option<BlueArc> {
        self.parent[b][v].map(|(head, edge)| BlueArc { tail: v, head, tree: b, edge })
    }

    /// All blue out-arcs of `v`, one per tree (none for the root).
    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = BlueArc> + '_ {
        (0..self.k).filter_map(move |b| self.arc(b, v))
    }

    pub fn red_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.color.len()).filter(|&e| self.color[e] == Color::Red)
    }

    pub fn tree_edges(&self, b: usize) -> Vec<usize> {
        (0..self.color.len()).filter(|&e| self.color[e] == Color::Blue(b)).collect()
    }

    /// True iff walking parent pointers of tree `b` from `x` reaches `u`.
    /// Every vertex is its own descendant.
    pub fn is_descendant(&self, b: usize, x: usize, u: usize) -> bool {
        let mut cur = x;
        for _ in 0..=self.vertex_count() {
            if cur == u {
                return true;
            }
            match self.parent[b][cur] {
                Some((p, _)) => cur = p,
                None => return false,
            }
        }
        false
    }

    /// Vertices from `v` up to the root of tree `b`, both inclusive.
    pub fn path_to_root(&self, b: usize, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some((p, _)) = self.parent[b][cur] {
            path.push(p);
            cur = p;
            if path.len() > self.vertex_count() {
                break;
            }
        }
        path
    }

    /// Children lists of tree `b`.
    pub fn children(&self, b: usize) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.vertex_count()];
        for v in 0..self.vertex_count() {
            if let Some((p, _)) = self.parent[b][v] {
                ch[p].push(v);
            }
        }
        ch
    }

    /// Reorients all trees towards `r_new`; the colouring is unchanged.
    pub fn reroot(&self, r_new: usize) -> Result<Self, StructureError> {
        let mut out = self.clone();
        out.orient_all(r_new)?;
        Ok(out)
    }

    /// Performs `(u, u') <-> e`: the parent arc of `u` in tree `b` turns red,
    /// red edge `e` turns blue, and the tree path from the endpoint of `e`
    /// below `u` up to `u` is reoriented.
    pub fn exchange(&mut self, b: usize, u: usize, e: usize) -> Result<(), ExchangeError> {
        let Some((u_par, u_edge)) = self.parent[b][u] else {
            return Err(ExchangeError::RootArc(u));
        };
        if self.color[e] != Color::Red {
            return Err(ExchangeError::NotRed(e));
        }
        let (a, c) = self.graph.endpoints(e);
        let (v1, v2) = match (self.is_descendant(b, a, u), self.is_descendant(b, c, u)) {
            (true, false) => (a, c),
            (false, true) => (c, a),
            _ => return Err(ExchangeError::NotOnCycle { tree: b, tail: u, edge: e }),
        };
        if !self.red_forest_accepts_swap(e, u, u_par) {
            return Err(ExchangeError::RedCycle { tail: u });
        }
        // reverse the path v1 -> ... -> u
        let path = self.path_to_root(b, v1);
        let upto = path.iter().position(|&w| w == u).expect("u is an ancestor of v1");
        for i in (1..=upto).rev() {
            let child = path[i - 1];
            let edge = self.parent[b][child].expect("path vertex has a parent").1;
            self.parent[b][path[i]] = Some((child, edge));
        }
        self.parent[b][v1] = Some((v2, e));
        self.color[e] = Color::Blue(b);
        self.color[u_edge] = Color::Red;
        Ok(())
    }

    /// Whether `F - e + xy` stays acyclic.
    fn red_forest_accepts_swap(&self, e: usize, x: usize, y: usize) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for f in self.red_edges() {
            if f != e {
                let (p, q) = self.graph.endpoints(f);
                uf.union(p, q);
            }
        }
        uf.find(x) != uf.find(y)
    }

    /// Low-level mutation used by path augmentations: sets the parent of `v`
    /// in tree `b` and recolours edges. Callers re-check the structure.
    pub(crate) fn set_parent_raw(&mut self, b: usize, v: usize, parent: Option<(usize, usize)>) {
        self.parent[b][v] = parent;
    }

    pub(crate) fn set_color_raw(&mut self, e: usize, c: Color) {
        self.color[e] = c;
    }

    /// Full structural check: k spanning trees oriented to the root, colours
    /// consistent with parent maps, red edges acyclic.
    pub fn check_structure(&self) -> Result<(), StructureError> {
        let n = self.vertex_count();
        if self.parent.len() != self.k {
            return Err(StructureError::TreeCount { k: self.k, found: self.parent.len() });
        }
        let mut parent_edge_of = vec![None; self.color.len()];
        for b in 0..self.k {
            for v in 0..n {
                match self.parent[b][v] {
                    None if v != self.root => return Err(StructureError::MissingParent { tree: b, vertex: v }),
                    Some(_) if v == self.root => return Err(StructureError::RootHasParent { tree: b, root: v }),
                    Some((p, e)) => {
                        let (x, y) = self.graph.endpoints(e);
                        let ok = ((x, y) == (v, p) || (x, y) == (p, v))
                            && self.color[e] == Color::Blue(b)
                            && parent_edge_of[e].is_none();
                        if !ok {
                            return Err(StructureError::BadParentEdge { tree: b, vertex: v, edge: e });
                        }
                        parent_edge_of[e] = Some(b);
                    }
                    None => {}
                }
            }
            // acyclic: every vertex reaches the root
            let mut state = vec![0u8; n]; // 0 unknown, 1 in progress, 2 reaches root
            state[self.root] = 2;
            for v in 0..n {
                let mut stack = Vec::new();
                let mut cur = v;
                while state[cur] == 0 {
                    state[cur] = 1;
                    stack.push(cur);
                    cur = self.parent[b][cur].expect("checked above").0;
                }
                if state[cur] == 1 {
                    return Err(StructureError::Cycle { tree: b, vertex: v });
                }
                for w in stack {
                    state[w] = 2;
                }
            }
        }
        for (e, c) in self.color.iter().enumerate() {
            if let Color::Blue(b) = *c {
                if parent_edge_of[e] != Some(b) {
                    return Err(StructureError::StrayBlue { tree: b, edge: e });
                }
            }
        }
        let mut uf = UnionFind::new(n);
        for e in self.red_edges() {
            let (u, v) = self.graph.endpoints(e);
            if !uf.union(u, v) {
                return Err(StructureError::RedCycle { edge: e });
            }
        }
        Ok(())
    }

    pub fn red_components(&self) -> Result<RedComponents, StructureError> {
        RedComponents::compute(self)
    }

    pub fn residue(&self, params: &Params) -> Result<ResidueVector, StructureError> {
        Ok(self.red_components()?.residue(params))
    }

    /// The k+1 edge classes: trees `0..k` then the red forest.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k + 1];
        for (e, c) in self.color.iter().enumerate() {
            match *c {
                Color::Blue(b) => out[b].push(e),
                Color::Red => out[self.k].push(e),
            }
        }
        out
    }
}

/// A red component: a tree of the red forest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    /// sorted
    pub vertices: Vec<usize>,
    /// sorted
    pub edges: Vec<usize>,
}

impl Component {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices[0]
    }
}

/// Connected components of the red forest, ordered by smallest vertex.
#[derive(Debug, Clone)]
pub struct RedComponents {
    pub comp_of: Vec<usize>,
    pub comps: Vec<Component>,
}

impl RedComponents {
    fn compute(dec: &Decomposition) -> Result<Self, StructureError> {
        let n = dec.vertex_count();
        let g = dec.graph();
        let mut uf = UnionFind::new(n);
        for e in dec.red_edges() {
            let (u, v) = g.endpoints(e);
            if !uf.union(u, v) {
                return Err(StructureError::RedCycle { edge: e });
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut comp_of = vec![0; n];
        let mut comps: Vec<Component> = Vec::new();
        for (v, c) in comp_of.iter_mut().enumerate() {
            let r = uf.find(v);
            if slot[r] == usize::MAX {
                slot[r] = comps.len();
                comps.push(Component { vertices: Vec::new(), edges: Vec::new() });
            }
            *c = slot[r];
            comps[slot[r]].vertices.push(v);
        }
        for e in dec.red_edges() {
            let (u, _) = g.endpoints(e);
            comps[comp_of[u]].edges.push(e);
        }
        debug_assert!(comps.iter().all(|c| c.edges.len() + 1 == c.vertices.len()));
        Ok(Self { comp_of, comps })
    }

    pub fn of(&self, v: usize) -> &Component {
        &self.comps[self.comp_of[v]]
    }

    pub fn residue(&self, params: &Params) -> ResidueVector {
        let mut counts = BTreeMap::new();
        for c in &self.comps {
            if c.edge_count() > params.d_prime {
                *counts.entry(c.edge_count()).or_insert(0) += 1;
            }
        }
        ResidueVector { counts }
    }
}

/// Counts of red components per edge count above d'. Ordered
/// lexicographically starting from the largest size.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ResidueVector {
    pub counts: BTreeMap<usize, usize>,
}

impl ResidueVector {
    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, size: usize) -> usize {
        self.counts.get(&size).copied().unwrap_or(0)
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut counts = BTreeMap::new();
        if s == "-" {
            return Some(Self { counts });
        }
        for part in s.split(',') {
            let (a, b) = part.split_once(':')?;
            counts.insert(a.parse().ok()?, b.parse().ok()?);
        }
        Some(Self { counts })
    }
}

impl Ord for ResidueVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut sizes: Vec<usize> = self.counts.keys().chain(other.counts.keys()).copied().collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes.dedup();
        for s in sizes {
            match self.count(s).cmp(&other.count(s)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ResidueVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ResidueVector {
    /// `size:count` pairs from the largest size down, or `-` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.counts.iter().rev().map(|(s, c)| format!("{s}:{c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::compute_params;

    fn chain() -> Decomposition {
        // r=0 <- a=1 <- b=2 in tree 0, one red edge 0-2
        let g = Arc::new(MultiGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap());
        Decomposition::from_trees(g, 0, &[vec![0, 1]], &[2]).unwrap()
    }

    #[test]
    fn descendants() {
        let d = chain();
        assert!(d.is_descendant(0, 1, 1));
        assert!(d.is_descendant(0, 2, 1));
        assert!(!d.is_descendant(0, 1, 2));
    }

    #[test]
    fn reroot_path_reverses() {
        let g = Arc::new(MultiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap());
        let d = Decomposition::from_trees(g, 0, &[vec![0, 1]], &[]).unwrap();
        assert_eq!(d.reroot(0).unwrap(), d);
        let r = d.reroot(2).unwrap();
        assert_eq!(r.parent(0, 0), Some((1, 0)));
        assert_eq!(r.parent(0, 1), Some((2, 1)));
        assert_eq!(r.parent(0, 2), None);
    }

    #[test]
    fn reroot_star_at_leaf() {
        let g = Arc::new(MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap());
        let d = Decomposition::from_trees(g, 0, &[vec![0, 1, 2]], &[]).unwrap();
        let r = d.reroot(1).unwrap();
        assert_eq!(r.parent(0, 0), Some((1, 0)));
        assert_eq!(r.parent(0, 2), Some((0, 1)));
        assert_eq!(r.parent(0, 3), Some((0, 2)));
    }

    #[test]
    fn exchange_three_vertices() {
        // tree arcs (a,r),(b,a); red edge rb; (b,a) <-> rb
        let mut d = chain();
        d.exchange(0, 2, 2).unwrap();
        assert_eq!(d.parent(0, 1), Some((0, 0)));
        assert_eq!(d.parent(0, 2), Some((0, 2)));
        assert!(d.is_red(1));
        d.check_structure().unwrap();
    }

    #[test]
    fn exchange_rejects_both_descendants() {
        // r=0 <- 1 <- 2, 1 <- 3 ; red edge 2-3: both below 1
        let g = Arc::new(MultiGraph::new(4, vec![(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap());
        let mut d = Decomposition::from_trees(g, 0, &[vec![0, 1, 2]], &[3]).unwrap();
        assert!(matches!(d.exchange(0, 1, 3), Err(ExchangeError::NotOnCycle { .. })));
    }

    #[test]
    fn residue_ordering() {
        let p = compute_params(1, 1).unwrap();
        let mut big = ResidueVector::default();
        big.counts.insert(6, 1);
        let mut many = ResidueVector::default();
        many.counts.insert(5, 10);
        assert!(big > many);
        assert!(ResidueVector::default() < many);
        let d = chain();
        assert_eq!(d.residue(&p).unwrap(), ResidueVector::default());
        assert_eq!(ResidueVector::parse(&big.to_string()).unwrap(), big);
    }
}
