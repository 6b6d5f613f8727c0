//! Legal orders of the red components of an exploration subgraph, and the
//! auxiliary tree spanned by their witnessing arcs.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::decomposition::{BlueArc, Component, Decomposition, RedComponents};

use super::exploration::{build_exploration, ExplorationSubgraph};
use super::SolverError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedComponent {
    pub comp: Component,
    /// Blue arc from an earlier component into this one; `None` for the first.
    pub witness: Option<BlueArc>,
}

#[derive(Debug, Clone)]
pub struct LegalOrder {
    pub comps: Vec<OrderedComponent>,
    /// vertex -> position of its red component, `None` outside the exploration
    position: Vec<Option<usize>>,
    /// vertex -> parent in the auxiliary tree with the connecting edge
    aux_parent: Vec<Option<(usize, usize)>>,
}

impl LegalOrder {
    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.position[v]
    }

    /// Position of `v`, with vertices outside the exploration sorting last.
    pub fn index(&self, v: usize) -> usize {
        self.position[v].unwrap_or(usize::MAX)
    }

    /// Minimum position over a vertex set (`usize::MAX` for none).
    pub fn index_of_set(&self, vs: impl IntoIterator<Item = usize>) -> usize {
        vs.into_iter().map(|v| self.index(v)).min().unwrap_or(usize::MAX)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.comps.iter().map(|c| c.comp.edge_count()).collect()
    }

    pub fn aux_parent(&self, v: usize) -> Option<(usize, usize)> {
        self.aux_parent[v]
    }

    /// `u` is an ancestor of `v` in the auxiliary tree (reflexive).
    pub fn is_aux_ancestor(&self, u: usize, v: usize) -> bool {
        let mut cur = v;
        loop {
            if cur == u {
                return true;
            }
            match self.aux_parent[cur] {
                Some((p, _)) => cur = p,
                None => return false,
            }
        }
    }

    /// Positions of components whose witnessing arc starts in position `pos`.
    pub fn children_of(&self, pos: usize) -> impl Iterator<Item = usize> + '_ {
        (1..self.comps.len()).filter(move |&j| self.comps[j].witness.map(|w| self.index(w.tail)) == Some(pos))
    }
}

/// Lexicographic comparison of two size sequences, padding the shorter
/// with zeros.
pub fn compare_sizes(a: &[usize], b: &[usize]) -> Ordering {
    let len = a.len().max(b.len());
    for i in 0..len {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Breadth-first legal order starting at the red component of the root.
pub fn build_legal_order(dec: &Decomposition) -> Result<LegalOrder, SolverError> {
    let rc = dec.red_components()?;
    let explo = build_exploration(dec)?;
    complete_order(dec, &rc, &explo, &[rc.comp_of[dec.root()]])
}

/// Extends a prefix of red components (ids into `rc`, the first holding the
/// root) to a legal order: the prefix keeps its positions, every later
/// component is appended breadth-first, and each witnessing arc is the
/// smallest edge id from the earliest ordered source component.
pub fn complete_order(
    dec: &Decomposition,
    rc: &RedComponents,
    explo: &ExplorationSubgraph,
    prefix: &[usize],
) -> Result<LegalOrder, SolverError> {
    let n = dec.vertex_count();
    let mut slot_of_comp = vec![None; rc.comps.len()];
    let mut comps: Vec<OrderedComponent> = Vec::new();
    if prefix.first().copied() != Some(rc.comp_of[dec.root()]) {
        return Err(SolverError::Internal("order must start at the root component".into()));
    }
    // arcs leaving each component, sorted by edge id
    let mut out_arcs: Vec<Vec<BlueArc>> = vec![Vec::new(); rc.comps.len()];
    for v in 0..n {
        for a in dec.out_arcs(v) {
            if rc.comp_of[a.head] != rc.comp_of[v] {
                out_arcs[rc.comp_of[v]].push(a);
            }
        }
    }
    for arcs in &mut out_arcs {
        arcs.sort_by_key(|a| a.edge);
    }
    for (pos, &c) in prefix.iter().enumerate() {
        if slot_of_comp[c].is_some() {
            return Err(SolverError::Internal("repeated prefix component".into()));
        }
        let witness = if pos == 0 {
            None
        } else {
            let found = comps.iter().find_map(|oc| {
                out_arcs[rc.comp_of[oc.comp.min_vertex()]].iter().find(|a| rc.comp_of[a.head] == c).copied()
            });
            match found {
                Some(a) => Some(a),
                None => return Err(SolverError::Internal(format!("prefix component {pos} is unreachable"))),
            }
        };
        slot_of_comp[c] = Some(pos);
        comps.push(OrderedComponent { comp: rc.comps[c].clone(), witness });
    }
    let mut next = 0;
    while next < comps.len() {
        let src = rc.comp_of[comps[next].comp.min_vertex()];
        next += 1;
        for a in &out_arcs[src] {
            let c = rc.comp_of[a.head];
            if slot_of_comp[c].is_none() {
                slot_of_comp[c] = Some(comps.len());
                comps.push(OrderedComponent { comp: rc.comps[c].clone(), witness: Some(*a) });
            }
        }
    }
    let mut position = vec![None; n];
    for (pos, oc) in comps.iter().enumerate() {
        for &v in &oc.comp.vertices {
            position[v] = Some(pos);
        }
    }
    for &v in &explo.vertices {
        if position[v].is_none() {
            return Err(SolverError::Internal(format!("vertex {v} of the exploration is unordered")));
        }
    }
    if let Some(v) = (0..n).find(|&v| position[v].is_some() && !explo.contains[v]) {
        return Err(SolverError::Internal(format!("ordered vertex {v} outside the exploration")));
    }
    let aux_parent = aux_tree(dec, &comps, n);
    Ok(LegalOrder { comps, position, aux_parent })
}

/// A legal order for `dec` whose first `len` components coincide with those
/// of `reference`, optionally followed by the component of `extra`.
pub fn order_with_prefix(
    dec: &Decomposition,
    reference: &LegalOrder,
    len: usize,
    extra: Option<usize>,
) -> Result<LegalOrder, SolverError> {
    let rc = dec.red_components()?;
    let explo = build_exploration(dec)?;
    let mut prefix = Vec::with_capacity(len + 1);
    for oc in &reference.comps[..len.min(reference.len())] {
        let c = rc.comp_of[oc.comp.min_vertex()];
        if rc.comps[c] != oc.comp {
            return Err(SolverError::Internal("prefix component changed".into()));
        }
        prefix.push(c);
    }
    if let Some(v) = extra {
        prefix.push(rc.comp_of[v]);
    }
    complete_order(dec, &rc, &explo, &prefix)
}

fn aux_tree(dec: &Decomposition, comps: &[OrderedComponent], n: usize) -> Vec<Option<(usize, usize)>> {
    let g = dec.graph();
    let inc = g.incidence();
    let mut aux = vec![None; n];
    let mut done = vec![false; n];
    for oc in comps {
        let entry = match oc.witness {
            Some(w) => {
                aux[w.head] = Some((w.tail, w.edge));
                w.head
            }
            None => dec.root(),
        };
        done[entry] = true;
        let mut queue = VecDeque::from([entry]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &inc[v] {
                if dec.is_red(e) && !done[w] {
                    done[w] = true;
                    aux[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
    }
    aux
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::MultiGraph;

    #[test]
    fn single_component() {
        let g = Arc::new(MultiGraph::new(2, vec![(0, 1), (0, 1)]).unwrap());
        let dec = Decomposition::from_trees(g, 0, &[vec![0]], &[1]).unwrap();
        let order = build_legal_order(&dec).unwrap();
        assert_eq!(order.len(), 1);
        assert!(order.comps[0].witness.is_none());
    }

    #[test]
    fn witness_and_aux_tree() {
        // red 0-1 holds the root; 1 -> 2 leaves it; 3 hangs below 1
        let g = Arc::new(MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 0), (3, 1)]).unwrap());
        let dec = Decomposition::from_trees(g, 0, &[vec![1, 2, 3]], &[0]).unwrap();
        let order = build_legal_order(&dec).unwrap();
        assert_eq!(order.sizes(), vec![1, 0]);
        let w = order.comps[1].witness.unwrap();
        assert_eq!((w.tail, w.head, w.edge), (1, 2, 1));
        assert_eq!(order.aux_parent(2), Some((1, 1)));
        assert_eq!(order.aux_parent(1), Some((0, 0)));
        assert!(order.is_aux_ancestor(0, 2));
        assert!(!order.is_aux_ancestor(2, 1));
        assert_eq!(order.position(3), None);
        assert_eq!(order.children_of(0).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn compare_padding() {
        assert_eq!(compare_sizes(&[3, 1], &[3, 1, 0]), Ordering::Equal);
        assert_eq!(compare_sizes(&[3, 1], &[3, 1, 2]), Ordering::Less);
        assert_eq!(compare_sizes(&[3, 2], &[3, 1, 9]), Ordering::Greater);
    }
}
