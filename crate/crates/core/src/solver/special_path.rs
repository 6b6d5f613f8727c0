//! Special paths: blue directed paths ending in an arc between two red
//! components, started as early as possible in the legal order.

use std::collections::{BTreeSet, VecDeque};

use crate::decomposition::{BlueArc, Color, Decomposition};
use crate::graph::is_forest;
use crate::packing::ForestUnion;

use super::exploration::build_exploration;
use super::order::{complete_order, LegalOrder};
use super::SolverError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialPath {
    /// `[v_0, ..., v_l]`
    pub vertices: Vec<usize>,
    /// `arcs[j]` goes from `vertices[j]` to `vertices[j + 1]`.
    pub arcs: Vec<BlueArc>,
    /// `v_{-1}`, the auxiliary-tree parent of `v_0`
    pub pre_vertex: usize,
    /// the red edge `v_{-1} v_0`
    pub pre_edge: usize,
}

impl SpecialPath {
    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn terminal(&self) -> BlueArc {
        *self.arcs.last().expect("special paths are nonempty")
    }
}

/// The minimal special path for `terminal`, if any: earliest start, then a
/// start with no other candidate above it in the auxiliary tree, then the
/// smallest vertex id. The arcs form a shortest path, ties by edge id.
pub fn find_minimal_special_path(
    dec: &Decomposition,
    order: &LegalOrder,
    terminal: BlueArc,
) -> Result<Option<SpecialPath>, SolverError> {
    let (x, y) = (terminal.tail, terminal.head);
    let (Some(px), Some(py)) = (order.position(x), order.position(y)) else {
        return Err(SolverError::Internal("terminal arc leaves the exploration".into()));
    };
    if px == py {
        return Err(SolverError::Internal("terminal arc inside one red component".into()));
    }
    let n = dec.vertex_count();
    // dist[v]: length of a shortest blue path v -> x avoiding y
    let mut into: Vec<Vec<BlueArc>> = vec![Vec::new(); n];
    for v in 0..n {
        if v == y || order.position(v).is_none() {
            continue;
        }
        for a in dec.out_arcs(v) {
            if a.head != y && order.position(a.head).is_some() {
                into[a.head].push(a);
            }
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[x] = 0;
    let mut queue = VecDeque::from([x]);
    while let Some(w) = queue.pop_front() {
        for a in &into[w] {
            if dist[a.tail] == usize::MAX {
                dist[a.tail] = dist[w] + 1;
                queue.push_back(a.tail);
            }
        }
    }
    let candidates: Vec<usize> = (0..n)
        .filter(|&v| dist[v] != usize::MAX && order.index(v) < py)
        .filter(|&v| order.index(v) != px || order.is_aux_ancestor(v, x))
        .collect();
    let Some(best_pos) = candidates.iter().map(|&v| order.index(v)).min() else {
        return Ok(None);
    };
    let at_best: Vec<usize> = candidates.into_iter().filter(|&v| order.index(v) == best_pos).collect();
    let v0 = at_best
        .iter()
        .copied()
        .filter(|&v| !at_best.iter().any(|&u| u != v && order.is_aux_ancestor(u, v)))
        .min()
        .expect("the auxiliary tree is acyclic");
    let Some((pre_vertex, pre_edge)) = order.aux_parent(v0) else {
        return Err(SolverError::Internal(format!("special path start {v0} has no auxiliary parent")));
    };
    if !dec.is_red(pre_edge) {
        return Err(SolverError::Internal(format!("auxiliary parent edge {pre_edge} of {v0} is blue")));
    }
    let mut vertices = vec![v0];
    let mut arcs = Vec::new();
    let mut cur = v0;
    while cur != x {
        let step = dec
            .out_arcs(cur)
            .filter(|a| a.head != y && dist[a.head] != usize::MAX && dist[a.head] + 1 == dist[cur])
            .min_by_key(|a| a.edge)
            .expect("distance labels admit a descent");
        arcs.push(step);
        vertices.push(step.head);
        cur = step.head;
    }
    arcs.push(terminal);
    vertices.push(y);
    Ok(Some(SpecialPath { vertices, arcs, pre_vertex, pre_edge }))
}

/// Augments along `path`: the terminal edge turns red, `v_{-1} v_0` turns
/// blue, and the blue trees are repaired so that arcs with tails earlier
/// than `v_0` in `order` are untouched. Returns the new decomposition and,
/// when `v_0` lies outside the first component, a legal order that keeps the
/// prefix before `v_0` and shrinks the component of `v_{-1}`.
pub fn apply_special_path(
    dec: &Decomposition,
    order: &LegalOrder,
    path: &SpecialPath,
) -> Result<(Decomposition, Option<LegalOrder>), SolverError> {
    let reversed = reverse_along(dec, path);
    let next = match reversed {
        Some(next) if check_items(dec, order, path, &next).is_ok() => next,
        _ => {
            let packed = repack(dec, order, path)?;
            if check_items(dec, order, path, &packed).is_ok() {
                packed
            } else {
                swap_search(dec, order, path, &packed).unwrap_or(packed)
            }
        }
    };
    check_items(dec, order, path, &next).map_err(SolverError::Internal)?;
    let new_order = successor_order(order, path, &next)?;
    Ok((next, new_order))
}

/// Shifts every path vertex's parent one step back along the path.
fn reverse_along(dec: &Decomposition, path: &SpecialPath) -> Option<Decomposition> {
    let mut next = dec.clone();
    let v = &path.vertices;
    let arcs = &path.arcs;
    let first = arcs[0];
    next.set_parent_raw(first.tree, v[0], Some((path.pre_vertex, path.pre_edge)));
    next.set_color_raw(path.pre_edge, Color::Blue(first.tree));
    for j in 1..arcs.len() {
        let b = arcs[j].tree;
        next.set_parent_raw(b, v[j], Some((v[j - 1], arcs[j - 1].edge)));
        next.set_color_raw(arcs[j - 1].edge, Color::Blue(b));
    }
    next.set_color_raw(path.terminal().edge, Color::Red);
    next.check_structure().ok().map(|_| next)
}

/// Re-packs the blue edges minus the terminal edge plus the pre edge into
/// `k` spanning trees, keeping every early arc in its tree.
fn repack(dec: &Decomposition, order: &LegalOrder, path: &SpecialPath) -> Result<Decomposition, SolverError> {
    let g = dec.graph_arc().clone();
    let i0 = order.index(path.start());
    let term = path.terminal().edge;
    let mut frozen = vec![false; g.edge_count()];
    for v in 0..dec.vertex_count() {
        if order.index(v) < i0 {
            for a in dec.out_arcs(v) {
                frozen[a.edge] = true;
            }
        }
    }
    let trees: Vec<Vec<usize>> =
        (0..dec.k()).map(|b| dec.tree_edges(b).into_iter().filter(|&e| e != term).collect()).collect();
    let mut fu = ForestUnion::from_forests(&g, dec.k(), &trees);
    if !fu.try_insert_with(path.pre_edge, &frozen) {
        return Err(SolverError::Internal("special path repair infeasible".into()));
    }
    let red: Vec<usize> = dec.red_edges().filter(|&e| e != path.pre_edge).chain([term]).collect();
    let forests = fu.forests();
    drop(fu);
    Decomposition::from_trees(g, dec.root(), &forests, &red).map_err(SolverError::from)
}

/// Swaps one non-early edge between two trees of `packed` until the pre edge
/// hangs `v0` below `v-1`.
fn swap_search(
    dec: &Decomposition,
    order: &LegalOrder,
    path: &SpecialPath,
    packed: &Decomposition,
) -> Option<Decomposition> {
    let g = packed.graph_arc().clone();
    let n = packed.vertex_count();
    let i0 = order.index(path.start());
    let early = |e: usize| {
        let (u, v) = g.endpoints(e);
        (0..dec.k())
            .any(|b| [(u, v), (v, u)].iter().any(|&(x, y)| order.index(x) < i0 && dec.parent(b, x) == Some((y, e))))
    };
    let trees: Vec<Vec<usize>> = (0..packed.k()).map(|b| packed.tree_edges(b)).collect();
    let red: Vec<usize> = packed.red_edges().collect();
    let spanning = |edges: &[usize]| edges.len() + 1 == n && is_forest(n, edges.iter().map(|&e| g.endpoints(e)));
    for a in 0..trees.len() {
        for c in a + 1..trees.len() {
            for (fi, &f) in trees[a].iter().enumerate() {
                if early(f) {
                    continue;
                }
                for (hi, &h) in trees[c].iter().enumerate() {
                    if early(h) {
                        continue;
                    }
                    let mut ta = trees[a].clone();
                    ta[fi] = h;
                    let mut tc = trees[c].clone();
                    tc[hi] = f;
                    if !spanning(&ta) || !spanning(&tc) {
                        continue;
                    }
                    let mut forests = trees.clone();
                    forests[a] = ta;
                    forests[c] = tc;
                    let Ok(next) = Decomposition::from_trees(g.clone(), packed.root(), &forests, &red) else {
                        continue;
                    };
                    if check_items(dec, order, path, &next).is_ok() {
                        return Some(next);
                    }
                }
            }
        }
    }
    None
}

/// Checks the five guarantees of a special-path augmentation.
pub fn check_items(
    old: &Decomposition,
    order: &LegalOrder,
    path: &SpecialPath,
    new: &Decomposition,
) -> Result<(), String> {
    new.check_structure().map_err(|e| format!("structure: {e}"))?;
    let term = path.terminal().edge;
    let mut red: BTreeSet<usize> = old.red_edges().collect();
    red.insert(term);
    red.remove(&path.pre_edge);
    if red != new.red_edges().collect::<BTreeSet<_>>() {
        return Err("item 1: red edge set".into());
    }
    let v0 = path.start();
    if !(0..new.k()).any(|b| new.parent(b, v0) == Some((path.pre_vertex, path.pre_edge))) {
        return Err("item 2: (v0, v-1) is not a blue arc".into());
    }
    let i0 = order.index(v0);
    for b in 0..old.k() {
        for v in 0..old.vertex_count() {
            if order.index(v) < i0 && old.parent(b, v) != new.parent(b, v) {
                return Err(format!("item 3: early arc of {v} in tree {b} changed"));
            }
        }
    }
    let blue = |d: &Decomposition| -> BTreeSet<usize> { (0..d.colors().len()).filter(|&e| !d.is_red(e)).collect() };
    let mut expect = blue(old);
    expect.remove(&term);
    expect.insert(path.pre_edge);
    if expect != blue(new) {
        return Err("item 4: blue edge set".into());
    }
    if i0 > 0 {
        successor_order(order, path, new).map_err(|e| format!("item 5: {e}"))?;
    }
    Ok(())
}

/// The legal order promised after an augmentation starting at position
/// `i0 > 0`: the old prefix, then the component of `v_{-1}`.
fn successor_order(
    order: &LegalOrder,
    path: &SpecialPath,
    new: &Decomposition,
) -> Result<Option<LegalOrder>, SolverError> {
    let i0 = order.index(path.start());
    if i0 == 0 {
        return Ok(None);
    }
    let rc = new.red_components()?;
    let explo = build_exploration(new)?;
    let mut prefix = Vec::with_capacity(i0 + 1);
    for oc in &order.comps[..i0] {
        let c = rc.comp_of[oc.comp.min_vertex()];
        if rc.comps[c] != oc.comp {
            return Err(SolverError::Internal("prefix component changed".into()));
        }
        prefix.push(c);
    }
    let c = rc.comp_of[path.pre_vertex];
    if rc.comps[c].edge_count() >= order.comps[i0].comp.edge_count() {
        return Err(SolverError::Internal("component of v-1 did not shrink".into()));
    }
    prefix.push(c);
    complete_order(new, &rc, &explo, &prefix).map(Some)
}
