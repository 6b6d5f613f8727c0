//! Shared helpers: an independent structure check, instance corpora and a
//! generator of solver states with large components and small children.

#![allow(dead_code)]

use std::sync::Arc;

use ndt_core::solver::order::{build_legal_order, LegalOrder};
use ndt_core::solver::root::choose_root;
use ndt_core::{Color, Decomposition, Family, GenSpec, MultiGraph, Params};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Union-find kept separate from the library's own.
pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
        a != b
    }
}

/// `k` spanning trees oriented to the root, consistent colours, red forest.
pub fn structure_ok(dec: &Decomposition) -> Result<(), String> {
    let g = dec.graph();
    let n = g.vertex_count();
    let k = dec.k();
    let r = dec.root();
    for b in 0..k {
        let mut uf = Dsu::new(n);
        let mut count = 0;
        for (e, c) in dec.colors().iter().enumerate() {
            if *c == Color::Blue(b) {
                count += 1;
                let (u, v) = g.endpoints(e);
                if !uf.union(u, v) {
                    return Err(format!("tree {b} has a cycle through {e}"));
                }
            }
        }
        if count + 1 != n {
            return Err(format!("tree {b} has {count} edges on {n} vertices"));
        }
        for v in 0..n {
            match dec.parent(b, v) {
                None if v == r => {}
                None => return Err(format!("tree {b}: {v} has no parent")),
                Some(_) if v == r => return Err(format!("tree {b}: root has a parent")),
                Some((p, e)) => {
                    let (x, y) = g.endpoints(e);
                    if dec.color(e) != Color::Blue(b) || !((x, y) == (v, p) || (x, y) == (p, v)) {
                        return Err(format!("tree {b}: bad parent edge {e} at {v}"));
                    }
                }
            }
            let mut cur = v;
            for _ in 0..n {
                match dec.parent(b, cur) {
                    Some((p, _)) => cur = p,
                    None => break,
                }
            }
            if cur != r {
                return Err(format!("tree {b}: {v} does not reach the root"));
            }
        }
    }
    let mut uf = Dsu::new(n);
    for e in 0..g.edge_count() {
        if dec.color(e) == Color::Red {
            let (u, v) = g.endpoints(e);
            if !uf.union(u, v) {
                return Err(format!("red cycle through {e}"));
            }
        }
    }
    Ok(())
}

/// Whether `classes` are forests partitioning `E(g)` with every component of
/// class `special` at most `bound` edges.
pub fn partition_ok(g: &MultiGraph, classes: &[Vec<usize>], special: usize, bound: usize) -> Result<(), String> {
    let n = g.vertex_count();
    let mut seen = vec![0; g.edge_count()];
    for (c, class) in classes.iter().enumerate() {
        let mut uf = Dsu::new(n);
        for &e in class {
            seen[e] += 1;
            let (u, v) = g.endpoints(e);
            if !uf.union(u, v) {
                return Err(format!("class {c} has a cycle"));
            }
        }
    }
    if let Some(e) = seen.iter().position(|&s| s != 1) {
        return Err(format!("edge {e} covered {} times", seen[e]));
    }
    let mut uf = Dsu::new(n);
    for &e in &classes[special] {
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    let mut size = vec![0; n];
    for &e in &classes[special] {
        size[uf.find(g.endpoints(e).0)] += 1;
    }
    match size.iter().max() {
        Some(&s) if s > bound => Err(format!("special component with {s} > {bound} edges")),
        _ => Ok(()),
    }
}

/// `e(H) / (v(H) - 1)` maximised over all vertex subsets of size at least 2.
pub fn subset_gamma(g: &MultiGraph) -> (i64, i64) {
    let n = g.vertex_count();
    let mut best = (0i64, 1i64);
    for mask in 1u32..(1 << n) {
        let v = mask.count_ones() as i64;
        if v < 2 {
            continue;
        }
        let e = g.edges().iter().filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count() as i64;
        if e * best.1 > best.0 * (v - 1) {
            best = (e, v - 1);
        }
    }
    best
}

/// A random graph of roughly `fill` times the threshold density.
pub fn random_instance(rng: &mut ChaCha8Rng, params: &Params, n: usize, fill: f64, seed: u64) -> MultiGraph {
    let t = params.threshold();
    let gamma = *t.numer() as f64 / *t.denom() as f64;
    let m = ((n - 1) as f64 * gamma * fill).round().max(1.0) as usize;
    let family = if rng.gen_bool(0.5) { Family::RandomMultigraph } else { Family::ForestPlusNoise };
    ndt_core::generate(&GenSpec { family, n, m, k: params.k, d: params.d, seed }).unwrap()
}

fn random_tree_edges(rng: &mut ChaCha8Rng, vs: &[usize]) -> Vec<(usize, usize)> {
    let mut vs = vs.to_vec();
    vs.shuffle(rng);
    (1..vs.len()).map(|i| (vs[rng.gen_range(0..i)], vs[i])).collect()
}

/// A decomposition with an oversize root component, one or two non-small
/// components and a handful of small components, wired by random spanning
/// trees that favour arcs between them. The root is the balanced vertex of
/// the root component.
pub fn random_state(rng: &mut ChaCha8Rng, params: &Params) -> (Decomposition, LegalOrder) {
    loop {
        if let Some(s) = try_random_state(rng, params) {
            return s;
        }
    }
}

fn try_random_state(rng: &mut ChaCha8Rng, params: &Params) -> Option<(Decomposition, LegalOrder)> {
    let (ell, dp) = (params.ell, params.d_prime);
    let s0 = rng.gen_range(dp + 1..=dp + 3);
    let mut sizes = vec![s0];
    for _ in 0..rng.gen_range(1..=2) {
        sizes.push(rng.gen_range(ell + 1..=s0));
    }
    for _ in 0..rng.gen_range(1..=6) {
        sizes.push(rng.gen_range(0..=ell));
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for &s in &sizes {
        comps.push((next..next + s + 1).collect());
        next += s + 1;
    }
    let n = next;
    let mut edges = Vec::new();
    let mut red = Vec::new();
    for c in &comps {
        for e in random_tree_edges(rng, c) {
            red.push(edges.len());
            edges.push(e);
        }
    }
    let inside_first = rng.gen_bool(0.5);
    let mut trees = vec![Vec::new(); params.k];
    for tree in trees.iter_mut() {
        let mut uf = Dsu::new(n);
        let mut add = |e: (usize, usize), edges: &mut Vec<(usize, usize)>, tree: &mut Vec<usize>| {
            if uf.union(e.0, e.1) {
                tree.push(edges.len());
                edges.push(e);
            }
        };
        // a few inter-component edges, then trees inside components, then
        // whatever joins the rest
        let pick = |rng: &mut ChaCha8Rng, c: usize| comps[c][rng.gen_range(0..comps[c].len())];
        let cross = if inside_first { comps.len() - 1..=2 * comps.len() } else { comps.len()..=3 * comps.len() };
        for _ in 0..rng.gen_range(cross) {
            let a = rng.gen_range(0..comps.len());
            let b = rng.gen_range(0..comps.len());
            if a != b {
                let e = (pick(rng, a), pick(rng, b));
                add(e, &mut edges, tree);
            }
        }
        if inside_first {
            for c in &comps {
                for e in random_tree_edges(rng, c) {
                    add(e, &mut edges, tree);
                }
            }
        }
        let all: Vec<usize> = (0..n).collect();
        for e in random_tree_edges(rng, &all) {
            add(e, &mut edges, tree);
        }
    }
    let graph = Arc::new(MultiGraph::new(n, edges).ok()?);
    let dec = Decomposition::from_trees(graph, 0, &trees, &red).ok()?;
    let rc = dec.red_components().ok()?;
    let r = choose_root(&dec, rc.of(0), params).ok()?;
    let dec = dec.reroot(r).ok()?;
    let order = build_legal_order(&dec).ok()?;
    Some((dec, order))
}

/// Whether neither a merge along a witnessing arc nor a root-child split applies.
pub fn no_cheap_move(order: &LegalOrder, params: &Params) -> bool {
    (1..order.len()).all(|j| {
        let w = order.comps[j].witness.unwrap();
        let p = order.index(w.tail);
        let (ep, ej) = (order.comps[p].comp.edge_count(), order.comps[j].comp.edge_count());
        ep + ej >= params.d_prime && !(p == 0 && ej <= params.ell)
    })
}
