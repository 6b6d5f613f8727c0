//! The child-splitting drive on a non-small component `K`: valid
//! intermediate states, their nine conditions, and the exchange step that
//! shrinks the large part `K'` of `K`.

use std::fmt;

use crate::decomposition::{BlueArc, Component, Decomposition};
use crate::graph::UnionFind;
use crate::params::Params;

use super::moves::red_path;
use super::order::{order_with_prefix, LegalOrder};
use super::special_path::{apply_special_path, find_minimal_special_path};
use super::SolverError;

/// A small child of `K` generated by tree `b`: `(x, x')` is its witnessing arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    pub x: usize,
    pub x_parent: usize,
    pub edge: usize,
    pub child: usize,
}

/// Everything fixed by the starting decomposition and order.
#[derive(Debug, Clone)]
pub struct DriveContext<'a> {
    pub params: Params,
    pub star: &'a Decomposition,
    pub order: &'a LegalOrder,
    pub k_pos: usize,
    pub tree: usize,
    pub ell_prime: usize,
    pub gens: Vec<Generator>,
    gen_of: Vec<Option<usize>>,
    in_k: Vec<bool>,
    /// minimum position of a generating subtree in the starting state
    pub i_min: usize,
    pub witness: BlueArc,
    /// `max(d', e(K))`
    pub big: usize,
    untouched: Vec<Component>,
}

impl<'a> DriveContext<'a> {
    pub fn new(
        star: &'a Decomposition,
        order: &'a LegalOrder,
        k_pos: usize,
        tree: usize,
        ell_prime: usize,
        params: Params,
    ) -> Result<Self, SolverError> {
        let k_comp = &order
            .comps
            .get(k_pos)
            .ok_or_else(|| SolverError::Precondition(format!("no component at position {k_pos}")))?
            .comp;
        let witness = order.comps[k_pos]
            .witness
            .ok_or_else(|| SolverError::Precondition("K must not be the root component".into()))?;
        if k_comp.edge_count() <= params.ell {
            return Err(SolverError::Precondition("K is small".into()));
        }
        if ell_prime > params.ell {
            return Err(SolverError::Precondition("ell' exceeds ell".into()));
        }
        let n = star.vertex_count();
        let mut gens = Vec::new();
        let mut gen_of = vec![None; n];
        for j in order.children_of(k_pos) {
            let oc = &order.comps[j];
            let w = oc.witness.expect("children have witnessing arcs");
            if w.tree == tree && oc.comp.edge_count() <= ell_prime {
                gen_of[w.tail] = Some(gens.len());
                gens.push(Generator { x: w.tail, x_parent: w.head, edge: w.edge, child: j });
            }
        }
        if gens.is_empty() {
            return Err(SolverError::Precondition("K has no small children with at most ell' edges".into()));
        }
        let mut in_k = vec![false; n];
        for &v in &k_comp.vertices {
            in_k[v] = true;
        }
        let rc = star.red_components()?;
        let touched: Vec<usize> = std::iter::once(k_pos).chain(gens.iter().map(|g| g.child)).collect();
        let untouched =
            rc.comps.iter().filter(|c| !touched.iter().any(|&j| order.comps[j].comp == **c)).cloned().collect();
        let mut ctx = Self {
            params,
            star,
            order,
            k_pos,
            tree,
            ell_prime,
            gens,
            gen_of,
            in_k,
            i_min: 0,
            witness,
            big: params.d_prime.max(k_comp.edge_count()),
            untouched,
        };
        let all: Vec<usize> = ctx.gens.iter().map(|g| g.x).collect();
        ctx.i_min = ctx.min_subtree_index(star, &all);
        Ok(ctx)
    }

    pub fn k_comp(&self) -> &Component {
        &self.order.comps[self.k_pos].comp
    }

    pub fn e_k(&self) -> usize {
        self.k_comp().edge_count()
    }

    pub fn w_k(&self) -> usize {
        self.witness.head
    }

    pub fn alpha(&self) -> usize {
        self.params.d_prime.saturating_sub(self.e_k())
    }

    fn generator(&self, v: usize) -> Option<Generator> {
        self.gen_of[v].map(|i| self.gens[i])
    }

    /// Whether the generating arc of `x` is a blue arc of `dec`, in its
    /// original orientation.
    fn gen_arc_intact(&self, dec: &Decomposition, x: usize) -> bool {
        self.generator(x).is_some_and(|g| dec.parent(self.tree, x) == Some((g.x_parent, g.edge)))
    }

    /// `owner[v]`: the first vertex of `set` on the tree path from `v` up.
    fn owners(&self, dec: &Decomposition, set: &[usize]) -> Vec<Option<usize>> {
        let mut in_set = vec![false; dec.vertex_count()];
        for &v in set {
            in_set[v] = true;
        }
        (0..dec.vertex_count()).map(|v| dec.path_to_root(self.tree, v).into_iter().find(|&w| in_set[w])).collect()
    }

    /// Position in the starting order of the subtree hanging from `u`
    /// after cutting off the other members of `set`.
    fn subtree_index(&self, dec: &Decomposition, set: &[usize], u: usize) -> usize {
        let owner = self.owners(dec, set);
        (0..dec.vertex_count())
            .filter(|&v| owner[v] == Some(u))
            .map(|v| self.order.index(v))
            .min()
            .unwrap_or(usize::MAX)
    }

    fn min_subtree_index(&self, dec: &Decomposition, set: &[usize]) -> usize {
        let owner = self.owners(dec, set);
        (0..dec.vertex_count()).filter(|&v| owner[v].is_some()).map(|v| self.order.index(v)).min().unwrap_or(usize::MAX)
    }

    fn subtree_contains(&self, dec: &Decomposition, set: &[usize], u: usize, v: usize) -> bool {
        self.owners(dec, set)[v] == Some(u)
    }

    /// Whether the drive threshold `|children| >= ell' - alpha + 2` holds.
    pub fn meets_threshold(&self) -> bool {
        self.gens.len() + self.alpha() >= self.ell_prime + 2
    }
}

#[derive(Debug, Clone)]
pub struct ValidState {
    pub dec: Decomposition,
    pub anchor: usize,
}

/// A component of the red forest restricted to `V(K)`.
#[derive(Debug, Clone)]
pub struct Part {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// generating edges inside the full red component containing this part
    pub bar_gens: usize,
}

/// Derived sets of a state.
#[derive(Debug, Clone)]
pub struct StateView {
    pub parts: Vec<Part>,
    pub part_of: Vec<Option<usize>>,
    pub k_prime: Option<usize>,
    pub s: Vec<usize>,
    pub specials: Vec<usize>,
    pub v_star: Option<usize>,
    pub s_bar: Vec<usize>,
    pub s_ring: Vec<usize>,
    pub extending: Option<usize>,
    pub u: usize,
}

impl StateView {
    pub fn k_prime_edges(&self) -> usize {
        self.k_prime.map_or(0, |p| self.parts[p].edges.len())
    }

    pub fn k_prime_vertices(&self) -> &[usize] {
        self.k_prime.map_or(&[], |p| &self.parts[p].vertices)
    }

    fn in_k_prime(&self, v: usize) -> bool {
        self.k_prime.is_some() && self.part_of[v] == self.k_prime
    }
}

pub fn view(ctx: &DriveContext<'_>, state: &ValidState) -> Result<StateView, SolverError> {
    let dec = &state.dec;
    let g = dec.graph();
    let n = dec.vertex_count();
    let rc = dec.red_components()?;
    let mut uf = UnionFind::new(n);
    let inner: Vec<usize> = dec
        .red_edges()
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            ctx.in_k[u] && ctx.in_k[v]
        })
        .collect();
    for &e in &inner {
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    let mut slot = vec![usize::MAX; n];
    let mut part_of = vec![None; n];
    let mut parts: Vec<Part> = Vec::new();
    for &v in &ctx.k_comp().vertices {
        let r = uf.find(v);
        if slot[r] == usize::MAX {
            slot[r] = parts.len();
            parts.push(Part { vertices: Vec::new(), edges: Vec::new(), bar_gens: 0 });
        }
        part_of[v] = Some(slot[r]);
        parts[slot[r]].vertices.push(v);
    }
    for &e in &inner {
        let p = part_of[g.endpoints(e).0].expect("inner edge");
        parts[p].edges.push(e);
    }
    for p in &mut parts {
        let bar = rc.comp_of[p.vertices[0]];
        p.bar_gens = ctx.gens.iter().filter(|gn| dec.is_red(gn.edge) && rc.comp_of[gn.x] == bar).count();
    }
    let threshold = ctx.big.saturating_sub(ctx.ell_prime);
    let big_parts: Vec<usize> = (0..parts.len()).filter(|&p| parts[p].edges.len() >= threshold).collect();
    if big_parts.len() > 1 {
        return Err(SolverError::Internal("two parts of K reach the K' threshold".into()));
    }
    let k_prime = big_parts.first().copied();
    let in_kp = |v: usize| k_prime.is_some() && part_of[v] == k_prime;
    let s: Vec<usize> = ctx.gens.iter().map(|gn| gn.x).filter(|&x| in_kp(x) && ctx.gen_arc_intact(dec, x)).collect();
    let specials: Vec<usize> = ctx
        .gens
        .iter()
        .map(|gn| gn.x)
        .filter(|&v| ctx.gen_arc_intact(dec, v))
        .filter(|&v| {
            let mut set = s.clone();
            if !set.contains(&v) {
                set.push(v);
            }
            if ctx.i_min < ctx.k_pos {
                ctx.subtree_index(dec, &set, v) == ctx.i_min
            } else {
                ctx.subtree_contains(dec, &set, v, ctx.w_k())
            }
        })
        .collect();
    let anchor_special = specials.contains(&state.anchor);
    let v_star = anchor_special.then_some(state.anchor);
    let mut s_bar = s.clone();
    let mut s_ring = s.clone();
    if let Some(vs) = v_star {
        if !s_bar.contains(&vs) {
            s_bar.push(vs);
        }
        s_ring.retain(|&v| v != vs);
    }
    let extenders: Vec<usize> =
        ctx.gens.iter().filter(|gn| in_kp(gn.x) && dec.is_red(gn.edge)).map(|gn| gn.x).collect();
    let extending = extenders.first().copied();
    let u = extending.unwrap_or(state.anchor);
    Ok(StateView { parts, part_of, k_prime, s, specials, v_star, s_bar, s_ring, extending, u })
}

/// One failed condition of a valid intermediate state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionFailure {
    pub condition: &'static str,
    pub detail: String,
}

impl fmt::Display for ConditionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}: {}", self.condition, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub failures: Vec<ConditionFailure>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, condition: &str) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }

    fn push(&mut self, condition: &'static str, detail: impl Into<String>) {
        self.failures.push(ConditionFailure { condition, detail: detail.into() });
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.failures {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Evaluates conditions 1, 2a, 2b and 3 to 9 independently.
pub fn check_valid_state(ctx: &DriveContext<'_>, state: &ValidState) -> Result<ValidityReport, SolverError> {
    let dec = &state.dec;
    let mut report = ValidityReport::default();
    if let Err(e) = dec.check_structure() {
        report.push("structure", e.to_string());
        return Ok(report);
    }
    let rc = dec.red_components()?;
    let sv = view(ctx, state)?;

    // 1
    for c in &ctx.untouched {
        if rc.of(c.min_vertex()) != c {
            report.push("1", format!("component at {} changed", c.min_vertex()));
        }
    }
    for gn in &ctx.gens {
        if let Some(&e) = ctx.order.comps[gn.child].comp.edges.iter().find(|&&e| !dec.is_red(e)) {
            report.push("1", format!("child edge {e} is blue"));
        }
    }
    let k_edges = &ctx.k_comp().edges;
    let child_edges =
        |e: usize| ctx.gens.iter().any(|gn| ctx.order.comps[gn.child].comp.edges.binary_search(&e).is_ok());
    for e in dec.red_edges() {
        let in_untouched = ctx.untouched.iter().any(|c| c.edges.binary_search(&e).is_ok());
        let allowed = in_untouched
            || child_edges(e)
            || k_edges.binary_search(&e).is_ok()
            || ctx.gens.iter().any(|gn| gn.edge == e);
        if !allowed {
            report.push("1", format!("stray red edge {e}"));
        }
    }

    // 2a / 2b
    if ctx.i_min < ctx.k_pos {
        if let Err(e) = order_with_prefix(dec, ctx.order, ctx.i_min + 1, None) {
            report.push("2a", e.to_string());
        }
    } else {
        if let Err(e) = order_with_prefix(dec, ctx.order, ctx.k_pos, None) {
            report.push("2b", e.to_string());
        }
        let w = ctx.witness;
        if dec.parent(w.tree, w.tail) != Some((w.head, w.edge)) {
            report.push("2b", "witnessing arc of K lost");
        }
    }

    // 3
    let xs: Vec<usize> = ctx.gens.iter().map(|gn| gn.x).collect();
    let idx = ctx.min_subtree_index(dec, &xs);
    if idx < ctx.i_min {
        report.push("3", format!("generating subtree reaches position {idx} < {}", ctx.i_min));
    }

    // 4
    for (p, part) in sv.parts.iter().enumerate() {
        if part.bar_gens > 1 {
            report.push("4", format!("part {p} meets {} generating edges", part.bar_gens));
        }
    }

    // 5
    for gn in &ctx.gens {
        if sv.in_k_prime(gn.x) && dec.parent(ctx.tree, gn.x_parent) == Some((gn.x, gn.edge)) {
            report.push("5", format!("generating arc of {} reversed", gn.x));
        }
    }

    // 6a / 6b
    if !sv.specials.is_empty() {
        if sv.v_star.is_none() {
            report.push("6a", format!("anchor {} is not special", state.anchor));
        }
    } else if ctx.i_min != ctx.k_pos || state.anchor != ctx.w_k() {
        report.push("6b", format!("no special vertex but anchor {} is not w(K)", state.anchor));
    }

    // 7
    match sv.part_of[state.anchor] {
        Some(p) => {
            if sv.parts[p].bar_gens > 0 {
                report.push("7", "component of the anchor holds a generating edge");
            }
        }
        None => report.push("7", "anchor outside K"),
    }

    // 8
    if sv.k_prime.is_some() && !sv.in_k_prime(sv.u) {
        report.push("8", format!("u = {} lies outside K'", sv.u));
    }

    // 9
    if sv.extending == Some(sv.u) {
        let first = dec.path_to_root(ctx.tree, sv.u).into_iter().find(|v| sv.s_bar.contains(v));
        if let Some(w) = first.filter(|&w| Some(w) != sv.v_star) {
            report.push("9", format!("blue path from u meets {w} first"));
        }
    }
    Ok(report)
}

fn ensure_valid(ctx: &DriveContext<'_>, state: &ValidState, checked: bool) -> Result<(), SolverError> {
    if !checked {
        return Ok(());
    }
    let report = check_valid_state(ctx, state)?;
    if report.is_valid() {
        Ok(())
    } else {
        Err(SolverError::Internal(format!("invalid intermediate state: {}", report.to_string().trim_end())))
    }
}

/// The starting state `(T*, a*)`.
pub fn init_valid_state(ctx: &DriveContext<'_>) -> Result<ValidState, SolverError> {
    let xs: Vec<usize> = ctx.gens.iter().map(|gn| gn.x).collect();
    let anchor = if ctx.i_min < ctx.k_pos {
        *xs.iter().min_by_key(|&&x| (ctx.subtree_index(ctx.star, &xs, x), x)).expect("generators exist")
    } else {
        let probe = ValidState { dec: ctx.star.clone(), anchor: ctx.w_k() };
        let sv = view(ctx, &probe)?;
        sv.specials.iter().copied().min().unwrap_or(ctx.w_k())
    };
    Ok(ValidState { dec: ctx.star.clone(), anchor })
}

/// Which exchange an augmentation step performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepCase {
    /// `(y, y') <-> v v'`
    OneOne,
    /// `(v*, v*') <-> v' v`, anchor moves to `y`
    OneTwo,
    /// `(x, x') <-> v̄ v̄'`
    TwoOne,
    /// `(v*, v*') <-> v̄' v̄`, anchor moves to `x`
    TwoTwo,
}

impl StepCase {
    pub fn label(self) -> &'static str {
        match self {
            StepCase::OneOne => "1.1",
            StepCase::OneTwo => "1.2",
            StepCase::TwoOne => "2.1",
            StepCase::TwoTwo => "2.2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub case: StepCase,
    pub k_prime_before: usize,
    /// edges of `K'` afterwards, `None` once it is empty
    pub k_prime_after: Option<usize>,
}

/// One exchange that strictly shrinks `K'`. Requires `K'` and the
/// non-special part of `S` to be nonempty.
pub fn main_augment(
    ctx: &DriveContext<'_>,
    state: &ValidState,
    checked: bool,
) -> Result<(ValidState, StepRecord), SolverError> {
    let dec = &state.dec;
    let b = ctx.tree;
    let sv = view(ctx, state)?;
    let Some(kp) = sv.k_prime else {
        return Err(SolverError::Precondition("K' is empty".into()));
    };
    if sv.s_ring.is_empty() {
        return Err(SolverError::Precondition("no non-special generating vertex in K'".into()));
    }
    let v_star = sv.v_star;
    let r = dec.root();

    // tree Q on S̄ + r: parent = nearest proper blue ancestor in S̄ + r
    let q_parent = |v: usize| -> usize {
        let path = dec.path_to_root(b, v);
        path[1..].iter().copied().find(|w| sv.s_bar.contains(w) || *w == r).unwrap_or(r)
    };
    let leaves: Vec<usize> =
        sv.s_bar.iter().copied().filter(|&v| !sv.s_bar.iter().any(|&w| w != v && q_parent(w) == v)).collect();
    let x = match v_star {
        Some(vs) if leaves == [vs] => q_parent(vs),
        _ => *leaves
            .iter()
            .filter(|&&v| Some(v) != v_star)
            .min()
            .ok_or_else(|| SolverError::Internal("Q has no usable leaf".into()))?,
    };
    if x == sv.u || x == r || Some(x) == v_star || !sv.s_ring.contains(&x) {
        return Err(SolverError::Internal(format!("leaf choice {x} violates the step's assumptions")));
    }
    let part = &sv.parts[kp];
    let in_part = |v: usize| sv.part_of[v] == Some(kp);
    let (path, path_edges) = red_path(dec, sv.u, x, in_part, None)
        .ok_or_else(|| SolverError::Internal("no red path from u to x in K'".into()))?;
    let n_path = path.len();

    // components of K' minus the path edge before position i
    let side = |i: usize| -> (Vec<bool>, usize, usize) {
        // (mask of L_i, e(L_i), e(L'_i)); path indices are 0-based, edge i-1 joins i-1 and i
        let cut = path_edges[i - 1];
        let mut mask = vec![false; dec.vertex_count()];
        let reach = reach_within(dec, path[i], &in_part, cut);
        for &v in &reach {
            mask[v] = true;
        }
        let e_l = part.edges.iter().filter(|&&e| e != cut && mask[dec.graph().endpoints(e).0]).count();
        let e_lp = part.edges.len() - 1 - e_l;
        (mask, e_l, e_lp)
    };
    let stop = |w: usize| Some(w) == v_star || w == r;
    let mut chosen = None;
    for (i, &pi) in path.iter().enumerate().take(n_path).skip(1) {
        let (mask, _, e_lp) = side(i);
        let hit =
            dec.path_to_root(b, pi).into_iter().take_while(|&w| !stop(w)).any(|w| mask[w] && sv.s_ring.contains(&w));
        if hit {
            chosen = Some((i, mask, e_lp));
            break;
        }
    }
    let (i, mask_l, e_lp) = chosen.ok_or_else(|| SolverError::Internal("no index i on the red path".into()))?;
    let v = path[i];
    let v_prev = path[i - 1];
    let vv_edge = path_edges[i - 1];
    let mut next = dec.clone();
    let big_minus = ctx.big.saturating_sub(ctx.ell_prime);
    let (case, anchor) = if e_lp < big_minus {
        // case 1
        let y = dec
            .path_to_root(b, v)
            .into_iter()
            .find(|&w| mask_l[w] && sv.s_ring.contains(&w))
            .ok_or_else(|| SolverError::Internal("no y on the blue path from v".into()))?;
        if !dec.is_descendant(b, v_prev, y) {
            next.exchange(b, y, vv_edge)?;
            (StepCase::OneOne, state.anchor)
        } else {
            let vs = v_star.ok_or_else(|| SolverError::Internal("subcase 1.2 without a special anchor".into()))?;
            next.exchange(b, vs, vv_edge)?;
            (StepCase::OneTwo, y)
        }
    } else {
        // case 2
        let visits_vstar_then_x = |w: usize| -> bool {
            let p = dec.path_to_root(b, w);
            match (v_star.and_then(|vs| p.iter().position(|&z| z == vs)), p.iter().position(|&z| z == x)) {
                (Some(a), Some(c)) => a < c,
                _ => false,
            }
        };
        let j = (0..n_path)
            .rev()
            .find(|&j| !dec.is_descendant(b, path[j], x) || visits_vstar_then_x(path[j]))
            .ok_or_else(|| SolverError::Internal("no index j on the red path".into()))?;
        if j + 1 >= n_path {
            return Err(SolverError::Internal("index j at the end of the red path".into()));
        }
        let bar_v_prime = path[j];
        let bar_edge = path_edges[j];
        if !dec.is_descendant(b, bar_v_prime, x) {
            next.exchange(b, x, bar_edge)?;
            (StepCase::TwoOne, state.anchor)
        } else {
            let vs = v_star.ok_or_else(|| SolverError::Internal("subcase 2.2 without a special anchor".into()))?;
            next.exchange(b, vs, bar_edge)?;
            (StepCase::TwoTwo, x)
        }
    };
    let new_state = ValidState { dec: next, anchor };
    ensure_valid(ctx, &new_state, checked)?;
    let nv = view(ctx, &new_state)?;
    let before = sv.k_prime_edges();
    let after = nv.k_prime.map(|_| nv.k_prime_edges());
    let shrank = match nv.k_prime {
        None => true,
        Some(_) => nv.k_prime_edges() < before && nv.k_prime_vertices().iter().all(|&w| in_part(w)),
    };
    if !shrank {
        return Err(SolverError::Internal(format!("K' did not shrink in subcase {}", case.label())));
    }
    Ok((new_state, StepRecord { case, k_prime_before: before, k_prime_after: after }))
}

fn reach_within(dec: &Decomposition, from: usize, inside: &impl Fn(usize) -> bool, cut: usize) -> Vec<usize> {
    let inc = dec.graph().incidence();
    let mut seen = vec![false; dec.vertex_count()];
    seen[from] = true;
    let mut stack = vec![from];
    let mut out = vec![from];
    while let Some(v) = stack.pop() {
        for &(w, e) in &inc[v] {
            if e != cut && dec.is_red(e) && !seen[w] && inside(w) {
                seen[w] = true;
                stack.push(w);
                out.push(w);
            }
        }
    }
    out
}

/// Repeats [`main_augment`] while `K'` and the non-special part of `S` are
/// nonempty. Returns the final state and one record per step.
pub fn drive(ctx: &DriveContext<'_>, checked: bool) -> Result<(ValidState, Vec<StepRecord>), SolverError> {
    let mut state = init_valid_state(ctx)?;
    ensure_valid(ctx, &state, checked)?;
    let mut steps = Vec::new();
    loop {
        let sv = view(ctx, &state)?;
        if sv.k_prime.is_none() || sv.s_ring.is_empty() {
            return Ok((state, steps));
        }
        let (next, rec) = main_augment(ctx, &state, checked)?;
        steps.push(rec);
        state = next;
        if steps.len() > ctx.e_k() + 1 {
            return Err(SolverError::Internal("drive failed to terminate".into()));
        }
    }
}

#[derive(Debug, Clone)]
pub struct DriveOutcome {
    pub dec: Decomposition,
    /// legal order certifying a smaller potential when the residue is kept
    pub order: Option<LegalOrder>,
    pub steps: Vec<StepRecord>,
    pub finished_by_special_path: bool,
}

/// Runs the drive to an empty `K'` and finishes it: either the component of
/// `w(K)` shrank behind an unchanged prefix, or a minimal special path ending
/// at the special vertex's generating arc is augmented.
pub fn drive_and_finish(ctx: &DriveContext<'_>, checked: bool) -> Result<DriveOutcome, SolverError> {
    if !ctx.meets_threshold() {
        return Err(SolverError::Precondition(format!(
            "{} children below the threshold {}",
            ctx.gens.len(),
            (ctx.ell_prime + 2).saturating_sub(ctx.alpha())
        )));
    }
    let (state, steps) = drive(ctx, checked)?;
    let sv = view(ctx, &state)?;
    if let Some(kp) = sv.k_prime {
        return Err(SolverError::Internal(format!("drive stalled with |K'| = {}", sv.parts[kp].edges.len())));
    }
    let dec = state.dec;
    match sv.v_star {
        None => {
            if state.anchor != ctx.w_k() || ctx.i_min != ctx.k_pos {
                return Err(SolverError::Internal("non-special anchor is not w(K)".into()));
            }
            let order = order_with_prefix(&dec, ctx.order, ctx.k_pos, Some(ctx.w_k()))?;
            if order.comps[ctx.k_pos].comp.edge_count() >= ctx.e_k() {
                return Err(SolverError::Internal("component of w(K) did not shrink".into()));
            }
            Ok(DriveOutcome { dec, order: Some(order), steps, finished_by_special_path: false })
        }
        Some(vs) => {
            let (len, bound) = if ctx.i_min < ctx.k_pos {
                (ctx.i_min + 1, ctx.i_min)
            } else {
                (ctx.k_pos, ctx.i_min.checked_sub(1).ok_or_else(|| SolverError::Internal("I = 0".into()))?)
            };
            let sigma = order_with_prefix(&dec, ctx.order, len, None)?;
            let terminal =
                dec.arc(ctx.tree, vs).ok_or_else(|| SolverError::Internal("special vertex lost its arc".into()))?;
            let path = find_minimal_special_path(&dec, &sigma, terminal)?
                .ok_or_else(|| SolverError::Internal("no special path for the special vertex".into()))?;
            if sigma.index(path.start()) > bound {
                return Err(SolverError::Internal(format!(
                    "special path starts at position {} > {bound}",
                    sigma.index(path.start())
                )));
            }
            let (next, order) = apply_special_path(&dec, &sigma, &path)?;
            Ok(DriveOutcome { dec: next, order, steps, finished_by_special_path: true })
        }
    }
}
