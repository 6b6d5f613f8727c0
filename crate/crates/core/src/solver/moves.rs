use std::collections::VecDeque;

use crate::decomposition::Decomposition;
use crate::params::Params;

use super::order::LegalOrder;
use super::SolverError;

/// Red path from `from` to `to` as `(vertices, edges)`, restricted to
/// vertices accepted by `inside`.
pub(crate) fn red_path(
    dec: &Decomposition,
    from: usize,
    to: usize,
    inside: impl Fn(usize) -> bool,
    skip_edge: Option<usize>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let g = dec.graph();
    let inc = g.incidence();
    let n = dec.vertex_count();
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, e) in &inc[v] {
            if dec.is_red(e) && Some(e) != skip_edge && !seen[w] && inside(w) {
                seen[w] = true;
                pred[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut vertices = vec![to];
    let mut edges = Vec::new();
    let mut cur = to;
    while let Some((p, e)) = pred[cur] {
        vertices.push(p);
        edges.push(e);
        cur = p;
    }
    vertices.reverse();
    edges.reverse();
    Some((vertices, edges))
}

/// Detaches the small child at position `child` of the root component: the
/// generating arc `(x, x')` is exchanged with the first red edge on the path
/// from `x` to the root that leaves the subtree of `x`.
pub fn split_root_child(
    dec: &Decomposition,
    order: &LegalOrder,
    child: usize,
    params: &Params,
) -> Result<Decomposition, SolverError> {
    let arc = order
        .comps
        .get(child)
        .and_then(|c| c.witness)
        .ok_or_else(|| SolverError::Internal(format!("position {child} has no witnessing arc")))?;
    if order.index(arc.tail) != 0 {
        return Err(SolverError::Internal("not a child of the root component".into()));
    }
    if order.comps[child].comp.edge_count() > params.ell {
        return Err(SolverError::Internal("child is not small".into()));
    }
    let root_comp = &order.comps[0].comp;
    let (path, edges) = red_path(dec, arc.tail, dec.root(), |v| order.index(v) == 0, None)
        .ok_or_else(|| SolverError::Internal("no red path to the root".into()))?;
    let i = path
        .iter()
        .position(|&v| !dec.is_descendant(arc.tree, v, arc.tail))
        .ok_or_else(|| SolverError::Internal("root descends from the generating vertex".into()))?;
    let mut next = dec.clone();
    next.exchange(arc.tree, arc.tail, edges[i - 1])?;
    let rc = next.red_components()?;
    let kr = rc.of(dec.root()).edge_count();
    let kx = rc.of(arc.tail).edge_count();
    if kr < params.ell + 1 || kx >= root_comp.edge_count() {
        return Err(SolverError::Internal(format!(
            "root child split left sizes {kr} and {kx} from {}",
            root_comp.edge_count()
        )));
    }
    Ok(next)
}
