//! Independent checks of results and certificates, and the density
//! accounting that backs a certificate when the solver runs out of moves.
//!
//! Reports are plain data; `Display` renders one violation per line as
//! tab-separated `check, component, numbers`.

use std::fmt;

use crate::graph::{MultiGraph, UnionFind};
use crate::params::Params;
use crate::solver::exploration::ExplorationSubgraph;
use crate::solver::order::LegalOrder;
use crate::Rational;

pub use crate::solver::valid_state::{check_valid_state, ConditionFailure, ValidityReport};

/// A vertex set whose density exceeds `k + d/(d+k+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityCertificate {
    /// sorted
    pub vertices: Vec<usize>,
    pub edge_count: usize,
    pub threshold: Rational,
}

impl DensityCertificate {
    /// Counts the induced edges of `vertices`; `None` for fewer than two.
    pub fn new(g: &MultiGraph, params: &Params, mut vertices: Vec<usize>) -> Option<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.len() < 2 || vertices.iter().any(|&v| v >= g.vertex_count()) {
            return None;
        }
        let mut mask = vec![false; g.vertex_count()];
        for &v in &vertices {
            mask[v] = true;
        }
        let edge_count = g.induced_edge_count(&mask);
        Some(Self { vertices, edge_count, threshold: params.threshold() })
    }

    pub fn verify(&self, g: &MultiGraph, params: &Params) -> bool {
        verify_certificate(g, params, self)
    }
}

/// Recounts the induced edges and tests
/// `e * (d+k+1) > (k(d+k+1) + d) * (|V| - 1)` in integers.
pub fn verify_certificate(g: &MultiGraph, params: &Params, cert: &DensityCertificate) -> bool {
    let Some(fresh) = DensityCertificate::new(g, params, cert.vertices.clone()) else {
        return false;
    };
    if fresh.vertices.len() != cert.vertices.len() || fresh.edge_count != cert.edge_count {
        return false;
    }
    let (k, d) = (params.k as i128, params.d as i128);
    let denom = d + k + 1;
    let lhs = fresh.edge_count as i128 * denom;
    let rhs = (k * denom + d) * (fresh.vertices.len() as i128 - 1);
    lhs > rhs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    ClassCount { expected: usize, found: usize },
    UnknownEdge { class: usize, edge: usize },
    Uncovered { edge: usize },
    Repeated { edge: usize, times: usize },
    Cycle { class: usize, edge: usize },
    Oversize { class: usize, component: usize, edges: usize, bound: usize },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::ClassCount { expected, found } => write!(f, "class-count\t-\t{expected}\t{found}"),
            PartitionViolation::UnknownEdge { class, edge } => write!(f, "unknown-edge\t{class}\t{edge}"),
            PartitionViolation::Uncovered { edge } => write!(f, "uncovered\t-\t{edge}"),
            PartitionViolation::Repeated { edge, times } => write!(f, "repeated\t-\t{edge}\t{times}"),
            PartitionViolation::Cycle { class, edge } => write!(f, "cycle\t{class}\t{edge}"),
            PartitionViolation::Oversize { class, component, edges, bound } => {
                write!(f, "oversize\t{class}\t{component}\t{edges}\t{bound}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub violations: Vec<PartitionViolation>,
}

impl PartitionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks that `classes` are `k+1` forests partitioning `E(g)` and that
/// every component of class `special` has at most `d'` edges. Components are
/// identified by their smallest vertex.
pub fn verify_partition(g: &MultiGraph, params: &Params, classes: &[Vec<usize>], special: usize) -> PartitionReport {
    let mut report = PartitionReport::default();
    let m = g.edge_count();
    if classes.len() != params.k + 1 {
        report.violations.push(PartitionViolation::ClassCount { expected: params.k + 1, found: classes.len() });
    }
    let mut seen = vec![0usize; m];
    for (c, class) in classes.iter().enumerate() {
        let mut uf = UnionFind::new(g.vertex_count());
        for &e in class {
            if e >= m {
                report.violations.push(PartitionViolation::UnknownEdge { class: c, edge: e });
                continue;
            }
            seen[e] += 1;
            let (u, v) = g.endpoints(e);
            if !uf.union(u, v) {
                report.violations.push(PartitionViolation::Cycle { class: c, edge: e });
            }
        }
    }
    for (e, &times) in seen.iter().enumerate() {
        match times {
            0 => report.violations.push(PartitionViolation::Uncovered { edge: e }),
            1 => {}
            _ => report.violations.push(PartitionViolation::Repeated { edge: e, times }),
        }
    }
    if let Some(class) = classes.get(special) {
        let valid: Vec<usize> = class.iter().copied().filter(|&e| e < m).collect();
        let mut uf = UnionFind::new(g.vertex_count());
        for &e in &valid {
            let (u, v) = g.endpoints(e);
            uf.union(u, v);
        }
        let mut sizes = vec![0usize; g.vertex_count()];
        for &e in &valid {
            sizes[uf.find(g.endpoints(e).0)] += 1;
        }
        let mut min_vertex = vec![usize::MAX; g.vertex_count()];
        for v in 0..g.vertex_count() {
            let r = uf.find(v);
            min_vertex[r] = min_vertex[r].min(v);
        }
        for r in 0..g.vertex_count() {
            if sizes[r] > params.d_prime {
                report.violations.push(PartitionViolation::Oversize {
                    class: special,
                    component: min_vertex[r],
                    edges: sizes[r],
                    bound: params.d_prime,
                });
            }
        }
    } else {
        report.violations.push(PartitionViolation::ClassCount { expected: special + 1, found: classes.len() });
    }
    report
}

/// One inequality of the density accounting, with the numbers involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosticFlag {
    pub check: &'static str,
    /// position in the legal order, `None` for global checks
    pub component: Option<usize>,
    pub numbers: Vec<i64>,
}

impl fmt::Display for DiagnosticFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comp = self.component.map_or("-".to_string(), |c| c.to_string());
        let nums: Vec<String> = self.numbers.iter().map(i64::to_string).collect();
        write!(f, "{}\t{}\t{}", self.check, comp, nums.join("\t"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityDiagnostics {
    /// failed inequalities
    pub flags: Vec<DiagnosticFlag>,
    /// red edges and vertices of the exploration subgraph
    pub red_edges: usize,
    pub vertices: usize,
    /// `e_r(H) / v(H) > d/(d+k+1)`
    pub red_dense: bool,
}

impl fmt::Display for DensityDiagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "red\t-\t{}\t{}\t{}", self.red_edges, self.vertices, self.red_dense as u8)?;
        for flag in &self.flags {
            writeln!(f, "{flag}")?;
        }
        Ok(())
    }
}

/// Evaluates, for a state in which no move applies, the inequalities that
/// force the exploration subgraph to be dense: small components have non-small
/// parents, the root component has no small children, a parent and child
/// together have at least `d'` edges, the per-tree child counts are bounded,
/// and every non-small component with its small children has red density at
/// least `d/(d+k+1)`.
pub fn density_diagnostics(explo: &ExplorationSubgraph, order: &LegalOrder, params: &Params) -> DensityDiagnostics {
    let (k, d, ell, dp) = (params.k as i64, params.d as i64, params.ell as i64, params.d_prime as i64);
    let denom = d + k + 1;
    let mut flags = Vec::new();
    let size = |j: usize| order.comps[j].comp.edge_count() as i64;
    let parent_of = |j: usize| order.comps[j].witness.map(|w| order.index(w.tail));
    for j in 1..order.len() {
        let p = parent_of(j).expect("witness");
        if size(j) <= ell && size(p) <= ell {
            flags.push(DiagnosticFlag { check: "small-parent", component: Some(j), numbers: vec![size(p), size(j)] });
        }
        if p == 0 && size(j) <= ell {
            flags.push(DiagnosticFlag { check: "root-small-child", component: Some(j), numbers: vec![size(j)] });
        }
        if size(p) + size(j) < dp {
            flags.push(DiagnosticFlag {
                check: "parent-child-sum",
                component: Some(j),
                numbers: vec![size(p), size(j), dp],
            });
        }
    }
    for kp in 0..order.len() {
        let ek = size(kp);
        if ek <= ell {
            continue;
        }
        let children: Vec<usize> = order.children_of(kp).filter(|&j| size(j) <= ell).collect();
        let alpha = (dp - ek).max(0);
        for b in 0..params.k {
            for lp in 0..=ell {
                let count = children
                    .iter()
                    .filter(|&&j| order.comps[j].witness.map(|w| w.tree) == Some(b) && size(j) <= lp)
                    .count() as i64;
                if count > lp - alpha + 1 {
                    flags.push(DiagnosticFlag {
                        check: "child-count",
                        component: Some(kp),
                        numbers: vec![b as i64, lp, count, lp - alpha + 1],
                    });
                }
            }
        }
        let e_sum = ek + children.iter().map(|&j| size(j)).sum::<i64>();
        let v_sum = ek + 1 + children.iter().map(|&j| size(j) + 1).sum::<i64>();
        let ok = if kp == 0 { e_sum * denom > d * v_sum } else { e_sum * denom >= d * v_sum };
        if !ok {
            flags.push(DiagnosticFlag { check: "aggregate", component: Some(kp), numbers: vec![e_sum, v_sum] });
        }
    }
    let er = explo.red_edges as i64;
    let v = explo.vertices.len() as i64;
    let red_dense = er * denom > d * v;
    if !red_dense {
        flags.push(DiagnosticFlag { check: "red-density", component: None, numbers: vec![er, v] });
    }
    DensityDiagnostics { flags, red_edges: explo.red_edges, vertices: explo.vertices.len(), red_dense }
}
