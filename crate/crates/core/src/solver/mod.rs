//! Potential descent on a core: `k` spanning trees plus a red forest whose
//! oversize components are shrunk until every one has at most `d'` edges.
//!
//! The potential is the residue vector followed by the size sequence of the
//! current legal order, both compared lexicographically. Every accepted move
//! strictly lowers it; when none applies the exploration subgraph is too
//! dense and becomes a certificate.

pub mod exploration;
pub mod moves;
pub mod order;
pub mod root;
pub mod special_path;
pub mod valid_state;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::decomposition::{Decomposition, ResidueVector};
use crate::error::{ExchangeError, StructureError};
use crate::graph::MultiGraph;
use crate::packing::CoreInstance;
use crate::params::Params;
use crate::verify::{density_diagnostics, DensityCertificate};

use exploration::build_exploration;
use order::{build_legal_order, compare_sizes, LegalOrder};
use valid_state::{drive_and_finish, DriveContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("red component with {edges} edges is too small for a root")]
    ComponentTooSmall { edges: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("structure: {0}")]
    Structure(#[from] StructureError),
    #[error("exchange: {0}")]
    Exchange(#[from] ExchangeError),
    #[error("iteration cap {cap} reached; state: {dump}")]
    IterationCap { cap: usize, dump: String },
    #[error("internal check failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// `None` means `10 * m * n`
    pub max_iters: Option<usize>,
    /// run every post-mutation check
    pub checked: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iters: None, checked: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    SpecialPath,
    SplitRootChild,
    Drive,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::SpecialPath => "special-path",
            MoveKind::SplitRootChild => "split-root-child",
            MoveKind::Drive => "drive",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [MoveKind::SpecialPath, MoveKind::SplitRootChild, MoveKind::Drive].into_iter().find(|m| m.name() == s)
    }
}

/// One accepted move. `Display` gives the tab-separated trace line
/// `kind, |R*|, rho before, rho after, sizes before, sizes after`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub kind: MoveKind,
    pub root_size: usize,
    pub rho_before: ResidueVector,
    pub rho_after: ResidueVector,
    pub sizes_before: Vec<usize>,
    pub sizes_after: Vec<usize>,
    /// main exchange steps inside a drive
    pub drive_steps: usize,
}

impl TraceEntry {
    /// Whether the potential strictly decreased.
    pub fn decreases(&self) -> bool {
        match self.rho_after.cmp(&self.rho_before) {
            Ordering::Less => true,
            Ordering::Equal => compare_sizes(&self.sizes_after, &self.sizes_before) == Ordering::Less,
            Ordering::Greater => false,
        }
    }

    pub fn parse(line: &str) -> Option<Self> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 7 {
            return None;
        }
        let sizes = |s: &str| -> Option<Vec<usize>> {
            if s == "-" {
                return Some(Vec::new());
            }
            s.split(',').map(|x| x.parse().ok()).collect()
        };
        Some(Self {
            kind: MoveKind::parse(f[0])?,
            root_size: f[1].parse().ok()?,
            rho_before: ResidueVector::parse(f[2])?,
            rho_after: ResidueVector::parse(f[3])?,
            sizes_before: sizes(f[4])?,
            sizes_after: sizes(f[5])?,
            drive_steps: f[6].parse().ok()?,
        })
    }
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes = |s: &[usize]| {
            if s.is_empty() {
                "-".to_string()
            } else {
                s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.kind.name(),
            self.root_size,
            self.rho_before,
            self.rho_after,
            sizes(&self.sizes_before),
            sizes(&self.sizes_after),
            self.drive_steps
        )
    }
}

#[derive(Debug, Clone)]
pub enum CoreOutcome {
    Decomposed(Decomposition),
    Dense(DensityCertificate),
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub outcome: CoreOutcome,
    pub trace: Vec<TraceEntry>,
}

struct Current {
    dec: Decomposition,
    order: LegalOrder,
}

/// Picks the largest oversize component (ties by smallest vertex), roots
/// every tree at its balanced vertex and builds the breadth-first order.
fn reset(dec: &Decomposition, params: &Params) -> Result<Option<Current>, SolverError> {
    let rc = dec.red_components()?;
    let Some(big) = rc
        .comps
        .iter()
        .filter(|c| c.edge_count() > params.d_prime)
        .max_by(|a, b| a.edge_count().cmp(&b.edge_count()).then(b.min_vertex().cmp(&a.min_vertex())))
    else {
        return Ok(None);
    };
    let r = root::choose_root(dec, big, params)?;
    let dec = dec.reroot(r)?;
    let order = build_legal_order(&dec)?;
    Ok(Some(Current { dec, order }))
}

pub fn solve_core(core: &CoreInstance, params: &Params, opts: &SolverOptions) -> Result<SolveReport, SolverError> {
    let graph = Arc::new(core.graph.clone());
    let dec = Decomposition::from_trees(graph, 0, &core.trees, &core.red)?;
    solve_decomposition(dec, params, opts)
}

/// Runs the descent from an arbitrary decomposition.
pub fn solve_decomposition(
    dec: Decomposition,
    params: &Params,
    opts: &SolverOptions,
) -> Result<SolveReport, SolverError> {
    if dec.k() != params.k {
        return Err(SolverError::Precondition(format!("decomposition has {} trees, k = {}", dec.k(), params.k)));
    }
    let g = dec.graph_arc().clone();
    let cap = opts.max_iters.unwrap_or_else(|| (10 * g.edge_count() * g.vertex_count()).max(1));
    let mut trace = Vec::new();
    let Some(mut cur) = reset(&dec, params)? else {
        return Ok(SolveReport { outcome: CoreOutcome::Decomposed(dec), trace });
    };
    for _ in 0..cap {
        let rho = cur.dec.residue(params)?;
        let found = try_moves(&cur, params, opts)?;
        let Some((kind, next, next_order, drive_steps)) = found else {
            let cert = certificate(&g, &cur, params, opts.checked)?;
            return Ok(SolveReport { outcome: CoreOutcome::Dense(cert), trace });
        };
        if opts.checked {
            next.check_structure()?;
        }
        let rho_next = next.residue(params)?;
        let sizes_before = cur.order.sizes();
        let root_size = cur.order.comps[0].comp.edge_count();
        let (following, sizes_after) = match rho_next.cmp(&rho) {
            Ordering::Less => {
                let f = reset(&next, params)?;
                let s = f.as_ref().map(|c| c.order.sizes()).unwrap_or_default();
                (f, s)
            }
            Ordering::Equal => {
                let order = next_order.ok_or_else(|| {
                    SolverError::Internal(format!("{} kept the residue without a smaller order", kind.name()))
                })?;
                let s = order.sizes();
                if compare_sizes(&s, &sizes_before) != Ordering::Less {
                    return Err(SolverError::Internal(format!("{} did not shrink the legal order", kind.name())));
                }
                (Some(Current { dec: next.clone(), order }), s)
            }
            Ordering::Greater => {
                return Err(SolverError::Internal(format!("{} raised the residue", kind.name())));
            }
        };
        trace.push(TraceEntry {
            kind,
            root_size,
            rho_before: rho,
            rho_after: rho_next,
            sizes_before,
            sizes_after,
            drive_steps,
        });
        match following {
            Some(c) => cur = c,
            None => return Ok(SolveReport { outcome: CoreOutcome::Decomposed(next), trace }),
        }
    }
    Err(SolverError::IterationCap { cap, dump: dump_state(&cur, params) })
}

type MoveResult = (MoveKind, Decomposition, Option<LegalOrder>, usize);

/// Tries the three moves in priority order.
fn try_moves(cur: &Current, params: &Params, opts: &SolverOptions) -> Result<Option<MoveResult>, SolverError> {
    let dec = &cur.dec;
    let order = &cur.order;
    // M1: a witnessing arc whose endpoints' components fit together
    for j in 1..order.len() {
        let w = order.comps[j].witness.expect("later components have witnesses");
        let parent = order.index(w.tail);
        if order.comps[parent].comp.edge_count() + order.comps[j].comp.edge_count() < params.d_prime {
            let path = special_path::find_minimal_special_path(dec, order, w)?
                .ok_or_else(|| SolverError::Internal("witnessing arc admits no special path".into()))?;
            let (next, next_order) = special_path::apply_special_path(dec, order, &path)?;
            return Ok(Some((MoveKind::SpecialPath, next, next_order, 0)));
        }
    }
    // M2: a small child of the root component
    for j in order.children_of(0) {
        if order.comps[j].comp.edge_count() <= params.ell {
            let next = moves::split_root_child(dec, order, j, params)?;
            return Ok(Some((MoveKind::SplitRootChild, next, None, 0)));
        }
    }
    // M3: a drive on a component with many small children from one tree
    for kp in 1..order.len() {
        if order.comps[kp].comp.edge_count() <= params.ell {
            continue;
        }
        for b in 0..params.k {
            for lp in 0..=params.ell {
                let ctx = match DriveContext::new(dec, order, kp, b, lp, *params) {
                    Ok(ctx) => ctx,
                    Err(SolverError::Precondition(_)) => continue,
                    Err(e) => return Err(e),
                };
                if !ctx.meets_threshold() {
                    continue;
                }
                let out = drive_and_finish(&ctx, opts.checked)?;
                return Ok(Some((MoveKind::Drive, out.dec, out.order, out.steps.len())));
            }
        }
    }
    Ok(None)
}

/// The exploration vertex set once no move applies.
fn certificate(
    g: &MultiGraph,
    cur: &Current,
    params: &Params,
    checked: bool,
) -> Result<DensityCertificate, SolverError> {
    let explo = build_exploration(&cur.dec)?;
    let diag = density_diagnostics(&explo, &cur.order, params);
    let cert = DensityCertificate::new(g, params, explo.vertices.clone());
    match cert {
        Some(_) if checked && !diag.flags.is_empty() => {
            Err(SolverError::Internal(format!("density diagnostics flagged a no-move state:\n{diag}")))
        }
        Some(c) if c.verify(g, params) => Ok(c),
        _ => {
            Err(SolverError::Internal(format!("no move applies but the exploration subgraph is not dense:\n{}", diag)))
        }
    }
}

fn dump_state(cur: &Current, params: &Params) -> String {
    let rho = cur.dec.residue(params).map(|r| r.to_string()).unwrap_or_else(|e| e.to_string());
    format!("root={} rho={} sizes={:?} classes={:?}", cur.dec.root(), rho, cur.order.sizes(), cur.dec.classes())
}
