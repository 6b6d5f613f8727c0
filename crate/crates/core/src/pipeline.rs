//! Gate, normalise, solve every core, glue, verify.

use thiserror::Error;

use crate::arboricity::exceeds_density;
use crate::error::{ArboricityError, PackingError};
use crate::graph::MultiGraph;
use crate::packing::{assemble, normalize, LiftVertices, NormalizeError};
use crate::params::Params;
use crate::solver::{solve_core, CoreOutcome, SolverError, SolverOptions, TraceEntry};
use crate::verify::{verify_partition, DensityCertificate, PartitionReport};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub solver: SolverOptions,
}

/// `k + 1` edge classes; class `special_index` has components of at most
/// `d'` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestDecomposition {
    pub params: Params,
    pub classes: Vec<Vec<usize>>,
    pub special_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Forests(ForestDecomposition),
    Dense(DensityCertificate),
}

#[derive(Debug, Clone)]
pub struct DecomposeReport {
    pub outcome: Outcome,
    /// moves of every core, in solving order
    pub trace: Vec<TraceEntry>,
    pub cores: usize,
}

#[derive(Debug, Clone, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Arboricity(#[from] ArboricityError),
    #[error("output failed verification:\n{0}")]
    Verification(PartitionReport),
    #[error("a core produced a dense set {0:?} that fails verification")]
    BadCertificate(Vec<usize>),
    /// dense vertex set of some part, renamed as it propagates upwards
    #[error("dense core")]
    CoreDense(Vec<usize>),
}

impl LiftVertices for PipelineError {
    fn lift(self, vertex_map: &[usize]) -> Self {
        match self {
            PipelineError::CoreDense(vs) => PipelineError::CoreDense(vs.into_iter().map(|v| vertex_map[v]).collect()),
            other => other,
        }
    }
}

pub fn decompose(g: &MultiGraph, params: &Params, opts: &DecomposeOptions) -> Result<DecomposeReport, PipelineError> {
    if g.vertex_count() >= 2 && g.edge_count() > 0 {
        if let Some(w) = exceeds_density(g, params.threshold())? {
            return dense(g, params, w.vertices, Vec::new(), 0);
        }
    }
    let node = match normalize(g, params) {
        Ok(node) => node,
        Err(NormalizeError::Dense(w)) => return dense(g, params, w.vertices, Vec::new(), 0),
        Err(NormalizeError::Packing(e)) => return Err(e.into()),
    };
    let mut trace = Vec::new();
    let mut cores = 0;
    let classes = assemble(g, params.k, &node, &mut |core| {
        cores += 1;
        let report = solve_core(core, params, &opts.solver)?;
        trace.extend(report.trace);
        match report.outcome {
            CoreOutcome::Decomposed(dec) => Ok(dec.classes()),
            CoreOutcome::Dense(cert) => Err(PipelineError::CoreDense(cert.vertices)),
        }
    });
    let classes = match classes {
        Ok(c) => c,
        Err(PipelineError::CoreDense(vs)) => return dense(g, params, vs, trace, cores),
        Err(e) => return Err(e),
    };
    let check = verify_partition(g, params, &classes, params.k);
    if !check.is_valid() {
        return Err(PipelineError::Verification(check));
    }
    let outcome = Outcome::Forests(ForestDecomposition { params: *params, classes, special_index: params.k });
    Ok(DecomposeReport { outcome, trace, cores })
}

fn dense(
    g: &MultiGraph,
    params: &Params,
    vertices: Vec<usize>,
    trace: Vec<TraceEntry>,
    cores: usize,
) -> Result<DecomposeReport, PipelineError> {
    match DensityCertificate::new(g, params, vertices.clone()) {
        Some(c) if c.verify(g, params) => Ok(DecomposeReport { outcome: Outcome::Dense(c), trace, cores }),
        _ => Err(PipelineError::BadCertificate(vertices)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::compute_params;

    #[test]
    fn forest_input() {
        let g = MultiGraph::new(5, vec![(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let p = compute_params(2, 3).unwrap();
        let r = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
        let Outcome::Forests(f) = r.outcome else { panic!("forest is feasible") };
        assert_eq!(f.classes.len(), 3);
        assert_eq!(f.special_index, 2);
    }

    #[test]
    fn k4_is_dense_for_k1_d1() {
        let g = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let p = compute_params(1, 1).unwrap();
        let r = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
        let Outcome::Dense(c) = r.outcome else { panic!("K4 is too dense") };
        assert_eq!(c.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn edgeless_and_single_vertex() {
        let p = compute_params(1, 1).unwrap();
        for g in [MultiGraph::empty(0), MultiGraph::empty(1), MultiGraph::empty(3)] {
            let r = decompose(&g, &p, &DecomposeOptions::default()).unwrap();
            assert!(matches!(r.outcome, Outcome::Forests(_)));
        }
    }
}
