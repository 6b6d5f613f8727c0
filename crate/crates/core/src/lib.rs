//! Decomposes a multigraph of fractional arboricity at most `k + d/(d+k+1)`
//! into `k + 1` forests, one of whose components all have at most `d'`
//! edges. Denser inputs get a vertex set witnessing the excess density.
//!
//! ```
//! use ndt_core::{compute_params, decompose, DecomposeOptions, MultiGraph, Outcome};
//!
//! let g = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
//! let params = compute_params(1, 4).unwrap();
//! let report = decompose(&g, &params, &DecomposeOptions::default()).unwrap();
//! match report.outcome {
//!     Outcome::Forests(f) => assert_eq!(f.classes.len(), 2),
//!     Outcome::Dense(_) => unreachable!(),
//! }
//! ```

pub mod arboricity;
pub mod decomposition;
pub mod error;
pub mod graph;
pub mod instances;
pub mod packing;
pub mod params;
pub mod pipeline;
pub mod solver;
pub mod verify;

pub type Rational = num_rational::Ratio<i64>;

pub use arboricity::{brute_force_gamma, exceeds_density, fractional_arboricity, DensityWitness};
pub use decomposition::{BlueArc, Color, Component, Decomposition, RedComponents, ResidueVector};
pub use error::{ArboricityError, ExchangeError, GraphError, PackingError, ParamsError, ParseError, StructureError};
pub use graph::{MultiGraph, SubGraph};
pub use instances::{filter_feasible, generate, Family, GenSpec};
pub use packing::{normalize, pack_k_forests, tnw_violating_partition, CoreInstance, NormalNode};
pub use params::{compute_params, Params};
pub use pipeline::{decompose, DecomposeOptions, DecomposeReport, ForestDecomposition, Outcome, PipelineError};
pub use solver::{solve_core, solve_decomposition, MoveKind, SolverError, SolverOptions, TraceEntry};
pub use verify::{verify_certificate, verify_partition, DensityCertificate, PartitionReport};
