//! Seeded instance families and the edge-list / result file formats.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so a `GenSpec`
//! names the same graph on every platform.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arboricity::exceeds_density;
use crate::error::{GenError, ParseError};
use crate::graph::MultiGraph;
use crate::params::{compute_params, Params};
use crate::pipeline::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    RandomMultigraph,
    BlobBridge,
    TightChildren,
    ForestPlusNoise,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::RandomMultigraph, Family::BlobBridge, Family::TightChildren, Family::ForestPlusNoise];

    pub fn name(self) -> &'static str {
        match self {
            Family::RandomMultigraph => "random-multigraph",
            Family::BlobBridge => "blob-bridge",
            Family::TightChildren => "tight-children",
            Family::ForestPlusNoise => "forest-plus-noise",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| format!("unknown family {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub d: usize,
    pub seed: u64,
}

/// Builds the graph named by `spec`.
///
/// * `random-multigraph`: `m` edges, each a uniform pair of distinct vertices.
/// * `forest-plus-noise`: a uniform random recursive tree on `n` vertices
///   (truncated to `m` edges when `m < n - 1`), plus `m - (n - 1)` random edges.
/// * `blob-bridge`: two copies of `K_{2k}` plus one parallel edge, joined by a
///   bridge; `n`, `m`, `seed` are ignored.
/// * `tight-children`: the graph of [`tight_children`]; `n`, `m`, `seed` are ignored.
pub fn generate(spec: &GenSpec) -> Result<MultiGraph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::RandomMultigraph => {
            if spec.n < 2 && spec.m > 0 {
                return Err(GenError::TooFewVertices { n: spec.n, m: spec.m });
            }
            let edges = (0..spec.m).map(|_| random_pair(&mut rng, spec.n)).collect();
            Ok(MultiGraph::new(spec.n, edges).expect("pairs are distinct and in range"))
        }
        Family::ForestPlusNoise => {
            if spec.n < 2 && spec.m > 0 {
                return Err(GenError::TooFewVertices { n: spec.n, m: spec.m });
            }
            let mut label: Vec<usize> = (0..spec.n).collect();
            label.shuffle(&mut rng);
            let mut edges: Vec<(usize, usize)> = (1..spec.n).map(|i| (label[rng.gen_range(0..i)], label[i])).collect();
            edges.truncate(spec.m);
            while edges.len() < spec.m {
                edges.push(random_pair(&mut rng, spec.n));
            }
            Ok(MultiGraph::new(spec.n, edges).expect("pairs are distinct and in range"))
        }
        Family::BlobBridge => Ok(blob_bridge(spec.k.max(1))),
        Family::TightChildren => Ok(tight_children(&compute_params(spec.k, spec.d)?)?.graph),
    }
}

fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// Two `K_{2k}`-plus-parallel-edge blobs on `0..2k` and `2k..4k`, bridge
/// `(2k-1, 2k)`.
pub fn blob_bridge(k: usize) -> MultiGraph {
    let s = 2 * k;
    let mut edges = Vec::new();
    for base in [0, s] {
        for a in 0..s {
            for b in a + 1..s {
                edges.push((base + a, base + b));
            }
        }
        edges.push((base, base + 1));
    }
    edges.push((s - 1, s));
    MultiGraph::new(2 * s, edges).expect("blob edges are valid")
}

/// A decomposition where a drive on the component `K` at position 1 has
/// three children of `ell' = 2` edges from tree 0 and `alpha = 0`.
///
/// Vertices: the root component is the red path `a_0 .. a_{d'+1}` rooted at
/// `a_0`, `K` is the red path `k_0 .. k_{d'}`, and child `i` is the red path
/// `c_{i,0} c_{i,1} c_{i,2}`. Tree 0 has the arcs `a_i -> a_{i-1}`,
/// `a_{d'+1} -> k_0`, `k_i -> c_{i,0}` for `i < 3`, `k_i -> k_{i-1}` for
/// `i >= 3`, and every child vertex `-> a_0`. Trees `1..k` are stars at `a_0`.
#[derive(Debug, Clone)]
pub struct TightChildren {
    pub graph: MultiGraph,
    pub root: usize,
    pub trees: Vec<Vec<usize>>,
    pub red: Vec<usize>,
    /// position of `K` in the legal order
    pub k_pos: usize,
    pub ell_prime: usize,
    pub e_k: usize,
}

pub fn tight_children(params: &Params) -> Result<TightChildren, GenError> {
    let (k, dp) = (params.k, params.d_prime);
    if params.ell < 2 || dp < 4 {
        return Err(GenError::TightParams { k, d: params.d });
    }
    let a = |i: usize| i;
    let kv = |i: usize| dp + 2 + i;
    let c = |i: usize, j: usize| 2 * dp + 3 + 3 * i + j;
    let n = 2 * dp + 12;
    let mut edges = Vec::new();
    let mut red = Vec::new();
    let mut red_edge = |edges: &mut Vec<(usize, usize)>, e: (usize, usize)| {
        red.push(edges.len());
        edges.push(e);
    };
    for i in 1..=dp + 1 {
        red_edge(&mut edges, (a(i - 1), a(i)));
    }
    for i in 1..=dp {
        red_edge(&mut edges, (kv(i - 1), kv(i)));
    }
    for i in 0..3 {
        red_edge(&mut edges, (c(i, 0), c(i, 1)));
        red_edge(&mut edges, (c(i, 1), c(i, 2)));
    }
    let mut arcs = vec![(a(dp + 1), kv(0))];
    arcs.extend((1..=dp).map(|i| (a(i), a(i - 1))));
    arcs.extend((0..3).map(|i| (kv(i), c(i, 0))));
    arcs.extend((3..=dp).map(|i| (kv(i), kv(i - 1))));
    arcs.extend((0..3).flat_map(|i| (0..3).map(move |j| (c(i, j), a(0)))));
    let mut trees = vec![Vec::new(); k];
    for arc in arcs {
        trees[0].push(edges.len());
        edges.push(arc);
    }
    for tree in trees.iter_mut().skip(1) {
        for v in 1..n {
            tree.push(edges.len());
            edges.push((v, a(0)));
        }
    }
    let graph = MultiGraph::new(n, edges).expect("construction is loop-free");
    Ok(TightChildren { graph, root: a(0), trees, red, k_pos: 1, ell_prime: 2, e_k: dp })
}

/// Whether the fractional arboricity of `g` is at most the threshold.
pub fn filter_feasible(g: &MultiGraph, params: &Params) -> bool {
    if g.vertex_count() < 2 || g.edge_count() == 0 {
        return true;
    }
    matches!(exceeds_density(g, params.threshold()), Ok(None))
}

/// Parses `n m` followed by `m` lines `u v`; `#` lines and blank lines are
/// skipped.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph, ParseError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let (n, m) = two_numbers(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let (u, v) = two_numbers(line, l)?;
        if u >= n || v >= n {
            return Err(ParseError::Malformed { line, message: format!("vertex out of range 0..{n}") });
        }
        if u == v {
            return Err(ParseError::Loop { line, vertex: u });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount { expected: m, found: edges.len() });
    }
    Ok(MultiGraph::new(n, edges).expect("edges were validated"))
}

fn two_numbers(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let bad = |message: String| ParseError::Malformed { line, message };
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| bad("expected two integers".into()))?;
        tok.parse().map_err(|_| bad(format!("not a non-negative integer: {tok:?}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(bad("trailing tokens".into()));
    }
    Ok(pair)
}

pub fn write_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

/// The JSON result of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResultFile {
    Forests { k: usize, d: usize, d_prime: usize, forests: Vec<Vec<usize>>, special_forest_index: usize },
    Certificate { certificate: CertificateBody },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBody {
    pub vertices: Vec<usize>,
}

impl ResultFile {
    pub fn from_outcome(outcome: &Outcome) -> Self {
        match outcome {
            Outcome::Forests(f) => ResultFile::Forests {
                k: f.params.k,
                d: f.params.d,
                d_prime: f.params.d_prime,
                forests: f.classes.clone(),
                special_forest_index: f.special_index,
            },
            Outcome::Dense(c) => {
                ResultFile::Certificate { certificate: CertificateBody { vertices: c.vertices.clone() } }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result files serialise")
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_deterministic() {
        let spec = GenSpec { family: Family::RandomMultigraph, n: 6, m: 9, k: 1, d: 1, seed: 7 };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        assert_eq!(generate(&spec).unwrap().edge_count(), 9);
    }

    #[test]
    fn tiny_random_rejected() {
        let spec = GenSpec { family: Family::RandomMultigraph, n: 1, m: 1, k: 1, d: 1, seed: 0 };
        assert_eq!(generate(&spec), Err(GenError::TooFewVertices { n: 1, m: 1 }));
        let spec = GenSpec { m: 0, ..spec };
        assert_eq!(generate(&spec).unwrap().edge_count(), 0);
    }

    #[test]
    fn blob_bridge_k2() {
        let g = blob_bridge(2);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.edges()[14], (3, 4));
    }

    #[test]
    fn forest_noise_counts() {
        let spec = GenSpec { family: Family::ForestPlusNoise, n: 7, m: 4, k: 1, d: 1, seed: 3 };
        let g = generate(&spec).unwrap();
        assert!(crate::graph::is_forest(7, g.edges().iter().copied()));
        let spec = GenSpec { m: 10, ..spec };
        assert_eq!(generate(&spec).unwrap().edge_count(), 10);
    }

    #[test]
    fn parse_examples() {
        let g = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        let g = parse_edge_list("# pair\n2 2\n0 1\n0 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 1)]);
        assert_eq!(parse_edge_list("2 1\n0 0"), Err(ParseError::Loop { line: 2, vertex: 0 }));
        assert!(matches!(parse_edge_list("2 1\n0 x"), Err(ParseError::Malformed { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1\n0 5"), Err(ParseError::Malformed { line: 2, .. })));
        assert_eq!(parse_edge_list("2 2\n0 1"), Err(ParseError::EdgeCount { expected: 2, found: 1 }));
        assert_eq!(parse_edge_list("  \n"), Err(ParseError::Empty));
    }

    #[test]
    fn result_json_shapes() {
        let f = ResultFile::Forests { k: 1, d: 1, d_prime: 1, forests: vec![vec![0], vec![]], special_forest_index: 1 };
        let s = f.to_json();
        assert_eq!(s, r#"{"k":1,"d":1,"d_prime":1,"forests":[[0],[]],"special_forest_index":1}"#);
        assert_eq!(ResultFile::parse(&s).unwrap(), f);
        let c = ResultFile::Certificate { certificate: CertificateBody { vertices: vec![0, 1, 2, 3] } };
        assert_eq!(c.to_json(), r#"{"certificate":{"vertices":[0,1,2,3]}}"#);
        assert_eq!(ResultFile::parse(&c.to_json()).unwrap(), c);
        assert!(ResultFile::parse("{}").is_err());
    }

    #[test]
    fn feasibility_examples() {
        let k4 = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!filter_feasible(&k4, &compute_params(1, 1).unwrap()));
        assert!(filter_feasible(&k4, &compute_params(2, 1).unwrap()));
        assert!(filter_feasible(&k4, &compute_params(2, 9).unwrap()));
        let path = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert!(filter_feasible(&path, &compute_params(1, 1).unwrap()));
    }
}
