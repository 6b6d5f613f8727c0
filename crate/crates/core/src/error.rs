use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    Loop { edge: usize, vertex: usize },
    #[error("edge {edge} has an endpoint outside 0..{n}")]
    VertexOutOfRange { edge: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("k and d must be positive (got k={k}, d={d})")]
    NonPositive { k: usize, d: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: loop edge at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("empty input")]
    Empty,
    #[error("result file: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{n} vertices cannot carry {m} loop-free edges")]
    TooFewVertices { n: usize, m: usize },
    #[error("tight-children needs ell >= 2 and d' >= 4 (k={k}, d={d})")]
    TightParams { k: usize, d: usize },
    #[error(transparent)]
    Params(#[from] ParamsError),
}

/// Violations of the "k rooted spanning trees plus a red forest" structure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("tree {tree}: vertex {vertex} has no parent")]
    MissingParent { tree: usize, vertex: usize },
    #[error("tree {tree}: root {root} has a parent")]
    RootHasParent { tree: usize, root: usize },
    #[error("tree {tree}: parent edge {edge} of vertex {vertex} is inconsistent")]
    BadParentEdge { tree: usize, vertex: usize, edge: usize },
    #[error("tree {tree}: vertex {vertex} does not reach the root")]
    Cycle { tree: usize, vertex: usize },
    #[error("edge {edge} is coloured blue({tree}) but is no parent edge")]
    StrayBlue { tree: usize, edge: usize },
    #[error("red edges contain a cycle through edge {edge}")]
    RedCycle { edge: usize },
    #[error("tree count {found} does not match k={k}")]
    TreeCount { k: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExchangeError {
    #[error("vertex {0} is the root and has no parent arc")]
    RootArc(usize),
    #[error("edge {0} is not red")]
    NotRed(usize),
    #[error("neither or both endpoints of edge {edge} descend from {tail} in tree {tree}")]
    NotOnCycle { tree: usize, tail: usize, edge: usize },
    #[error("adding the parent edge of {tail} to the red forest closes a cycle")]
    RedCycle { tail: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArboricityError {
    #[error("graph needs at least two vertices")]
    TooFewVertices,
    #[error("graph has no edges")]
    Edgeless,
    #[error("threshold denominator must be positive")]
    BadThreshold,
    #[error("brute force limited to {limit} vertices (got {n})")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("glued class {class} is not a forest")]
    GlueCycle { class: usize },
    #[error("contracted graph could not be packed into k forests")]
    ContractedTooDense,
}
