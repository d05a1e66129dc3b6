use thiserror::Error;

use crate::multigraph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("point set is degenerate: {0}")]
    Degenerate(String),
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("affine lattice of the points is not saturated (index {0}); integral reduced functionals do not exist")]
    UnsaturatedLattice(String),
    #[error("coefficient does not fit in 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Precondition(String),
}
