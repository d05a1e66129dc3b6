pub mod base_polytope;
pub mod canonical;
pub mod census;
pub mod constructions;
pub mod error;
pub mod gorenstein_check;
pub mod graphic_matroid;
pub mod hull;
pub mod lattice;
pub mod multigraph;

pub use canonical::{canonical_form, canonical_labeling, isomorphism, CanonicalForm};
pub use error::{ConstructionError, GraphError, PolytopeError};
pub use multigraph::{Contraction, Edge, EdgeId, Multigraph, VertexSubset};
