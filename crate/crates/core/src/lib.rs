pub mod coders;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod mdl;
pub mod tree;

pub use coders::{decode_graph, encode_graph, Class, CoderSpec, CoderStats, Family, Mode};
pub use error::{Error, Result};
pub use graph::{DegreeDistribution, Graph};
pub use tree::{graph_to_tree, tree_to_graph, CardinalityTree, NodeRef, Picker};
