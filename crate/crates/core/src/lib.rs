//! Piercing of subtree systems, Edge Helly verification, flower-power
//! constructions, monomorphism machinery and small-n extremal search.

pub mod bits;
pub mod codec;
pub mod graph;
pub mod constructions;
pub mod counting;
pub mod extremal;
pub mod piercing;
pub mod search;
pub mod verify;

pub use codec::CodecError;
pub use graph::{
    component_count, components_after_removal, enumerate_subtrees, enumerate_trees, neighborhood, tree_metrics, two_core, Edge,
    GraphError, SimpleGraph, Subtree, SubtreeSystem, Tree, TreeMetrics, Vertex,
};
