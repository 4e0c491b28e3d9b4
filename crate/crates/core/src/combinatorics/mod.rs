//! Labelled graphs on a handful of vertices and the cluster-expansion identities over them.
//!
//! Everything here is exhaustive enumeration, so vertex counts are capped
//! ([`MAX_VERTICES`] for enumeration, [`MAX_IDENTITY_VERTICES`] for the identity checks).
//! Vertices are labelled `0..n`.

mod enumerate;
mod graph;
mod identities;
mod penrose;

pub use enumerate::{enumerate_connected_graphs, enumerate_graphs, enumerate_trees, graph_count, graphs_in_range};
pub use graph::{pair_count, pair_slot, pairs, LabeledGraph, Tree, MAX_VERTICES};
pub use identities::{
    component_decomposition_check, product_expansion_check, set_partitions, EdgeWeights, Weight, MAX_IDENTITY_VERTICES,
};
pub use penrose::{
    allowed_extra_edges, bfs_depths, penrose_identity_check, penrose_map, penrose_partition_check, PartitionScheme,
};
