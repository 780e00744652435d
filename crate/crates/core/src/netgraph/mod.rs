//! Graph representation, edge-list ingestion, k-hop queries and generators.

mod families;
mod graph;

pub use families::{generate, karate_club, FamilySpec};
pub use graph::{load_edge_list, read_edge_list, Graph, LoadedGraph, Neighborhoods};
