//! Shareable-goods games on networks.
//!
//! Nodes of a graph decide whether to buy a good that every node within
//! `k` hops can use. In the plain game (SGG) neighbors free ride; with
//! access costs (SGG-AC) each renter pays the owner it follows. The crate
//! evaluates utilities and equilibria, runs best-response dynamics, solves
//! for socially optimal purchase sets and measures the price of anarchy and
//! stability.

pub mod cli;
pub mod dynamics;
pub mod equilibria;
pub mod error;
mod flow;
pub mod game;
pub mod netgraph;
pub mod optimum;

pub use error::{Error, Result};
pub use game::{Game, GameConfig, OwnerSet, Profile, Variant};
pub use netgraph::{FamilySpec, Graph, Neighborhoods};
