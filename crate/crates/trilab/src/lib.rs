//! Simulator and verification harness for the random greedy
//! triangle-packing process.
//!
//! Starting from the complete graph K_n, the process repeatedly picks a
//! surviving triangle uniformly at random and removes its three edges,
//! stopping at a triangle-free graph. This crate drives that process
//! exactly and measures a whole ensemble of graph statistics — the
//! triangle count, degrees, co-degrees, triple co-degrees, and the
//! neighborhood-edge counts `T_u` and `R_uv` — against their analytic
//! trajectories and error envelopes, validates the exact one-step
//! identities with brute-force oracles, and estimates how the leftover
//! edge count scales with n.
//!
//! The guide under `book/` walks through the concepts; its code snippets
//! compile and run as doctests of this crate.

pub mod analytics;
pub mod graph;
pub mod harness;
pub mod index;
pub mod process;
pub mod rng;

mod book;

pub use graph::{pair_id, DynamicGraph, GraphError, Triangle};
pub use index::TriangleIndex;
pub use process::{CheckpointPolicy, ProcessState, RunSummary};
