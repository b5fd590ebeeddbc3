//! Joint components of random double graphs.
//!
//! A double graph carries two independent edge layers, red and blue, on one
//! vertex set. A joint component is a maximal vertex set that is connected
//! in both layers. This crate samples `G(n, l1/n, l2/n)` double graphs,
//! decomposes them, computes the limiting giant fraction `beta(l1, l2)` and
//! its critical curve, and simulates the bicoloured branching process that
//! explains it.

pub mod analytic;
pub mod branching;
pub mod doublegraph;
pub mod error;
pub mod harness;
pub mod jointdecomp;
pub mod partition;
pub mod rng;
pub mod tree;

pub use doublegraph::{components, generate, neighborhood, DoubleGraph, NeighborhoodReport};
pub use error::{Error, Result};
pub use partition::Partition;
pub use tree::{Color, ColoredTree};
