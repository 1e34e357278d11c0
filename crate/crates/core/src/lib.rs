//! Vertex cover and dominating set on the square of a graph.
//!
//! The crate bundles a graph model with exact oracles, a synchronous
//! message-passing simulator for the CONGEST and congested-clique models,
//! distributed and centralized approximation algorithms for vertex cover and
//! dominating set on `G²`, and generators for gadget-based lower-bound
//! families.

pub mod approx;
pub mod bitset;
pub mod error;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod lowerbound;
pub mod mds;
pub mod mvc;
pub mod rational;
pub mod sim;
pub mod solution;

pub use error::{Error, Result};
pub use graph::{Graph, GraphError, SquareView};
pub use rational::Rational;
pub use solution::{is_feasible, ProblemKind, Solution};
pub mod centralized;
