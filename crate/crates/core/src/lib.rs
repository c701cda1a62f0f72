//! Star-shaped sets evolving by volume-penalized mean curvature flow.
//!
//! The library is organized around a radial-graph representation of
//! star-shaped planar sets ([`starset`]), a constrained minimizing-movement
//! scheme for the flow `V = -H + (1 - |Omega|)/delta` ([`flow`]), sampled
//! verifiers for the geometric properties the scheme relies on
//! ([`geochecks`]), closed-form radial oracles and barrier constructions
//! ([`barriers`]), and generators for the negative examples where the
//! comparison estimates break down ([`counterexamples`]).

pub mod barriers;
pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod flow;
pub mod geochecks;
pub mod starset;

pub use error::StarflowError;
pub use starset::{DirectionGrid, RadialSet};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, StarflowError>;
