//! Chip-firing games on undirected and directed multigraphs.
//!
//! The crate covers four connected pieces of machinery:
//!
//! * [`graph`]: multigraph and multidigraph hosts, Laplacians, generators.
//! * [`engine`]: legal games, termination classification and the exact
//!   distance of a chip distribution from the non-terminating ones.
//! * [`feedback`] and [`orientation`]: exact minimum feedback arc sets and
//!   distributions lying under acyclic orientations.
//! * [`divisor`]: linear equivalence, q-reduced divisors, rank,
//!   Riemann–Roch residuals and rank-witness verification.
//!
//! [`reductions`] holds the instance transformations relating these
//! quantities (the split-arc transform of an Eulerian digraph and edge
//! subdivision), and [`oracle`] holds slow brute-force checkers that share
//! nothing with the fast paths beyond the host types.
//!
//! Everything is exact integer arithmetic and exponential where the
//! underlying problems are hard; the searches are meant for small instances.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chips;
pub mod divisor;
pub mod engine;
pub mod enumerate;
mod error;
pub mod feedback;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod orientation;
pub mod reductions;

pub use chips::{ChipDistribution, FiringHost};
pub use divisor::{Divisor, ReducedDivisor};
pub use engine::{Certificate, GameOutcome, Policy};
pub use error::{Error, Result};
pub use feedback::FeedbackArcSet;
pub use graph::{Digraph, Graph};
pub use orientation::Orientation;
pub use reductions::PhiResult;
