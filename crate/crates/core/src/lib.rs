//! Approximation schemes for packing circles into rectangular bins.
//!
//! The crate is organized around an exact-rational geometric core and a
//! configuration-LP pipeline:
//!
//! - [`rat`] — arbitrary-precision rational arithmetic helpers (dyadic square
//!   roots, bounds on pi, parsing).
//! - [`geometry`] — circles, bins, placements, the overlap-tolerant packing
//!   model, an exact verifier and the upward-shifting repair.
//! - [`partition`] — gap-structured partitioning of an instance into groups,
//!   medium-item candidates and levels with per-level bin geometry.
//! - [`nfdh`] — Next-Fit-Decreasing-Height shelf packing of square hulls and
//!   its closed-form guarantees, plus the medium-item packer.
//! - [`configs`] — radius rounding, configuration enumeration, constructive
//!   feasibility checking and free-cell estimates.
//! - [`lp`] — exact rational simplex, the configuration LP builders, the
//!   integer-block solver, balanced re-solving and rounding.
//! - [`assembler`] — end-to-end drivers for knapsack, multiple knapsack,
//!   bin packing, strip packing and minimum container, plus compact
//!   solution descriptions.
//! - [`oracle`] — independent brute-force exact solvers for tiny instances,
//!   used as ground truth in tests.
//! - [`gen`] — seeded random instance generation.

pub mod assembler;
pub mod configs;
pub mod gen;
pub mod geometry;
pub mod instance;
pub mod lp;
pub mod nfdh;
pub mod oracle;
pub mod partition;
pub mod rat;

pub use instance::{Instance, SideConstraint};
pub use rat::Rat;

use thiserror::Error;

/// Errors shared across the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance data (unknown references, nonpositive sizes, ...).
    #[error("input error: {0}")]
    Input(String),
    /// Parameters outside the scheme's assumptions (eps not 1/r, ...).
    #[error("parameter error: {0}")]
    Param(String),
    /// A configurable enumeration or search budget was exhausted.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// An internal invariant that the algorithms guarantee was violated;
    /// this always indicates a bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
