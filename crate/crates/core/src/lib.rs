//! Exact computer algebra for low-dimensional Lie algebras and G2-structures.
//!
//! The crate computes Chevalley-Eilenberg cohomology, unimodularity traces,
//! derivation spaces and induced actions on cohomology with exact rational
//! (and, where needed, Q(sqrt 3)) arithmetic, and uses them to decide whether
//! a rank-one solvable extension of a six-dimensional nilpotent algebra can
//! carry a closed or exact G2-structure.  Every decision is made over exact
//! scalars; there is no floating point anywhere in the verdict paths.

pub mod catalog;
pub mod classify;
pub mod derivations;
pub mod error;
pub mod exterior;
pub mod g2;
pub mod liealg;
pub mod notation;
pub mod report;
pub mod ring;
pub mod rng;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
