//! Exact convex extremal functions, convex hulls of crosses and envelopes of
//! holomorphy of Reinhardt domains.
//!
//! Every number in this crate is an exact [`Rational`]; every geometric
//! predicate reduces to the rational simplex kernel in [`ratlp`]. Open sets
//! are represented by their closures, and strict/non-strict distinctions are
//! made by exact comparisons of extremal-function values.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, decimal
//! conversions and the command-line front end live in `crosshull-cli`.

#![no_std]

extern crate alloc;

pub mod cross;
mod error;
pub mod extremal;
mod linalg;
pub mod polytope;
pub mod random;
pub mod ratlp;
pub mod reinhardt;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use ratlp::{Constraint, LpOutcome, LpProblem, LpSolution, Rational};
