//! JSON formats, modulus conversion and command execution for the
//! `crosshull` binary.

pub mod format;
pub mod modulus;
mod run;

pub use run::{run, Command, Outcome, RunConfig, RunError};
