//! Structural-convergence machinery on finite relational structures.
//!
//! The crate is organized bottom-up:
//!
//! * [`structure`]: signatures, structures, the Gaifman graph, balls and
//!   canonical forms of small structures.
//! * [`logic`]: first-order formulas, parsing, normalization and fragment
//!   classification.
//! * [`eval`]: model checking and Stone pairings.
//! * [`interp`]: interpretations acting on formulas and on structures.
//! * [`metrics`]: ball-type distributions, total variation and the
//!   chain-covering pseudometric.
//! * [`lifts`]: monadic lifts and the lift-Hausdorff distance.
//! * [`analysis`]: equivalence certificates, expansion, Hall ratio and
//!   cluster diagnostics.
//! * [`generate`] and [`report`]: structure families and convergence tables.

pub mod analysis;
pub mod error;
pub mod eval;
pub mod generate;
pub mod interp;
pub mod lifts;
pub mod logic;
pub mod metrics;
pub mod rational;
pub mod report;
pub mod structure;

pub use error::{Error, Result};
pub use logic::Formula;
pub use rational::Rational;
pub use structure::{Signature, Structure, VertexSet};
