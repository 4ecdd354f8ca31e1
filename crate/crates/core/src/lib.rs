//! Finite characterisations of positive modal formulas by examples.
//!
//! The crate builds positive and negative example sets for formulas over
//! `□, ◇, ∧, ∨`, and ships independent oracles (a tableau for modal K,
//! bounded enumerators, simulation checkers) to verify them.

pub mod characterize;
pub mod cli;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod normalform;
pub mod oracle;
pub mod random;
pub mod simulation;

pub use error::{Error, Result};
pub use formula::{parse_formula, Formula, Fragment, Grammar, PropSignature, UniformSignature};
pub use kripke::{modelcheck, Height, Loopstate, PointedModel, PropSet};
