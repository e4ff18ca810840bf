//! Counting, sampling and canonicalizing cyclic words in free groups, and the
//! tools built on top of them: relabeling/rotation/inversion orbit censuses,
//! genericity and small-cancellation testers, presentation length functionals
//! and encodings, Dehn's algorithm, bounded isomorphism search, relator
//! recovery, and a compression-based complexity estimator.

pub mod cli;
pub mod complexity;
pub mod error;
pub mod genericity;
pub mod presentations;
pub mod symmetry;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use words::{CyclicWord, Letter, Word, WordSet};
