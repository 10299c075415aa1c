//! An executable realizability kernel for extensional finite-type
//! arithmetic with choice.
//!
//! The crate checks Hilbert-style derivations over finite types, compiles
//! them to numeric realizers run by a Kleene-style index machine with a
//! finite-partial-function oracle, and decides forcing and realizability
//! relations exactly over bounded universes of conditions, including the
//! self-realizing construction for first-order sentences.
//!
//! - [`syntax`]: types, terms, formulas, derivations and their checker.
//! - [`codes`]: the index machine and its Gödel numbering.
//! - [`valuation`]: values of closed terms relative to an oracle.
//! - [`heo`]: extensional equality of indices over bounded universes.
//! - [`realizability`]: the pair-forcing and typed realizability checks.
//! - [`extraction`]: derivation-to-realizer compilation.
//! - [`selfreal`]: bounded truth, self-realizing indices, round trips.

pub mod codes;
pub mod corpus;
pub mod extraction;
pub mod heo;
pub mod realizability;
pub mod selfreal;
pub mod syntax;
pub mod valuation;

/// Machine values and code numbers are arbitrary-size naturals.
pub type Nat = num_bigint::BigUint;

pub use codes::{apply, CodeExpr, EvalResult, Oracle};
pub use heo::{ForcingUniverse, Verdict};
