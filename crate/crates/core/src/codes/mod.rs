//! The computational substrate: Gödel-numbered programs, Kleene
//! application relative to a finite-partial-function oracle, numeric
//! pairing, s-m-n specialization and the recursion theorem.

pub mod build;
pub mod encode;
pub mod expr;
pub mod machine;
pub mod oracle;
pub mod pairing;

pub use build::{build, chain, chain_code, fixpoint, lam, smn, var, BuildError};
pub use encode::{decode, encode};
pub use expr::{Closure, CodeExpr, PrimOp};
pub use machine::{apply, apply_chain, apply_shared, EvalResult, Fuel};
pub use oracle::Oracle;
pub use pairing::{component, pair, proj, tuple, unpair};
