//! Object-language representation: finite types, terms, formulas,
//! first-order fragment, and Hilbert-style derivations.

pub mod derivation;
pub mod formula;
pub mod parse;
pub mod signature;
pub mod subformula;
pub mod term;
pub mod ty;

pub use derivation::{check_derivation, parse_proof, CheckError, Derivation, Payload};
pub use formula::{Formula, SubstError};
pub use parse::{
    parse_formula, parse_formula_with, parse_term, parse_term_with, parse_type, ParseError,
};
pub use signature::{PrimDef, Signature};
pub use subformula::{rename_apart, subformula_table, SubformulaEntry, SubformulaError};
pub use term::{SortError, Term};
pub use ty::Type;
