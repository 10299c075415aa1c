//! Enumeration of subformula occurrences with their variable lists.

use thiserror::Error;

use super::formula::{fresh_name, Formula};
use super::term::Term;
use super::ty::Type;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubformulaError {
    #[error("formula is not first-order")]
    NotFirstOrder,
}

/// One row of the table: a subformula occurrence and the variable list it
/// is indexed by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaEntry {
    pub formula: Formula,
    pub vars: Vec<(String, Type)>,
}

/// All subformula occurrences of a first-order formula in preorder, the
/// formula itself first.
///
/// Bound variables are renamed apart first (deterministically, smallest
/// numeric suffix), so the lists are well defined: children of a
/// connective share the parent's list and the child of a quantifier
/// extends it by the bound variable.
pub fn subformula_table(phi: &Formula) -> Result<Vec<SubformulaEntry>, SubformulaError> {
    if !phi.is_first_order() {
        return Err(SubformulaError::NotFirstOrder);
    }
    let renamed = rename_apart(phi);
    let mut out = Vec::new();
    walk(&renamed, &renamed.free_vars(), &mut out);
    Ok(out)
}

fn walk(phi: &Formula, vars: &[(String, Type)], out: &mut Vec<SubformulaEntry>) {
    out.push(SubformulaEntry {
        formula: phi.clone(),
        vars: vars.to_vec(),
    });
    match phi {
        Formula::Eq(..) => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            walk(a, vars, out);
            walk(b, vars, out);
        }
        Formula::Exists(x, ty, body) | Formula::Forall(x, ty, body) => {
            let mut extended = vars.to_vec();
            extended.push((x.clone(), ty.clone()));
            walk(body, &extended, out);
        }
    }
}

/// Rename binders so that all bound variables are distinct from each other
/// and from every free variable.
pub fn rename_apart(phi: &Formula) -> Formula {
    let mut used: Vec<String> = phi.free_vars().into_iter().map(|(n, _)| n).collect();
    go(phi, &mut used)
}

fn go(phi: &Formula, used: &mut Vec<String>) -> Formula {
    match phi {
        Formula::Eq(..) => phi.clone(),
        Formula::And(a, b) => Formula::and(go(a, used), go(b, used)),
        Formula::Or(a, b) => Formula::or(go(a, used), go(b, used)),
        Formula::Imp(a, b) => Formula::imp(go(a, used), go(b, used)),
        Formula::Exists(x, ty, body) | Formula::Forall(x, ty, body) => {
            let is_exists = matches!(phi, Formula::Exists(..));
            let (name, inner) = if used.contains(x) {
                let fresh = fresh_name(x, |cand| !used.iter().any(|u| u == cand));
                let renamed = body
                    .substitute(x, &Term::Var(fresh.clone(), ty.clone()))
                    .expect("renaming is sort-preserving");
                (fresh, renamed)
            } else {
                (x.clone(), (**body).clone())
            };
            used.push(name.clone());
            let rec = go(&inner, used);
            if is_exists {
                Formula::Exists(name, ty.clone(), Box::new(rec))
            } else {
                Formula::Forall(name, ty.clone(), Box::new(rec))
            }
        }
    }
}

#[cfg(test)]
fn count_nodes(phi: &Formula) -> usize {
    match phi {
        Formula::Eq(..) => 1,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            1 + count_nodes(a) + count_nodes(b)
        }
        Formula::Exists(_, _, b) | Formula::Forall(_, _, b) => 1 + count_nodes(b),
    }
}
