//! Formulas, free variables, capture-avoiding substitution.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::signature::Signature;
use super::term::{SortError, Term};
use super::ty::Type;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Eq(Type, Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Exists(String, Type, Box<Formula>),
    Forall(String, Type, Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("substituting a term of type {found} for {var} of type {expected}")]
    SortMismatch {
        var: String,
        expected: Type,
        found: Type,
    },
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, ty: Type, body: Formula) -> Formula {
        Formula::Exists(x.to_string(), ty, Box::new(body))
    }

    pub fn forall(x: &str, ty: Type, body: Formula) -> Formula {
        Formula::Forall(x.to_string(), ty, Box::new(body))
    }

    pub fn eq_n(l: Term, r: Term) -> Formula {
        Formula::Eq(Type::Nat, l, r)
    }

    /// The canonical absurdity `0 = S0`.
    pub fn falsum() -> Formula {
        Formula::eq_n(Term::Zero, Term::numeral(1))
    }

    /// Derived negation `phi -> 0 = S0`.
    pub fn neg(phi: Formula) -> Formula {
        Formula::imp(phi, Formula::falsum())
    }

    /// Free variables in order of first occurrence, left to right.
    pub fn free_vars(&self) -> Vec<(String, Type)> {
        let mut out = Vec::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut Vec<(String, Type)>) {
        match self {
            Formula::Eq(_, l, r) => {
                let mut raw = Vec::new();
                l.collect_free_vars(&mut raw);
                r.collect_free_vars(&mut raw);
                for (n, t) in raw {
                    if !bound.contains(&n) && !out.iter().any(|(m, _)| *m == n) {
                        out.push((n, t));
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Formula::Exists(x, _, body) | Formula::Forall(x, _, body) => {
                bound.push(x.clone());
                body.collect_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn mentions_free(&self, name: &str) -> bool {
        self.free_vars().iter().any(|(n, _)| n == name)
    }

    /// All quantifiers at `N` and all terms first-order.
    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::Eq(ty, l, r) => *ty == Type::Nat && l.is_first_order() && r.is_first_order(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_first_order() && b.is_first_order()
            }
            Formula::Exists(_, ty, body) | Formula::Forall(_, ty, body) => {
                *ty == Type::Nat && body.is_first_order()
            }
        }
    }

    /// No index constants: a formula of the base language.
    pub fn is_l_formula(&self) -> bool {
        match self {
            Formula::Eq(_, l, r) => l.is_l_term() && r.is_l_term(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.is_l_formula() && b.is_l_formula()
            }
            Formula::Exists(_, _, body) | Formula::Forall(_, _, body) => body.is_l_formula(),
        }
    }

    /// Well-sortedness: equations relate terms of the annotated type and
    /// variable occurrences are consistently typed.
    pub fn check_sorts(&self, sig: &Signature) -> Result<(), SortError> {
        self.check_sorts_under(sig, &mut BTreeMap::new())
    }

    fn check_sorts_under(
        &self,
        sig: &Signature,
        env: &mut BTreeMap<String, Vec<Type>>,
    ) -> Result<(), SortError> {
        match self {
            Formula::Eq(ty, l, r) => {
                for side in [l, r] {
                    for (n, t) in side.free_vars() {
                        if let Some(stack) = env.get(&n) {
                            if let Some(bound_ty) = stack.last() {
                                if *bound_ty != t {
                                    return Err(SortError::InconsistentVar(n, bound_ty.clone(), t));
                                }
                            }
                        }
                    }
                }
                let lt = l.sort(sig)?;
                let rt = r.sort(sig)?;
                if lt != *ty || rt != *ty {
                    return Err(SortError::EqMismatch(ty.clone(), lt, rt));
                }
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.check_sorts_under(sig, env)?;
                b.check_sorts_under(sig, env)
            }
            Formula::Exists(x, ty, body) | Formula::Forall(x, ty, body) => {
                env.entry(x.clone()).or_default().push(ty.clone());
                let r = body.check_sorts_under(sig, env);
                env.get_mut(x).unwrap().pop();
                r
            }
        }
    }

    /// Capture-avoiding substitution of `repl` for the free variable.
    /// Binders that would capture variables of `repl` are renamed with the
    /// smallest numeric suffix that is fresh.
    pub fn substitute(&self, name: &str, repl: &Term) -> Result<Formula, SubstError> {
        let repl_vars: Vec<String> = repl.free_vars().into_iter().map(|(n, _)| n).collect();
        Ok(self.subst_inner(name, repl, &repl_vars))
    }

    /// Substitution that also checks the sort of the replacement against
    /// the variable occurrences it replaces.
    pub fn substitute_sorted(
        &self,
        name: &str,
        repl: &Term,
        sig: &Signature,
    ) -> Result<Formula, SubstError> {
        if let Some(expected) = self.var_type(name) {
            let found = repl.sort(sig).map_err(|_| SubstError::SortMismatch {
                var: name.to_string(),
                expected: expected.clone(),
                found: Type::Nat,
            })?;
            if found != expected {
                return Err(SubstError::SortMismatch {
                    var: name.to_string(),
                    expected,
                    found,
                });
            }
        }
        self.substitute(name, repl)
    }

    /// The type at which a free variable occurs, if it does.
    pub fn var_type(&self, name: &str) -> Option<Type> {
        self.free_vars()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    fn subst_inner(&self, name: &str, repl: &Term, avoid: &[String]) -> Formula {
        match self {
            Formula::Eq(ty, l, r) => Formula::Eq(
                ty.clone(),
                l.substitute(name, repl),
                r.substitute(name, repl),
            ),
            Formula::And(a, b) => Formula::and(
                a.subst_inner(name, repl, avoid),
                b.subst_inner(name, repl, avoid),
            ),
            Formula::Or(a, b) => Formula::or(
                a.subst_inner(name, repl, avoid),
                b.subst_inner(name, repl, avoid),
            ),
            Formula::Imp(a, b) => Formula::imp(
                a.subst_inner(name, repl, avoid),
                b.subst_inner(name, repl, avoid),
            ),
            Formula::Exists(x, ty, body) | Formula::Forall(x, ty, body) => {
                let is_exists = matches!(self, Formula::Exists(..));
                let rebuild = |x: String, ty: Type, b: Formula| {
                    if is_exists {
                        Formula::Exists(x, ty, Box::new(b))
                    } else {
                        Formula::Forall(x, ty, Box::new(b))
                    }
                };
                if x == name {
                    // Bound here; nothing to substitute below.
                    return self.clone();
                }
                if avoid.contains(x) && body.mentions_free(name) {
                    // The binder would capture a variable of the
                    // replacement: rename it first.
                    let fresh = fresh_name(x, |cand| {
                        !avoid.contains(&cand.to_string())
                            && cand != name
                            && !body.mentions_free(cand)
                    });
                    let renamed = body.subst_inner(x, &Term::Var(fresh.clone(), ty.clone()), &[]);
                    rebuild(fresh, ty.clone(), renamed.subst_inner(name, repl, avoid))
                } else {
                    rebuild(x.clone(), ty.clone(), body.subst_inner(name, repl, avoid))
                }
            }
        }
    }
}

/// `base1`, `base2`, ... — the smallest suffix passing the freshness test.
pub fn fresh_name(base: &str, is_ok: impl Fn(&str) -> bool) -> String {
    for i in 1u32.. {
        let cand = format!("{base}{i}");
        if is_ok(&cand) {
            return cand;
        }
    }
    unreachable!()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Formula {
    // Precedence: -> is 0 (right assoc), | is 1, & is 2, atoms 3.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            Formula::Eq(ty, l, r) => write!(f, "{l} ={ty} {r}"),
            Formula::Imp(a, b) => {
                let need = prec > 0;
                if need {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 1)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 0)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Or(a, b) => {
                let need = prec > 1;
                if need {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 1)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::And(a, b) => {
                let need = prec > 2;
                if need {
                    write!(f, "(")?;
                }
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 2)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Exists(x, ty, body) => {
                let need = prec > 0;
                if need {
                    write!(f, "(")?;
                }
                write!(f, "exists {x}:{ty}. ")?;
                body.fmt_prec(f, 0)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Forall(x, ty, body) => {
                let need = prec > 0;
                if need {
                    write!(f, "(")?;
                }
                write!(f, "forall {x}:{ty}. ")?;
                body.fmt_prec(f, 0)?;
                if need {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::nvar("x")
    }

    #[test]
    fn substitute_into_atom() {
        // (x =N x)[S0/x] = S0 =N S0
        let phi = Formula::eq_n(x(), x());
        let got = phi.substitute("x", &Term::numeral(1)).unwrap();
        assert_eq!(got, Formula::eq_n(Term::numeral(1), Term::numeral(1)));
    }

    #[test]
    fn substitute_avoids_capture() {
        // (forall x. y =N x)[x/y]: the binder must be renamed.
        let phi = Formula::forall("x", Type::Nat, Formula::eq_n(Term::nvar("y"), x()));
        let got = phi.substitute("y", &x()).unwrap();
        match &got {
            Formula::Forall(b, _, body) => {
                assert_ne!(b, "x");
                assert_eq!(**body, Formula::eq_n(x(), Term::nvar(b)));
            }
            other => panic!("unexpected shape {other}"),
        }
    }

    #[test]
    fn substitute_at_bound_variable_is_identity() {
        let phi = Formula::forall("x", Type::Nat, Formula::eq_n(x(), x()));
        assert_eq!(phi.substitute("x", &Term::Zero).unwrap(), phi);
    }

    #[test]
    fn free_variable_law_under_substitution() {
        // FV(phi[t/x]) = (FV(phi) \ {x}) U FV(t) when x occurs free.
        let phi = Formula::and(
            Formula::eq_n(x(), Term::nvar("y")),
            Formula::exists("z", Type::Nat, Formula::eq_n(Term::nvar("z"), x())),
        );
        let t = Term::Prim("add".into(), vec![Term::nvar("u"), Term::nvar("y")]);
        let got = phi.substitute("x", &t).unwrap();
        let mut names: Vec<String> = got.free_vars().into_iter().map(|(n, _)| n).collect();
        names.sort();
        assert_eq!(names, ["u", "y"]);
    }

    #[test]
    fn substituting_index_constants_leaves_the_base_language() {
        let phi = Formula::eq_n(x(), x());
        let c = Term::Heo(crate::codes::pairing::nat(7), Type::Nat);
        let got = phi.substitute("x", &c).unwrap();
        assert!(!got.is_l_formula());
        assert!(phi.is_l_formula());
    }

    #[test]
    fn display_parses_back() {
        use crate::syntax::parse::parse_formula_with;
        let sig = Signature::standard();
        let phi = Formula::imp(
            Formula::or(
                Formula::eq_n(Term::Zero, Term::Zero),
                Formula::and(Formula::falsum(), Formula::eq_n(x(), x())),
            ),
            Formula::forall(
                "f",
                Type::arrow(Type::Nat, Type::Nat),
                Formula::exists(
                    "y",
                    Type::Nat,
                    Formula::eq_n(
                        Term::app(Term::var("f", Type::arrow(Type::Nat, Type::Nat)), x()),
                        Term::nvar("y"),
                    ),
                ),
            ),
        );
        let printed = phi.to_string();
        let vars = [("x".to_string(), Type::Nat)];
        let parsed = parse_formula_with(&printed, &sig, &vars).unwrap();
        assert_eq!(parsed, phi, "roundtrip of {printed}");
    }
}
