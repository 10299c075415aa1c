//! Primitive recursive function symbols: arities, built-in evaluators and
//! defining equations.

use std::collections::BTreeMap;

use crate::codes::PrimOp;
use crate::Nat;

use super::term::Term;

#[derive(Debug, Clone)]
pub struct PrimDef {
    pub name: String,
    pub arity: usize,
    pub op: PrimOp,
    /// Defining equation templates (lhs, rhs) over `N`-variables. Any
    /// substitution instance of one of these is an axiom of the theory.
    pub equations: Vec<(Term, Term)>,
}

#[derive(Debug, Clone)]
pub struct Signature {
    defs: BTreeMap<String, PrimDef>,
}

impl Signature {
    /// The standard signature: successor, predecessor, addition,
    /// multiplication, truncated subtraction, the characteristic function
    /// of equality, maximum, and the characteristic function of <.
    pub fn standard() -> Self {
        let x = || Term::nvar("x");
        let y = || Term::nvar("y");
        let s = Term::succ_of;
        let p1 = |name: &str, t: Term| Term::Prim(name.to_string(), vec![t]);
        let p2 = |name: &str, a: Term, b: Term| Term::Prim(name.to_string(), vec![a, b]);

        let mut sig = Signature {
            defs: BTreeMap::new(),
        };
        let mut def = |name: &str, arity: usize, op: PrimOp, eqs: Vec<(Term, Term)>| {
            sig.defs.insert(
                name.to_string(),
                PrimDef {
                    name: name.to_string(),
                    arity,
                    op,
                    equations: eqs,
                },
            );
        };

        def("succ", 1, PrimOp::Succ, vec![(p1("succ", x()), s(x()))]);
        def(
            "pred",
            1,
            PrimOp::Pred,
            vec![
                (p1("pred", Term::Zero), Term::Zero),
                (p1("pred", s(x())), x()),
            ],
        );
        def(
            "add",
            2,
            PrimOp::Add,
            vec![
                (p2("add", x(), Term::Zero), x()),
                (p2("add", x(), s(y())), s(p2("add", x(), y()))),
            ],
        );
        def(
            "mul",
            2,
            PrimOp::Mul,
            vec![
                (p2("mul", x(), Term::Zero), Term::Zero),
                (p2("mul", x(), s(y())), p2("add", p2("mul", x(), y()), x())),
            ],
        );
        def(
            "sub",
            2,
            PrimOp::Sub,
            vec![
                (p2("sub", x(), Term::Zero), x()),
                (p2("sub", x(), s(y())), p1("pred", p2("sub", x(), y()))),
            ],
        );
        def(
            "eq",
            2,
            PrimOp::Eq,
            vec![
                (p2("eq", Term::Zero, Term::Zero), Term::numeral(1)),
                (p2("eq", s(x()), Term::Zero), Term::Zero),
                (p2("eq", Term::Zero, s(y())), Term::Zero),
                (p2("eq", s(x()), s(y())), p2("eq", x(), y())),
            ],
        );
        def(
            "max",
            2,
            PrimOp::Max,
            vec![
                (p2("max", x(), Term::Zero), x()),
                (p2("max", Term::Zero, y()), y()),
                (p2("max", s(x()), s(y())), s(p2("max", x(), y()))),
            ],
        );
        def(
            "lt",
            2,
            PrimOp::Lt,
            vec![
                (p2("lt", x(), Term::Zero), Term::Zero),
                (p2("lt", Term::Zero, s(y())), Term::numeral(1)),
                (p2("lt", s(x()), s(y())), p2("lt", x(), y())),
            ],
        );
        sig
    }

    pub fn get(&self, name: &str) -> Option<&PrimDef> {
        self.defs.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    pub fn evaluate(&self, name: &str, args: &[Nat]) -> Option<Nat> {
        let def = self.defs.get(name)?;
        if args.len() != def.arity {
            return None;
        }
        Some(def.op.eval(args))
    }

    pub fn op_of(&self, name: &str) -> Option<PrimOp> {
        self.defs.get(name).map(|d| d.op)
    }

    /// All defining equations of all symbols.
    pub fn equations(&self) -> impl Iterator<Item = &(Term, Term)> {
        self.defs.values().flat_map(|d| d.equations.iter())
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::pairing::nat;

    #[test]
    fn evaluators_match_equations_pointwise() {
        let sig = Signature::standard();
        assert_eq!(sig.evaluate("add", &[nat(3), nat(4)]), Some(nat(7)));
        assert_eq!(sig.evaluate("sub", &[nat(2), nat(5)]), Some(nat(0)));
        assert_eq!(sig.evaluate("eq", &[nat(2), nat(2)]), Some(nat(1)));
        assert_eq!(sig.evaluate("eq", &[nat(2), nat(3)]), Some(nat(0)));
        assert_eq!(sig.evaluate("max", &[nat(2), nat(9)]), Some(nat(9)));
        assert_eq!(sig.evaluate("lt", &[nat(2), nat(9)]), Some(nat(1)));
        assert_eq!(sig.evaluate("lt", &[nat(9), nat(2)]), Some(nat(0)));
        assert_eq!(sig.evaluate("pred", &[nat(0)]), Some(nat(0)));
        assert_eq!(sig.evaluate("add", &[nat(3)]), None);
    }
}
