//! Terms of the object language and of its oracle-indexed extensions.
//!
//! A term is an L-term when it mentions no index constant `F[a:A]`; it is
//! first-order when it is built from `N`-variables, zero, successor and
//! primitive recursive function symbols only.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::signature::Signature;
use super::ty::Type;
use crate::Nat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String, Type),
    Zero,
    /// The successor constant of type `N -> N`.
    Succ,
    /// A primitive recursive function symbol applied to first-order args.
    Prim(String, Vec<Term>),
    /// Constant combinator, instance `A -> B -> A`.
    CombK(Type, Type),
    /// Substitution combinator, instance `(A->B->C) -> (A->B) -> A -> C`.
    CombS(Type, Type, Type),
    /// Recursor, instance `A -> (A->N->A) -> N -> A`.
    Rec(Type),
    /// Pairing, instance `A -> B -> A*B`.
    PairC(Type, Type),
    Proj0(Type, Type),
    Proj1(Type, Type),
    App(Box<Term>, Box<Term>),
    /// Index constant `F[a:A]`.
    Heo(Nat, Type),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("application of non-arrow term of type {0}")]
    NotAnArrow(Type),
    #[error("argument type {found} does not match domain {expected}")]
    ArgMismatch { expected: Type, found: Type },
    #[error("unknown function symbol {0}")]
    UnknownSymbol(String),
    #[error("symbol {0} applied to {1} arguments, expects {2}")]
    Arity(String, usize, usize),
    #[error("first-order argument of type {0}, expected N")]
    NotFirstOrderArg(Type),
    #[error("equation at type {0} relates terms of types {1} and {2}")]
    EqMismatch(Type, Type, Type),
    #[error("variable {0} used at both {1} and {2}")]
    InconsistentVar(String, Type, Type),
}

impl Term {
    pub fn app(f: Term, x: Term) -> Term {
        Term::App(Box::new(f), Box::new(x))
    }

    pub fn apps(f: Term, args: Vec<Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn succ_of(t: Term) -> Term {
        Term::app(Term::Succ, t)
    }

    /// The numeral `S(S(...(0)))`.
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::Zero;
        for _ in 0..n {
            t = Term::succ_of(t);
        }
        t
    }

    pub fn var(name: &str, ty: Type) -> Term {
        Term::Var(name.to_string(), ty)
    }

    pub fn nvar(name: &str) -> Term {
        Term::Var(name.to_string(), Type::Nat)
    }

    /// The unique sort of the term.
    pub fn sort(&self, sig: &Signature) -> Result<Type, SortError> {
        match self {
            Term::Var(_, ty) | Term::Heo(_, ty) => Ok(ty.clone()),
            Term::Zero => Ok(Type::Nat),
            Term::Succ => Ok(Type::arrow(Type::Nat, Type::Nat)),
            Term::Prim(name, args) => {
                let def = sig
                    .get(name)
                    .ok_or_else(|| SortError::UnknownSymbol(name.clone()))?;
                if args.len() != def.arity {
                    return Err(SortError::Arity(name.clone(), args.len(), def.arity));
                }
                for a in args {
                    let t = a.sort(sig)?;
                    if t != Type::Nat {
                        return Err(SortError::NotFirstOrderArg(t));
                    }
                }
                Ok(Type::Nat)
            }
            Term::CombK(a, b) => Ok(Type::arrows(&[a.clone(), b.clone()], a.clone())),
            Term::CombS(a, b, c) => Ok(Type::arrows(
                &[
                    Type::arrow(a.clone(), Type::arrow(b.clone(), c.clone())),
                    Type::arrow(a.clone(), b.clone()),
                    a.clone(),
                ],
                c.clone(),
            )),
            Term::Rec(a) => Ok(Type::arrows(
                &[
                    a.clone(),
                    Type::arrows(&[a.clone(), Type::Nat], a.clone()),
                    Type::Nat,
                ],
                a.clone(),
            )),
            Term::PairC(a, b) => Ok(Type::arrows(
                &[a.clone(), b.clone()],
                Type::prod(a.clone(), b.clone()),
            )),
            Term::Proj0(a, b) => Ok(Type::arrow(Type::prod(a.clone(), b.clone()), a.clone())),
            Term::Proj1(a, b) => Ok(Type::arrow(Type::prod(a.clone(), b.clone()), b.clone())),
            Term::App(f, x) => match f.sort(sig)? {
                Type::Arrow(dom, cod) => {
                    let xt = x.sort(sig)?;
                    if xt == *dom {
                        Ok(*cod)
                    } else {
                        Err(SortError::ArgMismatch {
                            expected: *dom,
                            found: xt,
                        })
                    }
                }
                other => Err(SortError::NotAnArrow(other)),
            },
        }
    }

    /// No `F[a:A]` constants anywhere.
    pub fn is_l_term(&self) -> bool {
        match self {
            Term::Heo(_, _) => false,
            Term::App(f, x) => f.is_l_term() && x.is_l_term(),
            Term::Prim(_, args) => args.iter().all(Term::is_l_term),
            _ => true,
        }
    }

    /// Built from `N`-variables, `0`, `S` applications and function symbols.
    pub fn is_first_order(&self) -> bool {
        match self {
            Term::Var(_, ty) => *ty == Type::Nat,
            Term::Zero => true,
            Term::App(f, x) => **f == Term::Succ && x.is_first_order(),
            Term::Prim(_, args) => args.iter().all(Term::is_first_order),
            _ => false,
        }
    }

    pub fn collect_free_vars(&self, out: &mut Vec<(String, Type)>) {
        match self {
            Term::Var(name, ty) => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), ty.clone()));
                }
            }
            Term::App(f, x) => {
                f.collect_free_vars(out);
                x.collect_free_vars(out);
            }
            Term::Prim(_, args) => {
                for a in args {
                    a.collect_free_vars(out);
                }
            }
            _ => {}
        }
    }

    pub fn free_vars(&self) -> Vec<(String, Type)> {
        let mut out = Vec::new();
        self.collect_free_vars(&mut out);
        out
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        self.free_vars().iter().any(|(n, _)| n == name)
    }

    /// Replace the variable by a term of the same sort.
    pub fn substitute(&self, name: &str, repl: &Term) -> Term {
        match self {
            Term::Var(n, _) if n == name => repl.clone(),
            Term::App(f, x) => Term::app(f.substitute(name, repl), x.substitute(name, repl)),
            Term::Prim(sym, args) => Term::Prim(
                sym.clone(),
                args.iter().map(|a| a.substitute(name, repl)).collect(),
            ),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name, _) => write!(f, "{name}"),
            Term::Zero => write!(f, "0"),
            Term::Succ => write!(f, "S"),
            Term::Prim(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Term::CombK(a, b) => write!(f, "K[{a},{b}]"),
            Term::CombS(a, b, c) => write!(f, "Sig[{a},{b},{c}]"),
            Term::Rec(a) => write!(f, "R[{a}]"),
            Term::PairC(a, b) => write!(f, "D[{a},{b}]"),
            Term::Proj0(a, b) => write!(f, "D0[{a},{b}]"),
            Term::Proj1(a, b) => write!(f, "D1[{a},{b}]"),
            Term::App(g, x) => {
                if **g == Term::Succ {
                    write!(f, "S({x})")
                } else {
                    write!(f, "app({g},{x})")
                }
            }
            Term::Heo(a, ty) => write!(f, "F[{a}:{ty}]"),
        }
    }
}
