//! Program syntax for the index machine.

use serde::{Deserialize, Serialize};

use crate::Nat;

/// Built-in total arithmetic available to machine programs. The object
/// language's primitive recursive function symbols evaluate through these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimOp {
    Succ,
    Pred,
    Add,
    Mul,
    /// Truncated subtraction.
    Sub,
    /// 1 if equal, 0 otherwise.
    Eq,
    Max,
    /// 1 if strictly less, 0 otherwise.
    Lt,
}

impl PrimOp {
    pub fn arity(self) -> usize {
        match self {
            PrimOp::Succ | PrimOp::Pred => 1,
            _ => 2,
        }
    }

    pub fn eval(self, args: &[Nat]) -> Nat {
        use num_traits::{One, Zero};
        match self {
            PrimOp::Succ => &args[0] + 1u32,
            PrimOp::Pred => {
                if args[0].is_zero() {
                    Nat::zero()
                } else {
                    &args[0] - 1u32
                }
            }
            PrimOp::Add => &args[0] + &args[1],
            PrimOp::Mul => &args[0] * &args[1],
            PrimOp::Sub => {
                if args[0] >= args[1] {
                    &args[0] - &args[1]
                } else {
                    Nat::zero()
                }
            }
            PrimOp::Eq => {
                if args[0] == args[1] {
                    Nat::one()
                } else {
                    Nat::zero()
                }
            }
            PrimOp::Max => args[0].clone().max(args[1].clone()),
            PrimOp::Lt => {
                if args[0] < args[1] {
                    Nat::one()
                } else {
                    Nat::zero()
                }
            }
        }
    }

    pub fn all() -> &'static [PrimOp] {
        &[
            PrimOp::Succ,
            PrimOp::Pred,
            PrimOp::Add,
            PrimOp::Mul,
            PrimOp::Sub,
            PrimOp::Eq,
            PrimOp::Max,
            PrimOp::Lt,
        ]
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            PrimOp::Succ => 0,
            PrimOp::Pred => 1,
            PrimOp::Add => 2,
            PrimOp::Mul => 3,
            PrimOp::Sub => 4,
            PrimOp::Eq => 5,
            PrimOp::Max => 6,
            PrimOp::Lt => 7,
        }
    }

    pub(crate) fn from_tag(t: u8) -> Option<PrimOp> {
        PrimOp::all().get(t as usize).copied()
    }
}

/// Body syntax of a one-argument closure.
///
/// `Apply` is Kleene application under the oracle of the current call:
/// the function position evaluates to a number which is decoded as a
/// closure and run on the argument value. `Close` evaluates its capture
/// list now and yields the number of the resulting closure. `SelfRef`
/// is the number of the closure currently executing, which is what makes
/// recursive definitions expressible without quoting.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "node", content = "args")]
pub enum CodeExpr {
    /// The current closure's argument.
    Arg,
    /// The i-th captured value of the current closure.
    Env(usize),
    /// A literal number.
    Num(Nat),
    /// Built-in arithmetic applied to evaluated subexpressions.
    Prim(PrimOp, Vec<CodeExpr>),
    /// Cantor pair of the two values.
    Pair(Box<CodeExpr>, Box<CodeExpr>),
    /// Raw Cantor projection, `i` is 0 or 1.
    Proj(u8, Box<CodeExpr>),
    /// Branch on the condition value being zero.
    IfZero(Box<CodeExpr>, Box<CodeExpr>, Box<CodeExpr>),
    /// Kleene application under the current oracle.
    Apply(Box<CodeExpr>, Box<CodeExpr>),
    /// Query the oracle at the value of the subexpression.
    Oracle(Box<CodeExpr>),
    /// Build a closure: evaluate captures now, return its number.
    Close(Box<CodeExpr>, Vec<CodeExpr>),
    /// The number of the currently executing closure.
    SelfRef,
}

impl CodeExpr {
    pub fn apply(f: CodeExpr, x: CodeExpr) -> CodeExpr {
        CodeExpr::Apply(Box::new(f), Box::new(x))
    }

    pub fn pair_of(a: CodeExpr, b: CodeExpr) -> CodeExpr {
        CodeExpr::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj0(e: CodeExpr) -> CodeExpr {
        CodeExpr::Proj(0, Box::new(e))
    }

    pub fn proj1(e: CodeExpr) -> CodeExpr {
        CodeExpr::Proj(1, Box::new(e))
    }

    pub fn num(n: u64) -> CodeExpr {
        CodeExpr::Num(Nat::from(n))
    }

    pub fn lit(n: &Nat) -> CodeExpr {
        CodeExpr::Num(n.clone())
    }

    pub fn if_zero(c: CodeExpr, t: CodeExpr, e: CodeExpr) -> CodeExpr {
        CodeExpr::IfZero(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn oracle_at(e: CodeExpr) -> CodeExpr {
        CodeExpr::Oracle(Box::new(e))
    }

    /// Right-nested tuple expression; empty is 0, singleton the element.
    pub fn tuple_of(mut items: Vec<CodeExpr>) -> CodeExpr {
        match items.len() {
            0 => CodeExpr::num(0),
            1 => items.pop().unwrap(),
            _ => {
                let head = items.remove(0);
                CodeExpr::pair_of(head, CodeExpr::tuple_of(items))
            }
        }
    }

    /// The i-th component of a length-`len` tuple value.
    pub fn tuple_component(e: CodeExpr, i: usize, len: usize) -> CodeExpr {
        assert!(i < len);
        let mut cur = e;
        for _ in 0..i {
            cur = CodeExpr::proj1(cur);
        }
        if i == len - 1 {
            cur
        } else {
            CodeExpr::proj0(cur)
        }
    }

    /// Check variable references are in scope: `Env(i)` needs `i` below the
    /// enclosing capture count. `Arg` and `SelfRef` are valid anywhere.
    pub fn well_scoped(&self, env_len: usize) -> bool {
        match self {
            CodeExpr::Arg | CodeExpr::Num(_) | CodeExpr::SelfRef => true,
            CodeExpr::Env(i) => *i < env_len,
            CodeExpr::Prim(_, args) => args.iter().all(|a| a.well_scoped(env_len)),
            CodeExpr::Pair(a, b) | CodeExpr::Apply(a, b) => {
                a.well_scoped(env_len) && b.well_scoped(env_len)
            }
            CodeExpr::Proj(_, e) | CodeExpr::Oracle(e) => e.well_scoped(env_len),
            CodeExpr::IfZero(c, t, e) => {
                c.well_scoped(env_len) && t.well_scoped(env_len) && e.well_scoped(env_len)
            }
            CodeExpr::Close(body, caps) => {
                caps.iter().all(|c| c.well_scoped(env_len)) && body.well_scoped(caps.len())
            }
        }
    }
}

/// A decoded machine program: a body together with its captured values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Closure {
    pub body: CodeExpr,
    pub env: Vec<Nat>,
}
