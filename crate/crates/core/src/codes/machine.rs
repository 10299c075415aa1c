//! The index machine: deterministic, fuel-bounded Kleene application
//! relative to an oracle.
//!
//! Every outcome is a value of [`EvalResult`]; the machine never panics on
//! malformed programs. Fuel counts small steps, shared across nested
//! applications, so a result `Value(v)` at some fuel stays `Value(v)` at
//! every larger fuel, and evaluation under an extension of the oracle
//! agrees with evaluation under the original whenever the latter returns
//! a value.

use std::fmt;

use num_traits::Zero;

use super::encode::{decode, encode};
use super::expr::{Closure, CodeExpr};
use super::oracle::Oracle;
use super::pairing;
use crate::Nat;

pub type Fuel = u64;

/// Outcome of running a code on an argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EvalResult {
    Value(Nat),
    /// The oracle was queried outside its domain. Undefined, and stays
    /// undefined under the same oracle.
    OracleMiss(Nat),
    /// The applied number does not decode to a program, or a reference
    /// inside it was out of scope. Undefined at every fuel.
    InvalidCode,
    /// The step budget ran out before a verdict.
    FuelExhausted,
}

impl EvalResult {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            EvalResult::Value(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, EvalResult::Value(_))
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalResult::Value(n) => write!(f, "value {n}"),
            EvalResult::OracleMiss(k) => write!(f, "oracle miss at {k}"),
            EvalResult::InvalidCode => write!(f, "invalid code"),
            EvalResult::FuelExhausted => write!(f, "fuel exhausted"),
        }
    }
}

/// `{a}^p(n)` at the given fuel.
pub fn apply(code: &Nat, arg: &Nat, oracle: &Oracle, fuel: Fuel) -> EvalResult {
    let mut budget = fuel;
    apply_shared(code, arg, oracle, &mut budget)
}

/// `{a}^p(n_1)...(n_k)` at the given fuel, left-associated.
pub fn apply_chain(code: &Nat, args: &[Nat], oracle: &Oracle, fuel: Fuel) -> EvalResult {
    let mut budget = fuel;
    let mut cur = code.clone();
    for a in args {
        match apply_shared(&cur, a, oracle, &mut budget) {
            EvalResult::Value(v) => cur = v,
            other => return other,
        }
    }
    EvalResult::Value(cur)
}

/// Application drawing on a caller-owned budget, so nested calls share it.
pub fn apply_shared(code: &Nat, arg: &Nat, oracle: &Oracle, fuel: &mut Fuel) -> EvalResult {
    match decode(code) {
        None => EvalResult::InvalidCode,
        Some(cl) => {
            let ctx = Ctx {
                arg,
                env: &cl.env,
                self_code: code,
            };
            eval(&cl.body, &ctx, oracle, fuel, 0)
        }
    }
}

struct Ctx<'a> {
    arg: &'a Nat,
    env: &'a [Nat],
    self_code: &'a Nat,
}

// Nested applications recurse through the host stack; cap the depth so
// hostile codes degrade to FuelExhausted instead of overflowing. Kept
// well under the default test-thread stack even for debug-build frames.
const MAX_DEPTH: u32 = 300;

fn eval(e: &CodeExpr, ctx: &Ctx, oracle: &Oracle, fuel: &mut Fuel, depth: u32) -> EvalResult {
    if *fuel == 0 || depth > MAX_DEPTH {
        return EvalResult::FuelExhausted;
    }
    *fuel -= 1;
    macro_rules! want {
        ($e:expr) => {
            match eval($e, ctx, oracle, fuel, depth + 1) {
                EvalResult::Value(v) => v,
                other => return other,
            }
        };
    }
    match e {
        CodeExpr::Arg => EvalResult::Value(ctx.arg.clone()),
        CodeExpr::Env(i) => match ctx.env.get(*i) {
            Some(v) => EvalResult::Value(v.clone()),
            None => EvalResult::InvalidCode,
        },
        CodeExpr::Num(n) => EvalResult::Value(n.clone()),
        CodeExpr::Prim(op, args) => {
            if args.len() != op.arity() {
                return EvalResult::InvalidCode;
            }
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(want!(a));
            }
            EvalResult::Value(op.eval(&vals))
        }
        CodeExpr::Pair(a, b) => {
            let va = want!(a);
            let vb = want!(b);
            EvalResult::Value(pairing::pair(&va, &vb))
        }
        CodeExpr::Proj(i, x) => {
            let v = want!(x);
            EvalResult::Value(pairing::proj(*i, &v))
        }
        CodeExpr::IfZero(c, t, f) => {
            let vc = want!(c);
            if vc.is_zero() {
                eval(t, ctx, oracle, fuel, depth + 1)
            } else {
                eval(f, ctx, oracle, fuel, depth + 1)
            }
        }
        CodeExpr::Apply(f, x) => {
            let vf = want!(f);
            let vx = want!(x);
            match decode(&vf) {
                None => EvalResult::InvalidCode,
                Some(cl) => {
                    let inner = Ctx {
                        arg: &vx,
                        env: &cl.env,
                        self_code: &vf,
                    };
                    eval(&cl.body, &inner, oracle, fuel, depth + 1)
                }
            }
        }
        CodeExpr::Oracle(x) => {
            let k = want!(x);
            match oracle.get(&k) {
                Some(v) => EvalResult::Value(v.clone()),
                None => EvalResult::OracleMiss(k),
            }
        }
        CodeExpr::Close(body, caps) => {
            let mut env = Vec::with_capacity(caps.len());
            for c in caps {
                env.push(want!(c));
            }
            if !body.well_scoped(env.len()) {
                return EvalResult::InvalidCode;
            }
            EvalResult::Value(encode(&Closure {
                body: (**body).clone(),
                env,
            }))
        }
        CodeExpr::SelfRef => EvalResult::Value(ctx.self_code.clone()),
    }
}
