//! Construction of canonical indices: curried lambdas, argument chains,
//! s-m-n specialization and recursion-theorem fixed points.

use thiserror::Error;

use super::encode::{decode, encode};
use super::expr::{Closure, CodeExpr};
use crate::Nat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("expression is not closed: references capture slot {0} out of scope")]
    MalformedExpr(usize),
    #[error("number {0} does not decode to a program")]
    InvalidCode(Nat),
}

/// Canonical index of the one-argument function with the given body.
/// The body may use `Arg` and `SelfRef`; `Env` references are rejected.
pub fn build(body: CodeExpr) -> Result<Nat, BuildError> {
    if !body.well_scoped(0) {
        return Err(BuildError::MalformedExpr(0));
    }
    Ok(encode(&Closure { body, env: vec![] }))
}

/// Reference to argument `i` (0-based) inside the body of a `lam(k, ..)`
/// program. The first k-1 arguments are captured, the last is `Arg`.
pub fn var(i: usize, arity: usize) -> CodeExpr {
    assert!(
        i < arity,
        "argument index {i} out of range for arity {arity}"
    );
    if i + 1 == arity {
        CodeExpr::Arg
    } else {
        CodeExpr::Env(i)
    }
}

/// Canonical index of a curried `arity`-argument function.
///
/// Applying the result to `x_0 .. x_{arity-1}` in turn evaluates `body`
/// with `var(i, arity)` bound to `x_i`. Inside `body`, `SelfRef` denotes
/// the innermost closure, i.e. the partial application to the first
/// `arity - 1` arguments; applying it restarts `body` with a new last
/// argument and the same earlier ones.
pub fn lam(arity: usize, body: CodeExpr) -> Result<Nat, BuildError> {
    assert!(arity >= 1, "lam needs at least one argument");
    if !body.well_scoped(arity - 1) {
        return Err(BuildError::MalformedExpr(arity));
    }
    // Innermost layer captures args 0..arity-1; each enclosing layer j
    // captures the earlier ones and passes its own Arg along.
    let mut cur = body;
    for level in (1..arity).rev() {
        // level = number of captures of the closure being built.
        let mut caps: Vec<CodeExpr> = (0..level - 1).map(CodeExpr::Env).collect();
        caps.push(CodeExpr::Arg);
        cur = CodeExpr::Close(Box::new(cur), caps);
    }
    Ok(encode(&Closure {
        body: cur,
        env: vec![],
    }))
}

/// Left-nested application of `f` to the given argument expressions.
pub fn chain(f: CodeExpr, args: Vec<CodeExpr>) -> CodeExpr {
    args.into_iter().fold(f, CodeExpr::apply)
}

/// Apply a code literal to argument expressions.
pub fn chain_code(code: &Nat, args: Vec<CodeExpr>) -> CodeExpr {
    chain(CodeExpr::lit(code), args)
}

/// s-m-n specialization: an index `s` with `{s}^p(y) ~ {a}^p(x_1..x_m, y)`
/// for the fixed prefix `x_1..x_m`, at every oracle and argument.
pub fn smn(a: &Nat, fixed: &[Nat]) -> Result<Nat, BuildError> {
    if decode(a).is_none() {
        return Err(BuildError::InvalidCode(a.clone()));
    }
    let args: Vec<CodeExpr> = fixed
        .iter()
        .map(CodeExpr::lit)
        .chain(std::iter::once(CodeExpr::Arg))
        .collect();
    build(chain(CodeExpr::lit(a), args))
}

/// Recursion theorem: an index `e` with `{a}^p(e, xs) ~ {e}^p(xs)` for all
/// argument tails `xs` and oracles `p`.
pub fn fixpoint(a: &Nat) -> Result<Nat, BuildError> {
    if decode(a).is_none() {
        return Err(BuildError::InvalidCode(a.clone()));
    }
    let body = CodeExpr::apply(
        CodeExpr::apply(CodeExpr::lit(a), CodeExpr::SelfRef),
        CodeExpr::Arg,
    );
    Ok(encode(&Closure { body, env: vec![] }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::machine::{apply, apply_chain, EvalResult};
    use crate::codes::oracle::Oracle;
    use crate::codes::pairing::nat;
    use crate::codes::PrimOp;

    const FUEL: u64 = 10_000;

    fn run(code: &Nat, args: &[Nat]) -> EvalResult {
        apply_chain(code, args, &Oracle::empty(), FUEL)
    }

    #[test]
    fn build_of_arg_is_identity() {
        let id = build(CodeExpr::Arg).unwrap();
        assert_eq!(id, nat(1)); // the reserved identity numeral
        assert_eq!(run(&id, &[nat(42)]), EvalResult::Value(nat(42)));
    }

    #[test]
    fn build_rejects_open_bodies() {
        assert!(build(CodeExpr::Env(0)).is_err());
        assert!(lam(2, CodeExpr::Env(1)).is_err());
    }

    #[test]
    fn lam_binds_arguments_in_order() {
        // f(a, b, c) = <a, c>
        let f = lam(3, CodeExpr::pair_of(var(0, 3), var(2, 3))).unwrap();
        assert_eq!(
            run(&f, &[nat(3), nat(4), nat(5)]),
            EvalResult::Value(crate::codes::pairing::pair(&nat(3), &nat(5)))
        );
    }

    #[test]
    fn smn_fixes_prefix_arguments() {
        // Curried addition.
        let add = lam(2, CodeExpr::Prim(PrimOp::Add, vec![var(0, 2), var(1, 2)])).unwrap();
        let add3 = smn(&add, &[nat(3)]).unwrap();
        assert_eq!(run(&add3, &[nat(4)]), EvalResult::Value(nat(7)));
        // Zero fixed arguments behaves like the original.
        let again = smn(&add, &[]).unwrap();
        for x in 0..4u64 {
            for y in 0..4u64 {
                assert_eq!(run(&again, &[nat(x), nat(y)]), run(&add, &[nat(x), nat(y)]));
            }
        }
        // K law: smn(k, [n]) is constantly n.
        let k = lam(2, var(0, 2)).unwrap();
        let k9 = smn(&k, &[nat(9)]).unwrap();
        for x in [0u64, 3, 77] {
            assert_eq!(run(&k9, &[nat(x)]), EvalResult::Value(nat(9)));
        }
    }

    #[test]
    fn fixpoint_computes_factorial() {
        // a(e, x) = if x = 0 then 1 else x * {e}(x - 1)
        let body = CodeExpr::if_zero(
            var(1, 2),
            CodeExpr::num(1),
            CodeExpr::Prim(
                PrimOp::Mul,
                vec![
                    var(1, 2),
                    CodeExpr::apply(
                        var(0, 2),
                        CodeExpr::Prim(PrimOp::Sub, vec![var(1, 2), CodeExpr::num(1)]),
                    ),
                ],
            ),
        );
        let a = lam(2, body).unwrap();
        let fac = fixpoint(&a).unwrap();
        assert_eq!(run(&fac, &[nat(4)]), EvalResult::Value(nat(24)));
        assert_eq!(run(&fac, &[nat(0)]), EvalResult::Value(nat(1)));
    }

    #[test]
    fn fixpoint_of_ignoring_transform_is_constant() {
        // a(e, x) = x + 1, ignoring e.
        let a = lam(2, CodeExpr::Prim(PrimOp::Succ, vec![var(1, 2)])).unwrap();
        let e = fixpoint(&a).unwrap();
        assert_eq!(run(&e, &[nat(10)]), EvalResult::Value(nat(11)));
    }

    #[test]
    fn fixpoint_of_self_application_diverges() {
        // a(e, x) = {e}(x)
        let a = lam(2, CodeExpr::apply(var(0, 2), var(1, 2))).unwrap();
        let e = fixpoint(&a).unwrap();
        for fuel in [10u64, 1000, 200_000] {
            assert_eq!(
                apply(&e, &nat(3), &Oracle::empty(), fuel),
                EvalResult::FuelExhausted
            );
        }
    }
}
