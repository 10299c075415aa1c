//! Values of closed terms: the interpretation of the object language's
//! constants as machine codes, and the recursive evaluation of closed
//! terms relative to an oracle.
//!
//! The constant codes are oracle-generic: the same numbers serve both the
//! oracle-indexed interpretation and the oracle-free one, since none of
//! them queries the oracle on its own.

use std::sync::OnceLock;

use thiserror::Error;

use crate::codes::{self, apply_shared, lam, var, CodeExpr, EvalResult, Fuel, Oracle, PrimOp};
use crate::syntax::{Signature, Term, Type};
use crate::Nat;

/// Codes for the constants: successor, the two combinators, the recursor,
/// pairing and the projections.
#[derive(Debug, Clone)]
pub struct ConstantCodes {
    pub succ: Nat,
    pub comb_k: Nat,
    pub comb_s: Nat,
    pub rec: Nat,
    pub pair: Nat,
    pub proj0: Nat,
    pub proj1: Nat,
}

impl ConstantCodes {
    /// The canonical constant codes, built once.
    pub fn get() -> &'static ConstantCodes {
        static CODES: OnceLock<ConstantCodes> = OnceLock::new();
        CODES.get_or_init(|| {
            let succ = codes::build(CodeExpr::Prim(PrimOp::Succ, vec![CodeExpr::Arg])).unwrap();
            // K a b = a
            let comb_k = lam(2, var(0, 2)).unwrap();
            // S a b n = (a n)(b n)
            let comb_s = lam(
                3,
                CodeExpr::apply(
                    CodeExpr::apply(var(0, 3), var(2, 3)),
                    CodeExpr::apply(var(1, 3), var(2, 3)),
                ),
            )
            .unwrap();
            // R a b 0 = a, R a b (n+1) = b (R a b n) n, via the recursion
            // theorem applied to the evident transformer.
            let rec_transformer = lam(
                4,
                CodeExpr::if_zero(var(3, 4), var(1, 4), {
                    let pred = CodeExpr::Prim(PrimOp::Sub, vec![var(3, 4), CodeExpr::num(1)]);
                    let rec_call =
                        codes::chain(var(0, 4), vec![var(1, 4), var(2, 4), pred.clone()]);
                    codes::chain(var(2, 4), vec![rec_call, pred])
                }),
            )
            .unwrap();
            let rec = codes::fixpoint(&rec_transformer).unwrap();
            // D a b = <a,b>
            let pair = lam(2, CodeExpr::pair_of(var(0, 2), var(1, 2))).unwrap();
            let proj0 = codes::build(CodeExpr::proj0(CodeExpr::Arg)).unwrap();
            let proj1 = codes::build(CodeExpr::proj1(CodeExpr::Arg)).unwrap();
            ConstantCodes {
                succ,
                comb_k,
                comb_s,
                rec,
                pair,
                proj0,
                proj1,
            }
        })
    }

    fn of_term(&self, t: &Term) -> Option<Nat> {
        Some(match t {
            Term::Succ => self.succ.clone(),
            Term::CombK(_, _) => self.comb_k.clone(),
            Term::CombS(_, _, _) => self.comb_s.clone(),
            Term::Rec(_) => self.rec.clone(),
            Term::PairC(_, _) => self.pair.clone(),
            Term::Proj0(_, _) => self.proj0.clone(),
            Term::Proj1(_, _) => self.proj1.clone(),
            _ => return None,
        })
    }
}

/// The value of a closed term relative to the oracle, within one shared
/// fuel budget. Free variables and unknown symbols surface as
/// `InvalidCode`; everything else follows the recursive clauses, with
/// application being Kleene application under the oracle.
pub fn value(term: &Term, sig: &Signature, oracle: &Oracle, fuel: Fuel) -> EvalResult {
    let mut budget = fuel;
    value_shared(term, sig, oracle, &mut budget)
}

/// As [`value`], drawing on a caller-owned budget.
pub fn value_shared(term: &Term, sig: &Signature, oracle: &Oracle, fuel: &mut Fuel) -> EvalResult {
    if *fuel == 0 {
        return EvalResult::FuelExhausted;
    }
    *fuel -= 1;
    let consts = ConstantCodes::get();
    match term {
        Term::Zero => EvalResult::Value(Nat::from(0u32)),
        Term::Heo(a, _) => EvalResult::Value(a.clone()),
        Term::Var(_, _) => EvalResult::InvalidCode,
        Term::Prim(name, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                match value_shared(a, sig, oracle, fuel) {
                    EvalResult::Value(v) => vals.push(v),
                    other => return other,
                }
            }
            match sig.evaluate(name, &vals) {
                Some(v) => EvalResult::Value(v),
                None => EvalResult::InvalidCode,
            }
        }
        Term::App(f, x) => {
            let vf = match value_shared(f, sig, oracle, fuel) {
                EvalResult::Value(v) => v,
                other => return other,
            };
            let vx = match value_shared(x, sig, oracle, fuel) {
                EvalResult::Value(v) => v,
                other => return other,
            };
            apply_shared(&vf, &vx, oracle, fuel)
        }
        other => match consts.of_term(other) {
            Some(code) => EvalResult::Value(code),
            None => EvalResult::InvalidCode,
        },
    }
}

/// Oracle-free value of a closed term.
pub fn value_plain(term: &Term, sig: &Signature, fuel: Fuel) -> EvalResult {
    value(term, sig, &Oracle::empty(), fuel)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermIndexError {
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
}

/// Compile a term into a machine expression, mapping each free variable
/// to the expression supplied for it.
pub fn compile_term(
    term: &Term,
    sig: &Signature,
    lookup: &dyn Fn(&str) -> Option<CodeExpr>,
) -> Result<CodeExpr, TermIndexError> {
    let consts = ConstantCodes::get();
    Ok(match term {
        Term::Var(name, _) => {
            lookup(name).ok_or_else(|| TermIndexError::UnboundVariable(name.clone()))?
        }
        Term::Zero => CodeExpr::num(0),
        Term::Heo(a, _) => CodeExpr::lit(a),
        Term::Prim(name, args) => {
            let op = sig
                .op_of(name)
                .ok_or_else(|| TermIndexError::UnboundVariable(name.clone()))?;
            let mut compiled = Vec::with_capacity(args.len());
            for a in args {
                compiled.push(compile_term(a, sig, lookup)?);
            }
            CodeExpr::Prim(op, compiled)
        }
        Term::App(f, x) => {
            CodeExpr::apply(compile_term(f, sig, lookup)?, compile_term(x, sig, lookup)?)
        }
        other => CodeExpr::lit(&consts.of_term(other).expect("constant term")),
    })
}

/// An index `d` with `d^p n_1 .. n_k ~ |term[F_{n_1}/x_1, ..]|_p` for all
/// numerals and oracles. For an empty variable list the index takes one
/// ignored argument.
pub fn term_index(
    term: &Term,
    sig: &Signature,
    vars: &[(String, Type)],
) -> Result<Nat, TermIndexError> {
    let arity = vars.len().max(1);
    let lookup = |name: &str| {
        vars.iter()
            .position(|(n, _)| n == name)
            .map(|i| var(i, arity))
    };
    let body = compile_term(term, sig, &lookup)?;
    Ok(lam(arity, body).expect("compiled terms are well scoped"))
}

/// Oracle-free variant of [`term_index`]. The constant codes never query
/// the oracle on their own, so the same index serves both laws; this
/// name records the oracle-free reading `d n_1..n_k ~ |term[F_n/x]|`.
pub fn term_index_plain(
    term: &Term,
    sig: &Signature,
    vars: &[(String, Type)],
) -> Result<Nat, TermIndexError> {
    term_index(term, sig, vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::pairing::{nat, pair};
    use crate::codes::{apply, apply_chain};
    use crate::syntax::parse::{parse_term, parse_term_with};

    const FUEL: Fuel = 100_000;

    fn sig() -> Signature {
        Signature::standard()
    }

    fn val(src: &str) -> EvalResult {
        value(
            &parse_term(src, &sig()).unwrap(),
            &sig(),
            &Oracle::empty(),
            FUEL,
        )
    }

    #[test]
    fn numerals_evaluate_to_their_number() {
        assert_eq!(val("0"), EvalResult::Value(nat(0)));
        assert_eq!(val("S(S(0))"), EvalResult::Value(nat(2)));
    }

    #[test]
    fn primitive_symbols_evaluate() {
        assert_eq!(val("add(S(0),S(S(0)))"), EvalResult::Value(nat(3)));
        assert_eq!(val("max(S(0),mul(2,3))"), EvalResult::Value(nat(6)));
    }

    #[test]
    fn projections_of_pairs() {
        // D0 (D (S0) 0) = 1
        assert_eq!(
            val("app(D0[N,N], app(app(D[N,N], S(0)), 0))"),
            EvalResult::Value(nat(1))
        );
        assert_eq!(
            val("app(app(D[N,N], S(0)), 0)"),
            EvalResult::Value(pair(&nat(1), &nat(0)))
        );
    }

    #[test]
    fn combinators_compose() {
        // Sig K K applied to 0 is the identity: (K 0)(K 0) = 0.
        assert_eq!(
            val("app(app(app(Sig[N,N->N,N], K[N,N->N]), K[N,N]), 0)"),
            EvalResult::Value(nat(0))
        );
        assert_eq!(
            val("app(app(K[N,N], S(S(0))), 0)"),
            EvalResult::Value(nat(2))
        );
    }

    #[test]
    fn recursor_unfolds() {
        // R 5 g 1 with g r n = r.
        let g = lam(2, var(0, 2)).unwrap();
        let term = Term::apps(
            Term::Rec(Type::Nat),
            vec![
                Term::Heo(nat(5), Type::Nat),
                Term::Heo(g, Type::arrows(&[Type::Nat, Type::Nat], Type::Nat)),
                Term::numeral(1),
            ],
        );
        assert_eq!(
            value(&term, &sig(), &Oracle::empty(), FUEL),
            EvalResult::Value(nat(5))
        );
        // R a b 0 = a.
        assert_eq!(
            val("app(app(app(R[N], 4), F[1:N->N->N]), 0)"),
            EvalResult::Value(nat(4))
        );
    }

    #[test]
    fn recursor_satisfies_its_equations_on_samples() {
        // Step functions with total small behavior: successor of the
        // accumulator, the stage itself, and accumulator plus stage.
        let steps = [
            lam(2, CodeExpr::Prim(PrimOp::Succ, vec![var(0, 2)])).unwrap(),
            lam(2, var(1, 2)).unwrap(),
            lam(2, CodeExpr::Prim(PrimOp::Add, vec![var(0, 2), var(1, 2)])).unwrap(),
        ];
        let consts = ConstantCodes::get();
        let run3 = |a: &Nat, b: &Nat, n: u64| {
            apply_chain(
                &consts.rec,
                &[a.clone(), b.clone(), nat(n)],
                &Oracle::empty(),
                FUEL,
            )
        };
        for b in &steps {
            for a in 0..4u64 {
                // R a b 0 = a.
                assert_eq!(run3(&nat(a), b, 0), EvalResult::Value(nat(a)));
                for n in 0..5u64 {
                    // R a b (n+1) = b (R a b n) n.
                    let prev = match run3(&nat(a), b, n) {
                        EvalResult::Value(v) => v,
                        other => panic!("{other}"),
                    };
                    let stepped = apply_chain(b, &[prev, nat(n)], &Oracle::empty(), FUEL);
                    assert_eq!(run3(&nat(a), b, n + 1), stepped);
                }
            }
        }
    }

    #[test]
    fn value_is_monotone_in_the_oracle() {
        // A term applying an oracle-reading index constant.
        let reader = crate::codes::build(CodeExpr::oracle_at(CodeExpr::Arg)).unwrap();
        let term = Term::app(
            Term::Heo(reader, Type::arrow(Type::Nat, Type::Nat)),
            Term::numeral(2),
        );
        let p = Oracle::from_entries([(nat(2), nat(9))]);
        let q = p.extended(nat(5), nat(5)).unwrap();
        let under_p = value(&term, &sig(), &p, FUEL);
        assert_eq!(under_p, EvalResult::Value(nat(9)));
        assert_eq!(value(&term, &sig(), &q, FUEL), under_p);
        assert!(matches!(
            value(&term, &sig(), &Oracle::empty(), FUEL),
            EvalResult::OracleMiss(_)
        ));
    }

    #[test]
    fn term_index_tracks_the_value_of_instances() {
        let s = sig();
        let vars = vec![("x".to_string(), Type::Nat)];
        // alpha = x
        let d = term_index(&Term::nvar("x"), &s, &vars).unwrap();
        assert_eq!(
            apply(&d, &nat(8), &Oracle::empty(), FUEL),
            EvalResult::Value(nat(8))
        );
        // alpha = S(x)
        let d = term_index(&Term::succ_of(Term::nvar("x")), &s, &vars).unwrap();
        assert_eq!(
            apply(&d, &nat(4), &Oracle::empty(), FUEL),
            EvalResult::Value(nat(5))
        );
        // alpha = app(x,y): d a b ~ a^p b on samples.
        let fvars = vec![
            ("x".to_string(), Type::arrow(Type::Nat, Type::Nat)),
            ("y".to_string(), Type::Nat),
        ];
        let alpha = parse_term_with("app(x,y)", &s, &fvars).unwrap();
        let d = term_index(&alpha, &s, &fvars).unwrap();
        for code in 0..5u64 {
            for arg in 0..4u64 {
                let via_index = apply_chain(&d, &[nat(code), nat(arg)], &Oracle::empty(), FUEL);
                let direct = apply(&nat(code), &nat(arg), &Oracle::empty(), FUEL);
                assert_eq!(via_index, direct);
            }
        }
        // V2 law on an oracle-sensitive instance.
        let reader = crate::codes::build(CodeExpr::oracle_at(CodeExpr::Arg)).unwrap();
        let p = Oracle::from_entries([(nat(1), nat(4))]);
        let via_index = apply_chain(&d, &[reader.clone(), nat(1)], &p, FUEL);
        let inst = Term::app(
            Term::Heo(reader, Type::arrow(Type::Nat, Type::Nat)),
            Term::Heo(nat(1), Type::Nat),
        );
        assert_eq!(via_index, value(&inst, &s, &p, FUEL));
    }

    #[test]
    fn unbound_variables_are_reported() {
        let err = term_index(&Term::nvar("x"), &sig(), &[]).unwrap_err();
        assert_eq!(err, TermIndexError::UnboundVariable("x".into()));
    }

    #[test]
    fn plain_value_agrees_with_oracle_value_on_oracle_free_terms() {
        for src in ["S(S(S(0)))", "app(app(K[N,N], 2), 0)", "add(2,2)"] {
            let t = parse_term(src, &sig()).unwrap();
            let p = Oracle::from_entries([(nat(0), nat(1))]);
            assert_eq!(value(&t, &sig(), &p, FUEL), value_plain(&t, &sig(), FUEL));
        }
    }
}
