//! Compilation of checked derivations into realizer indices.
//!
//! Each rule has one recipe. A node whose conclusion has free variables
//! `x_1..x_k` compiles to an index that first consumes `k` numerals, then
//! whatever arguments its rule shape demands. When a recipe needs a
//! premise index over more variables than the conclusion has (detachment
//! rules and quantifier rules), the extra positions are fed with the
//! canonical inhabitants of their types. Rules that consume no arguments
//! at `k = 0` are composed by running the machine once at extraction
//! time; extracted codes never query the oracle, so the resulting number
//! is condition-independent.

use std::fmt;

use thiserror::Error;

use crate::codes::{
    apply, build, chain, chain_code, lam, pairing, var, CodeExpr, EvalResult, Oracle, PrimOp,
};
use crate::heo::default_code;
use crate::realizability::formula_type;
use crate::syntax::{
    check_derivation, CheckError, Derivation, Formula, Payload, Signature, Term, Type,
};
use crate::valuation::{compile_term, TermIndexError};
use crate::Nat;

/// Which soundness interpretation the index is compiled for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Pair forcing over condition universes.
    Forcing,
    /// Typed realizability with total realizers.
    Plain,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Forcing => write!(f, "forcing"),
            Mode::Plain => write!(f, "plain"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// Postorder position of the node in the derivation tree.
    pub node: usize,
    pub rule_id: u8,
    pub recipe: String,
}

#[derive(Debug, Clone)]
pub struct ExtractionResult {
    pub code: Nat,
    /// The universal closure the index realizes, in canonical order.
    pub closure_vars: Vec<(String, Type)>,
    pub mode: Mode,
    pub case_trace: Vec<TraceEntry>,
}

impl ExtractionResult {
    /// The sentence the extracted index realizes: the universal closure
    /// of the conclusion over the canonical variable list.
    pub fn closure_of(&self, conclusion: &Formula) -> Formula {
        close_over(conclusion, &self.closure_vars)
    }
}

/// The universal closure over the given list, outermost first.
pub fn close_over(phi: &Formula, vars: &[(String, Type)]) -> Formula {
    vars.iter().rev().fold(phi.clone(), |acc, (x, ty)| {
        Formula::Forall(x.clone(), ty.clone(), Box::new(acc))
    })
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("term compilation: {0}")]
    Term(#[from] TermIndexError),
    #[error("extraction-time evaluation failed: {0}")]
    Evaluation(String),
}

const EXTRACT_FUEL: u64 = 2_000_000;

/// Compile a derivation into its pair-forcing realizer.
pub fn extract(d: &Derivation, sig: &Signature) -> Result<ExtractionResult, ExtractError> {
    extract_mode(d, sig, Mode::Forcing)
}

/// Compile a derivation into its typed realizer.
pub fn extract_plain(d: &Derivation, sig: &Signature) -> Result<ExtractionResult, ExtractError> {
    extract_mode(d, sig, Mode::Plain)
}

pub fn extract_mode(
    d: &Derivation,
    sig: &Signature,
    mode: Mode,
) -> Result<ExtractionResult, ExtractError> {
    let closure_vars = check_derivation(d, sig)?;
    let mut cx = Cx {
        sig,
        mode,
        trace: Vec::new(),
        counter: 0,
    };
    let code = cx.node(d, &closure_vars)?;
    Ok(ExtractionResult {
        code,
        closure_vars,
        mode,
        case_trace: cx.trace,
    })
}

struct Cx<'a> {
    sig: &'a Signature,
    mode: Mode,
    trace: Vec<TraceEntry>,
    counter: usize,
}

type Vars = [(String, Type)];

impl Cx<'_> {
    fn record(&mut self, rule_id: u8, recipe: impl Into<String>) {
        self.counter += 1;
        self.trace.push(TraceEntry {
            node: self.counter,
            rule_id,
            recipe: recipe.into(),
        });
    }

    /// Index for the node, abstracting over `list` (which covers the
    /// conclusion's free variables) and then the rule's own arguments.
    fn node(&mut self, d: &Derivation, list: &Vars) -> Result<Nat, ExtractError> {
        let k = list.len();
        let c = &d.conclusion;
        let bad = |msg: String| ExtractError::Evaluation(format!("rule {}: {msg}", d.rule_id));
        let shape = |msg: &str| bad(msg.to_string());

        match d.rule_id {
            1 => {
                self.record(1, "a n b = b");
                finalize(k + 1, var(k, k + 1))
            }
            2 => {
                let minor = &d.premises[0];
                let major = &d.premises[1];
                let extras = extra_vars(&[&minor.conclusion, &major.conclusion], list);
                let sub_list = concat_vars(list, &extras);
                let cc = self.node(minor, &sub_list)?;
                let bc = self.node(major, &sub_list)?;
                self.record(2, "a n = b n 0^B (c n 0^B)");
                let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, k)).collect();
                args.extend(
                    extras
                        .iter()
                        .map(|(_, ty)| CodeExpr::lit(&default_code(ty))),
                );
                let body = CodeExpr::apply(chain_code(&bc, args.clone()), chain_code(&cc, args));
                finalize(k, body)
            }
            3 => {
                let first = &d.premises[0]; // phi -> psi
                let second = &d.premises[1]; // psi -> chi
                let extras = extra_vars(&[&first.conclusion, &second.conclusion], list);
                let sub_list = concat_vars(list, &extras);
                let cc = self.node(first, &sub_list)?;
                let bc = self.node(second, &sub_list)?;
                self.record(3, "a n d = b n 0^B (c n 0^B d)");
                let arity = k + 1;
                let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, arity)).collect();
                args.extend(
                    extras
                        .iter()
                        .map(|(_, ty)| CodeExpr::lit(&default_code(ty))),
                );
                let body = CodeExpr::apply(
                    chain_code(&bc, args.clone()),
                    CodeExpr::apply(chain_code(&cc, args), var(k, arity)),
                );
                finalize(arity, body)
            }
            4 => {
                let (ante, cons) = as_imp(c).ok_or_else(|| shape("not an implication"))?;
                let i = match ante {
                    Formula::And(l, _) if **l == *cons => 0,
                    _ => 1,
                };
                self.record(4, format!("a n b = (b)_{i}"));
                finalize(k + 1, CodeExpr::Proj(i, Box::new(var(k, k + 1))))
            }
            5 => {
                let (ante, cons) = as_imp(c).ok_or_else(|| shape("not an implication"))?;
                let (l, r) = match cons {
                    Formula::Or(l, r) => (&**l, &**r),
                    _ => return Err(shape("expected a disjunction")),
                };
                let i: u64 = if l == ante { 0 } else { 1 };
                let arity = k + 1;
                let b = var(k, arity);
                let body = match self.mode {
                    Mode::Forcing => {
                        self.record(5, format!("a n b = <{i},b>"));
                        CodeExpr::pair_of(CodeExpr::num(i), b)
                    }
                    Mode::Plain => {
                        self.record(5, format!("a n b = tagged triple, 0^B in slot {}", 1 - i));
                        let other = if i == 0 { r } else { l };
                        let filler = CodeExpr::lit(&default_code(&formula_type(other)));
                        let (left, right) = if i == 0 { (b, filler) } else { (filler, b) };
                        CodeExpr::tuple_of(vec![CodeExpr::num(i), left, right])
                    }
                };
                finalize(arity, body)
            }
            6 => {
                let bc = self.node(&d.premises[0], list)?;
                let cc = self.node(&d.premises[1], list)?;
                self.record(6, "a n d = <b n d, c n d>");
                let arity = k + 1;
                let args: Vec<CodeExpr> = (0..=k).map(|i| var(i, arity)).collect();
                let body = CodeExpr::pair_of(chain_code(&bc, args.clone()), chain_code(&cc, args));
                finalize(arity, body)
            }
            7 => {
                let bc = self.node(&d.premises[0], list)?;
                let cc = self.node(&d.premises[1], list)?;
                let arity = k + 1;
                let dv = || var(k, arity);
                let with_payload = |code: &Nat, payload: CodeExpr| -> CodeExpr {
                    let args: Vec<CodeExpr> =
                        (0..k).map(|i| var(i, arity)).chain([payload]).collect();
                    chain_code(code, args)
                };
                let (left_part, right_part) = match self.mode {
                    Mode::Forcing => {
                        self.record(7, "a n d = b n (d)_1 if (d)_0 = 0 else c n (d)_1");
                        (CodeExpr::proj1(dv()), CodeExpr::proj1(dv()))
                    }
                    Mode::Plain => {
                        self.record(7, "a n d = b n (d)_1 if (d)_0 = 0 else c n (d)_2");
                        (
                            CodeExpr::tuple_component(dv(), 1, 3),
                            CodeExpr::tuple_component(dv(), 2, 3),
                        )
                    }
                };
                let body = CodeExpr::if_zero(
                    CodeExpr::proj0(dv()),
                    with_payload(&bc, left_part),
                    with_payload(&cc, right_part),
                );
                finalize(arity, body)
            }
            8 => {
                let premise = &d.premises[0];
                let bc = self.node(premise, list)?;
                let currying = if let Formula::Imp(a, chi) = &premise.conclusion {
                    if let Formula::And(phi, psi) = &**a {
                        *c == Formula::imp(
                            (**phi).clone(),
                            Formula::imp((**psi).clone(), (**chi).clone()),
                        )
                    } else {
                        false
                    }
                } else {
                    false
                };
                if currying {
                    self.record(8, "a n c e = b n <c,e>");
                    let arity = k + 2;
                    let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, arity)).collect();
                    args.push(CodeExpr::pair_of(var(k, arity), var(k + 1, arity)));
                    finalize(arity, chain_code(&bc, args))
                } else {
                    self.record(8, "a n c = b n (c)_0 (c)_1");
                    let arity = k + 1;
                    let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, arity)).collect();
                    args.push(CodeExpr::proj0(var(k, arity)));
                    args.push(CodeExpr::proj1(var(k, arity)));
                    finalize(arity, chain_code(&bc, args))
                }
            }
            9 => {
                self.record(9, "a n b = 0");
                finalize(k + 1, CodeExpr::num(0))
            }
            10 => {
                let (_, cons) = as_imp(c).ok_or_else(|| shape("not an implication"))?;
                let (x, xty) = match cons {
                    Formula::Forall(x, ty, _) => (x.clone(), ty.clone()),
                    _ => return Err(shape("expected a universal consequent")),
                };
                let arity = k + 2; // n.., c, e
                if let Some(pos) = list.iter().position(|(n, _)| *n == x) {
                    let bc = self.node(&d.premises[0], list)?;
                    self.record(10, "a n c e = b n[e at the bound slot] c");
                    let mut args: Vec<CodeExpr> = (0..k)
                        .map(|i| {
                            if i == pos {
                                var(k + 1, arity)
                            } else {
                                var(i, arity)
                            }
                        })
                        .collect();
                    args.push(var(k, arity));
                    finalize(arity, chain_code(&bc, args))
                } else {
                    let sub_list = concat_vars(list, &[(x, xty)]);
                    let bc = self.node(&d.premises[0], &sub_list)?;
                    self.record(10, "a n c e = b n e c");
                    let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, arity)).collect();
                    args.push(var(k + 1, arity));
                    args.push(var(k, arity));
                    finalize(arity, chain_code(&bc, args))
                }
            }
            11 => {
                let (ante, _) = as_imp(c).ok_or_else(|| shape("not an implication"))?;
                let (x, xty) = match ante {
                    Formula::Exists(x, ty, _) => (x.clone(), ty.clone()),
                    _ => return Err(shape("expected an existential antecedent")),
                };
                let arity = k + 1; // n.., c
                let cv = || var(k, arity);
                if let Some(pos) = list.iter().position(|(n, _)| *n == x) {
                    let bc = self.node(&d.premises[0], list)?;
                    self.record(11, "a n c = b n[(c)_0 at the bound slot] (c)_1");
                    let mut args: Vec<CodeExpr> = (0..k)
                        .map(|i| {
                            if i == pos {
                                CodeExpr::proj0(cv())
                            } else {
                                var(i, arity)
                            }
                        })
                        .collect();
                    args.push(CodeExpr::proj1(cv()));
                    finalize(arity, chain_code(&bc, args))
                } else {
                    let sub_list = concat_vars(list, &[(x, xty)]);
                    let bc = self.node(&d.premises[0], &sub_list)?;
                    self.record(11, "a n c = b n (c)_0 (c)_1");
                    let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, arity)).collect();
                    args.push(CodeExpr::proj0(cv()));
                    args.push(CodeExpr::proj1(cv()));
                    finalize(arity, chain_code(&bc, args))
                }
            }
            12 => {
                let alpha = match &d.payload {
                    Some(Payload::Term(t)) => t,
                    _ => return Err(shape("missing term payload")),
                };
                let (ante, cons) = as_imp(c).ok_or_else(|| shape("not an implication"))?;
                let arity = k + 1;
                let term_expr = self.compile(alpha, list, arity)?;
                let is_forall_elim = match ante {
                    Formula::Forall(x, ty, body) => {
                        alpha.sort(self.sig).ok().as_ref() == Some(ty)
                            && body
                                .substitute(x, alpha)
                                .map(|f| f == *cons)
                                .unwrap_or(false)
                    }
                    _ => false,
                };
                if is_forall_elim {
                    self.record(12, "a n b = b (d n), d n = |alpha(F_n)|");
                    finalize(arity, CodeExpr::apply(var(k, arity), term_expr))
                } else {
                    self.record(12, "a n b = <d n, b>, d n = |alpha(F_n)|");
                    finalize(arity, CodeExpr::pair_of(term_expr, var(k, arity)))
                }
            }
            13 => {
                self.record(13, "a n b = 0");
                finalize(k + 1, CodeExpr::num(0))
            }
            14..=18 => {
                self.record(d.rule_id, "a n = 0");
                finalize(k, CodeExpr::num(0))
            }
            19 => {
                let x = match &d.payload {
                    Some(Payload::Var(x)) => x.clone(),
                    _ => return Err(shape("missing induction variable")),
                };
                let pos = list.iter().position(|(n, _)| *n == x);
                let prefix: Vec<(String, Type)> =
                    list.iter().filter(|(n, _)| *n != x).cloned().collect();
                let m_list = concat_vars(&prefix, &[(x.clone(), Type::Nat)]);
                let bc = self.node(&d.premises[0], &prefix)?;
                let cc = self.node(&d.premises[1], &m_list)?;
                self.record(19, "a n 0 = b n; a n (i+1) = c n i (a n i)");
                let kp = prefix.len();
                let m_arity = kp + 1;
                let iv = var(kp, m_arity);
                let pred = CodeExpr::Prim(PrimOp::Sub, vec![iv.clone(), CodeExpr::num(1)]);
                let prefix_args: Vec<CodeExpr> = (0..kp).map(|i| var(i, m_arity)).collect();
                let step_args: Vec<CodeExpr> = prefix_args
                    .iter()
                    .cloned()
                    .chain([pred.clone(), CodeExpr::apply(CodeExpr::SelfRef, pred)])
                    .collect();
                let body_m =
                    CodeExpr::if_zero(iv, chain_code(&bc, prefix_args), chain_code(&cc, step_args));
                let a_m = lam(m_arity, body_m).map_err(|e| bad(e.to_string()))?;
                match pos {
                    // Induction variable last: argument orders agree.
                    Some(p) if p + 1 == k => Ok(a_m),
                    Some(p) => {
                        let mut args: Vec<CodeExpr> =
                            (0..k).filter(|i| *i != p).map(|i| var(i, k)).collect();
                        args.push(var(p, k));
                        finalize(k, chain_code(&a_m, args))
                    }
                    None => {
                        // Vacuous induction: specialize the stage to 0.
                        let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, k.max(1))).collect();
                        args.push(CodeExpr::num(0));
                        finalize(k, chain_code(&a_m, args))
                    }
                }
            }
            20 => {
                self.record(20, "a n = 0");
                finalize(k, CodeExpr::num(0))
            }
            21 => {
                let (t1, t2) = match c {
                    Formula::Or(l, _) => match &**l {
                        Formula::Eq(_, t1, t2) => (t1, t2),
                        _ => return Err(shape("expected an equation disjunct")),
                    },
                    _ => return Err(shape("expected a disjunction")),
                };
                let e1 = self.compile(t1, list, k.max(1))?;
                let e2 = self.compile(t2, list, k.max(1))?;
                let test = CodeExpr::Prim(PrimOp::Eq, vec![e1, e2]);
                let body = match self.mode {
                    Mode::Forcing => {
                        self.record(21, "a n = <0,0> if n1 = n2 else <1,0>");
                        CodeExpr::if_zero(
                            test,
                            CodeExpr::pair_of(CodeExpr::num(1), CodeExpr::num(0)),
                            CodeExpr::pair_of(CodeExpr::num(0), CodeExpr::num(0)),
                        )
                    }
                    Mode::Plain => {
                        self.record(21, "a n = <0,0,b> if n1 = n2 else <1,0,b>, b c = 0");
                        let zero_fn =
                            CodeExpr::lit(&default_code(&Type::arrow(Type::Nat, Type::Nat)));
                        CodeExpr::if_zero(
                            test,
                            CodeExpr::tuple_of(vec![
                                CodeExpr::num(1),
                                CodeExpr::num(0),
                                zero_fn.clone(),
                            ]),
                            CodeExpr::tuple_of(vec![CodeExpr::num(0), CodeExpr::num(0), zero_fn]),
                        )
                    }
                };
                finalize(k, body)
            }
            22 => {
                self.record(22, "a n b = (b)_1");
                finalize(k + 1, CodeExpr::proj1(var(k, k + 1)))
            }
            23 => {
                self.record(23, "a n b = 0");
                finalize(k + 1, CodeExpr::num(0))
            }
            24 => {
                self.record(24, "a n b = <a_0 n b, a_1 n b>, a_i n b d = (b d)_i");
                let arity = k + 1;
                let inner_arity = k + 2;
                let applied = CodeExpr::apply(var(k, inner_arity), var(k + 1, inner_arity));
                let a0 = lam(inner_arity, CodeExpr::proj0(applied.clone()))
                    .map_err(|e| bad(e.to_string()))?;
                let a1 =
                    lam(inner_arity, CodeExpr::proj1(applied)).map_err(|e| bad(e.to_string()))?;
                let args: Vec<CodeExpr> = (0..=k).map(|i| var(i, arity)).collect();
                let body = CodeExpr::pair_of(chain_code(&a0, args.clone()), chain_code(&a1, args));
                finalize(arity, body)
            }
            25 => {
                self.record(
                    25,
                    "a b n d = <f b n d, 0, g b n d>; h 0 = <n,d,0>, \
                     h (i+1) = b (h i)_0 (h i)_1; f i = (h i)_0, g i = (h (i+1))_2",
                );
                let arity = k + 3; // n.., b, n0, d
                let h_arity = k + 4;
                let iv = var(k + 3, h_arity);
                let pred = CodeExpr::Prim(PrimOp::Sub, vec![iv.clone(), CodeExpr::num(1)]);
                let h_prev = CodeExpr::apply(CodeExpr::SelfRef, pred);
                let h_body = CodeExpr::if_zero(
                    iv,
                    CodeExpr::tuple_of(vec![
                        var(k + 1, h_arity),
                        var(k + 2, h_arity),
                        CodeExpr::num(0),
                    ]),
                    chain(
                        var(k, h_arity),
                        vec![
                            CodeExpr::proj0(h_prev.clone()),
                            CodeExpr::tuple_component(h_prev, 1, 3),
                        ],
                    ),
                );
                let h = lam(h_arity, h_body).map_err(|e| bad(e.to_string()))?;
                let pass: Vec<CodeExpr> = (0..h_arity - 1).map(|i| var(i, h_arity)).collect();
                let stage = var(k + 3, h_arity);
                let f_body = CodeExpr::proj0(chain_code(
                    &h,
                    pass.iter().cloned().chain([stage.clone()]).collect(),
                ));
                let f = lam(h_arity, f_body).map_err(|e| bad(e.to_string()))?;
                let g_body = CodeExpr::tuple_component(
                    chain_code(
                        &h,
                        pass.iter()
                            .cloned()
                            .chain([CodeExpr::Prim(PrimOp::Add, vec![stage, CodeExpr::num(1)])])
                            .collect(),
                    ),
                    2,
                    3,
                );
                let g = lam(h_arity, g_body).map_err(|e| bad(e.to_string()))?;
                let outer: Vec<CodeExpr> = (0..arity).map(|i| var(i, arity)).collect();
                let body = CodeExpr::tuple_of(vec![
                    chain_code(&f, outer.clone()),
                    CodeExpr::num(0),
                    chain_code(&g, outer),
                ]);
                finalize(arity, body)
            }
            other => Err(ExtractError::Evaluation(format!("unknown rule {other}"))),
        }
    }

    /// Compile a term over the node's variable list into an expression of
    /// an `arity`-argument body; `|alpha(F_n)|` computed at run time.
    fn compile(&self, t: &Term, list: &Vars, arity: usize) -> Result<CodeExpr, ExtractError> {
        let lookup = |name: &str| {
            list.iter()
                .position(|(n, _)| n == name)
                .map(|i| var(i, arity))
        };
        Ok(compile_term(t, self.sig, &lookup)?)
    }
}

fn as_imp(phi: &Formula) -> Option<(&Formula, &Formula)> {
    match phi {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Free variables of the formulas that are not already in the list, in
/// order of appearance.
fn extra_vars(formulas: &[&Formula], list: &Vars) -> Vec<(String, Type)> {
    let mut out: Vec<(String, Type)> = Vec::new();
    for f in formulas {
        for (n, ty) in f.free_vars() {
            if !list.iter().any(|(m, _)| *m == n) && !out.iter().any(|(m, _)| *m == n) {
                out.push((n, ty));
            }
        }
    }
    out
}

fn concat_vars(a: &Vars, b: &Vars) -> Vec<(String, Type)> {
    a.iter().chain(b.iter()).cloned().collect()
}

/// Turn a body over `arity` arguments into an index; a nullary body is
/// evaluated once on the machine (it is closed and oracle-free).
fn finalize(arity: usize, body: CodeExpr) -> Result<Nat, ExtractError> {
    if arity == 0 {
        let wrapped = build(body)
            .map_err(|e| ExtractError::Evaluation(format!("nullary body not closed: {e}")))?;
        match apply(&wrapped, &Nat::from(0u32), &Oracle::empty(), EXTRACT_FUEL) {
            EvalResult::Value(v) => Ok(v),
            other => Err(ExtractError::Evaluation(format!(
                "nullary realizer evaluation: {other}"
            ))),
        }
    } else {
        lam(arity, body).map_err(|e| ExtractError::Evaluation(e.to_string()))
    }
}

// ---------------------------------------------------------------------
// Conservativity demo: the collection principle through choice
// ---------------------------------------------------------------------

/// Data of one run of the collection demo: from a true bounded premise
/// `forall x < a. exists y. phi(x,y)` extract a choice realizer, read the
/// choice function off its first projection, and compute the bound
/// `1 + max { f(x) | x < a }`.
#[derive(Debug, Clone)]
pub struct CollectionDemo {
    /// The choice-axiom instance the realizer is extracted from.
    pub derivation: Derivation,
    /// Realizer of the premise, built from least truth witnesses.
    pub premise_realizer: Nat,
    /// The extracted choice function.
    pub choice_code: Nat,
    /// Values of the choice function below the bound.
    pub values: Vec<Nat>,
    /// The computed collection bound.
    pub bound: Nat,
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("premise instance is false: {0}")]
    PremiseFalse(String),
    #[error("truth evaluation inconclusive at {0}; raise the truth bound")]
    Inconclusive(String),
    #[error("formula must have free variables among {0} and {1}, both of type N")]
    BadShape(String, String),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("machine evaluation failed: {0}")]
    Evaluation(String),
}

/// The guarded matrix `lt(x, a) = S(0) -> phi(x, y)`.
fn guarded_matrix(phi: &Formula, x: &str, a_bound: u64) -> Formula {
    let guard = Formula::eq_n(
        Term::Prim("lt".into(), vec![Term::nvar(x), Term::numeral(a_bound)]),
        Term::numeral(1),
    );
    Formula::imp(guard, phi.clone())
}

/// The choice instance `forall x. exists y. psi -> exists z. forall x.
/// psi[zx/y]` for the guarded matrix, as a one-node derivation.
pub fn collection_derivation(
    phi: &Formula,
    x: &str,
    y: &str,
    a_bound: u64,
) -> Result<Derivation, DemoError> {
    let fv = phi.free_vars();
    let ok = fv.len() <= 2
        && fv
            .iter()
            .all(|(n, t)| (n == x || n == y) && *t == Type::Nat);
    if !ok {
        return Err(DemoError::BadShape(x.to_string(), y.to_string()));
    }
    let psi = guarded_matrix(phi, x, a_bound);
    let zty = Type::arrow(Type::Nat, Type::Nat);
    let zx = Term::app(Term::var("z", zty.clone()), Term::nvar(x));
    let skolem = psi.substitute(y, &zx).expect("sorts are preserved");
    let conclusion = Formula::imp(
        Formula::forall(x, Type::Nat, Formula::exists(y, Type::Nat, psi)),
        Formula::exists("z", zty, Formula::forall(x, Type::Nat, skolem)),
    );
    Ok(Derivation::leaf(24, conclusion))
}

/// Run the demo: check the premise by brute force, build its realizer
/// from least witnesses, extract and apply the choice realizer, and take
/// `1 + max` of the resulting values.
pub fn demo_collection(
    a_bound: u64,
    phi: &Formula,
    x: &str,
    y: &str,
    sig: &Signature,
    truth_bound: u64,
) -> Result<CollectionDemo, DemoError> {
    use crate::selfreal::truth_eval;
    let derivation = collection_derivation(phi, x, y, a_bound)?;

    // Brute-force least witnesses for each x < a.
    let mut witnesses: Vec<Nat> = Vec::new();
    for xv in 0..a_bound {
        let inst = phi
            .substitute(x, &Term::numeral(xv))
            .expect("numerals substitute freely");
        let mut found = None;
        for yv in 0..=truth_bound {
            let at = inst
                .substitute(y, &Term::numeral(yv))
                .expect("numerals substitute freely");
            match truth_eval(&at, truth_bound, sig) {
                crate::heo::Verdict::Holds => {
                    found = Some(Nat::from(yv));
                    break;
                }
                crate::heo::Verdict::Fails => continue,
                crate::heo::Verdict::Exhausted(_) => {
                    return Err(DemoError::Inconclusive(at.to_string()))
                }
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => {
                return Err(DemoError::PremiseFalse(format!(
                    "exists {y}. {inst}, no witness up to {truth_bound}"
                )))
            }
        }
    }

    // Premise realizer: n maps to <w(n), const 0>; beyond the bound the
    // guard is unforceable and the constant-zero code suffices.
    let mut pick = CodeExpr::num(0);
    for (xv, w) in witnesses.iter().enumerate().rev() {
        pick = CodeExpr::if_zero(
            CodeExpr::Prim(PrimOp::Eq, vec![CodeExpr::Arg, CodeExpr::num(xv as u64)]),
            pick,
            CodeExpr::lit(w),
        );
    }
    let premise_realizer = build(CodeExpr::pair_of(pick, CodeExpr::num(0)))
        .map_err(|e| DemoError::Evaluation(e.to_string()))?;

    let extracted = extract(&derivation, sig)?;
    let applied = match apply(
        &extracted.code,
        &premise_realizer,
        &Oracle::empty(),
        EXTRACT_FUEL,
    ) {
        EvalResult::Value(v) => v,
        other => return Err(DemoError::Evaluation(other.to_string())),
    };
    let choice_code = pairing::proj(0, &applied);

    let mut values = Vec::new();
    let mut max: Option<Nat> = None;
    for xv in 0..a_bound {
        match apply(&choice_code, &Nat::from(xv), &Oracle::empty(), EXTRACT_FUEL) {
            EvalResult::Value(v) => {
                if max.as_ref().is_none_or(|m| v > *m) {
                    max = Some(v.clone());
                }
                values.push(v);
            }
            other => return Err(DemoError::Evaluation(other.to_string())),
        }
    }
    let bound = match max {
        Some(m) => m + 1u32,
        None => Nat::from(0u32), // empty range: any bound works
    };
    Ok(CollectionDemo {
        derivation,
        premise_realizer,
        choice_code,
        values,
        bound,
    })
}

/// The least correct collection bound, by independent brute force; `None`
/// if no bound up to the truth bound works.
pub fn minimal_collection_bound(
    a_bound: u64,
    phi: &Formula,
    x: &str,
    y: &str,
    sig: &Signature,
    truth_bound: u64,
) -> Option<u64> {
    use crate::selfreal::truth_eval;
    'bounds: for b in 0..=truth_bound {
        for xv in 0..a_bound {
            let mut any = false;
            for yv in 0..b {
                let at = phi
                    .substitute(x, &Term::numeral(xv))
                    .and_then(|f| f.substitute(y, &Term::numeral(yv)))
                    .expect("numerals substitute freely");
                if truth_eval(&at, truth_bound, sig) == crate::heo::Verdict::Holds {
                    any = true;
                    break;
                }
            }
            if !any {
                continue 'bounds;
            }
        }
        return Some(b);
    }
    None
}
