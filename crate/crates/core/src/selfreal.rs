//! Self-realizability of first-order sentences: a bounded truth oracle,
//! condition sets keyed by subformula indices, the self-realizing index,
//! and the two round trips between truth and realizability.
//!
//! A condition `p` belongs to the set `T` of a formula when every key it
//! binds is the key of a disjunction (value = the index of a true
//! disjunct) or of an existential (value = a true witness). The admissible
//! key/value table is precomputed from the truth oracle when the
//! description is built, so membership afterwards is a pure lookup and
//! the empty condition always belongs.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{ToPrimitive, Zero};

use thiserror::Error;

use crate::codes::{
    apply, chain_code, lam, pairing, tuple, var, CodeExpr, EvalResult, Fuel, Oracle,
};
use crate::heo::{Exhaustion, ForcingUniverse, TsetFilter, UniverseError, Verdict};
use crate::realizability::check_pair;
use crate::syntax::{
    subformula_table, Formula, Signature, SubformulaEntry, SubformulaError, Term, Type,
};
use crate::Nat;

#[derive(Debug, Error)]
pub enum SelfRealError {
    #[error("formula is not first-order")]
    NotFirstOrder,
    #[error("formula is not a sentence")]
    NotClosed,
    #[error("truth oracle inconclusive on {0}")]
    OracleInconclusive(String),
    #[error("formula instance is false: {0}")]
    PremiseFalse(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("machine evaluation failed: {0}")]
    Evaluation(String),
}

impl From<SubformulaError> for SelfRealError {
    fn from(_: SubformulaError) -> Self {
        SelfRealError::NotFirstOrder
    }
}

// ---------------------------------------------------------------------
// Bounded truth
// ---------------------------------------------------------------------

/// Tarski evaluation of first-order sentences with quantifiers searched
/// over `0..=bound`. Exact on guarded quantifiers (`lt(x,t) = S(0)`
/// guards with `t` below the bound); otherwise a universal that survives
/// the scan or an existential with no witness found is `Exhausted`.
pub struct TruthOracle<'a> {
    pub bound: u64,
    sig: &'a Signature,
    memo: RefCell<HashMap<Formula, Verdict>>,
}

impl<'a> TruthOracle<'a> {
    pub fn new(bound: u64, sig: &'a Signature) -> Self {
        TruthOracle {
            bound,
            sig,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Truth of a closed first-order formula.
    pub fn eval(&self, phi: &Formula) -> Verdict {
        if let Some(v) = self.memo.borrow().get(phi) {
            return *v;
        }
        let v = self.eval_uncached(phi);
        self.memo.borrow_mut().insert(phi.clone(), v);
        v
    }

    fn eval_uncached(&self, phi: &Formula) -> Verdict {
        match phi {
            Formula::Eq(_, l, r) => match (self.term(l), self.term(r)) {
                (Some(a), Some(b)) => {
                    if a == b {
                        Verdict::Holds
                    } else {
                        Verdict::Fails
                    }
                }
                _ => Verdict::Exhausted(Exhaustion::TruthBound),
            },
            Formula::And(a, b) => match (self.eval(a), self.eval(b)) {
                (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
                (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
                _ => Verdict::Exhausted(Exhaustion::TruthBound),
            },
            Formula::Or(a, b) => match (self.eval(a), self.eval(b)) {
                (Verdict::Holds, _) | (_, Verdict::Holds) => Verdict::Holds,
                (Verdict::Fails, Verdict::Fails) => Verdict::Fails,
                _ => Verdict::Exhausted(Exhaustion::TruthBound),
            },
            Formula::Imp(a, b) => match (self.eval(a), self.eval(b)) {
                (Verdict::Fails, _) | (_, Verdict::Holds) => Verdict::Holds,
                (Verdict::Holds, Verdict::Fails) => Verdict::Fails,
                _ => Verdict::Exhausted(Exhaustion::TruthBound),
            },
            Formula::Exists(x, _, body) => {
                let mut exhausted = false;
                for n in 0..=self.bound {
                    let inst = body
                        .substitute(x, &Term::numeral(n))
                        .expect("numerals substitute freely");
                    match self.eval(&inst) {
                        Verdict::Holds => return Verdict::Holds,
                        Verdict::Fails => {}
                        Verdict::Exhausted(_) => exhausted = true,
                    }
                }
                if !exhausted && self.guard_bound(body, x, GuardShape::Conj).is_some() {
                    Verdict::Fails
                } else {
                    Verdict::Exhausted(Exhaustion::TruthBound)
                }
            }
            Formula::Forall(x, _, body) => {
                let mut exhausted = false;
                for n in 0..=self.bound {
                    let inst = body
                        .substitute(x, &Term::numeral(n))
                        .expect("numerals substitute freely");
                    match self.eval(&inst) {
                        Verdict::Fails => return Verdict::Fails,
                        Verdict::Holds => {}
                        Verdict::Exhausted(_) => exhausted = true,
                    }
                }
                if !exhausted && self.guard_bound(body, x, GuardShape::Imp).is_some() {
                    Verdict::Holds
                } else {
                    Verdict::Exhausted(Exhaustion::TruthBound)
                }
            }
        }
    }

    /// A quantifier body is explicitly bounded when it is guarded by
    /// `lt(x, t) = S(0)` (conjunctively for existentials, as an
    /// antecedent for universals) with `t` closed and within the scan.
    fn guard_bound(&self, body: &Formula, x: &str, shape: GuardShape) -> Option<u64> {
        let guard = match (shape, body) {
            (GuardShape::Imp, Formula::Imp(g, _)) => g,
            (GuardShape::Conj, Formula::And(g, _)) => g,
            _ => return None,
        };
        if let Formula::Eq(Type::Nat, l, r) = &**guard {
            if *r != Term::numeral(1) {
                return None;
            }
            if let Term::Prim(name, args) = l {
                if name == "lt" && args.len() == 2 && args[0] == Term::nvar(x) {
                    let limit = self.term(&args[1])?.to_u64()?;
                    if limit <= self.bound + 1 {
                        return Some(limit);
                    }
                }
            }
        }
        None
    }

    /// Value of a closed first-order term; total except for out-of-reach
    /// constructs.
    fn term(&self, t: &Term) -> Option<Nat> {
        match t {
            Term::Zero => Some(Nat::zero()),
            Term::App(f, x) if **f == Term::Succ => Some(self.term(x)? + 1u32),
            Term::Prim(name, args) => {
                let vals: Option<Vec<Nat>> = args.iter().map(|a| self.term(a)).collect();
                self.sig.evaluate(name, &vals?)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Copy)]
enum GuardShape {
    Imp,
    Conj,
}

/// Truth of a closed first-order formula with quantifiers over
/// `0..=bound`.
pub fn truth_eval(phi: &Formula, bound: u64, sig: &Signature) -> Verdict {
    TruthOracle::new(bound, sig).eval(phi)
}

// ---------------------------------------------------------------------
// The condition set T
// ---------------------------------------------------------------------

/// The condition set of a first-order sentence: its subformula table and
/// the admissible key/value table.
#[derive(Debug, Clone)]
pub struct TDescription {
    /// Subformula occurrences of the renamed formula, root first.
    pub table: Vec<SubformulaEntry>,
    /// The formula with binders renamed apart; indices refer to it.
    pub formula: Formula,
    /// Numeral range used for key arguments under binders.
    pub num_set: Vec<Nat>,
    /// Witness values considered for existential keys.
    pub witness_bound: u64,
    allowed: BTreeMap<Nat, BTreeSet<Nat>>,
}

impl TDescription {
    /// Precompute the admissible table. Every needed truth instance must
    /// be decided by the oracle, otherwise construction reports which one
    /// was inconclusive.
    pub fn new(
        phi: &Formula,
        truth: &TruthOracle,
        num_set: &[Nat],
        witness_bound: u64,
    ) -> Result<TDescription, SelfRealError> {
        if !phi.is_first_order() {
            return Err(SelfRealError::NotFirstOrder);
        }
        let table = subformula_table(phi)?;
        let formula = table[0].formula.clone();
        let mut allowed: BTreeMap<Nat, BTreeSet<Nat>> = BTreeMap::new();
        for (j, entry) in table.iter().enumerate() {
            let arity = entry.vars.len();
            let is_or = matches!(entry.formula, Formula::Or(..));
            let is_ex = matches!(entry.formula, Formula::Exists(..));
            if !is_or && !is_ex {
                continue;
            }
            for args in tuples_over(num_set, arity) {
                let inst = instantiate(&entry.formula, &entry.vars, &args);
                let mut values = BTreeSet::new();
                match &inst {
                    Formula::Or(l, r) => {
                        for (tag, side) in [(0u64, l), (1u64, r)] {
                            match truth.eval(side) {
                                Verdict::Holds => {
                                    values.insert(Nat::from(tag));
                                }
                                Verdict::Fails => {}
                                Verdict::Exhausted(_) => {
                                    return Err(SelfRealError::OracleInconclusive(side.to_string()))
                                }
                            }
                        }
                    }
                    Formula::Exists(x, _, body) => {
                        for w in 0..=witness_bound {
                            let at = body
                                .substitute(x, &Term::numeral(w))
                                .expect("numerals substitute freely");
                            match truth.eval(&at) {
                                Verdict::Holds => {
                                    values.insert(Nat::from(w));
                                }
                                Verdict::Fails => {}
                                Verdict::Exhausted(_) => {
                                    return Err(SelfRealError::OracleInconclusive(at.to_string()))
                                }
                            }
                        }
                    }
                    _ => unreachable!(),
                }
                if !values.is_empty() {
                    allowed.insert(subformula_key(j, &args), values);
                }
            }
        }
        Ok(TDescription {
            table,
            formula,
            num_set: num_set.to_vec(),
            witness_bound,
            allowed,
        })
    }

    /// The key a condition binds for subformula `j` at the given numeral
    /// arguments.
    pub fn key(&self, j: usize, args: &[Nat]) -> Nat {
        subformula_key(j, args)
    }

    pub fn filter(&self) -> TsetFilter {
        TsetFilter::Keyed(self.allowed.clone())
    }

    /// A forcing universe whose conditions are exactly the members of T
    /// within the precomputed key table.
    pub fn universe(&self, fuel: Fuel) -> ForcingUniverse {
        let val_bound = self
            .allowed
            .values()
            .flat_map(|s| s.iter())
            .max()
            .cloned()
            .unwrap_or_else(Nat::zero);
        ForcingUniverse {
            key_set: self.allowed.keys().cloned().collect(),
            val_bound,
            num_set: self.num_set.clone(),
            fuel,
            tset: self.filter(),
        }
    }
}

/// `<j, n_1, .., n_k>`: the pair of the subformula index and the packed
/// argument tuple (0 when there are no arguments).
pub fn subformula_key(j: usize, args: &[Nat]) -> Nat {
    pairing::pair(&Nat::from(j), &tuple(args))
}

/// Membership in T: every bound key admits the bound value.
pub fn t_membership(p: &Oracle, desc: &TDescription) -> bool {
    desc.filter().accepts(p)
}

fn instantiate(phi: &Formula, vars: &[(String, Type)], args: &[Nat]) -> Formula {
    let mut out = phi.clone();
    for ((name, _), value) in vars.iter().zip(args) {
        let numeral = Term::numeral(value.to_u64().expect("small numeral"));
        out = out
            .substitute(name, &numeral)
            .expect("numerals substitute freely");
    }
    out
}

fn tuples_over(num_set: &[Nat], arity: usize) -> Vec<Vec<Nat>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for prefix in &out {
            for n in num_set {
                let mut item = prefix.clone();
                item.push(n.clone());
                next.push(item);
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------
// The self-realizing index
// ---------------------------------------------------------------------

/// The self-realizing index of a first-order formula, together with the
/// subformula table its oracle keys refer to.
#[derive(Debug, Clone)]
pub struct SelfIndex {
    pub code: Nat,
    pub table: Vec<SubformulaEntry>,
    /// The renamed formula the index realizes (at its numeral instances).
    pub formula: Formula,
}

/// Build the self-realizing index: atoms map to 0, conjunctions pair
/// their children, disjunctions read their tag from the oracle,
/// implications discard the hypothetical realizer and answer with the
/// consequent's index, existentials pair the oracle witness with the
/// child at that witness, universals pass the extra numeral through.
/// Indices over the empty variable list consume one dummy argument.
pub fn self_index(phi: &Formula, sig: &Signature) -> Result<SelfIndex, SelfRealError> {
    if !phi.is_first_order() {
        return Err(SelfRealError::NotFirstOrder);
    }
    let table = subformula_table(phi)?;
    let formula = table[0].formula.clone();
    let mut counter = 0usize;
    let code = build_index(&formula, table[0].vars.len(), &mut counter, sig)?;
    Ok(SelfIndex {
        code,
        table,
        formula,
    })
}

fn build_index(
    phi: &Formula,
    k: usize,
    counter: &mut usize,
    sig: &Signature,
) -> Result<Nat, SelfRealError> {
    let j = *counter;
    *counter += 1;
    let arity = k.max(1);
    let fail = |e: crate::codes::BuildError| SelfRealError::Evaluation(e.to_string());
    // The oracle key for this node, over the real (non-dummy) arguments.
    let key_expr = |total: usize| {
        let args: Vec<CodeExpr> = (0..k).map(|i| var(i, total)).collect();
        CodeExpr::pair_of(CodeExpr::Num(Nat::from(j)), CodeExpr::tuple_of(args))
    };
    match phi {
        Formula::Eq(..) => lam(arity, CodeExpr::num(0)).map_err(fail),
        Formula::And(f, g) => {
            let cf = build_index(f, k, counter, sig)?;
            let cg = build_index(g, k, counter, sig)?;
            let pass: Vec<CodeExpr> = (0..arity).map(|i| var(i, arity)).collect();
            lam(
                arity,
                CodeExpr::pair_of(chain_code(&cf, pass.clone()), chain_code(&cg, pass)),
            )
            .map_err(fail)
        }
        Formula::Or(f, g) => {
            let cf = build_index(f, k, counter, sig)?;
            let cg = build_index(g, k, counter, sig)?;
            let pass: Vec<CodeExpr> = (0..arity).map(|i| var(i, arity)).collect();
            let tag = CodeExpr::oracle_at(key_expr(arity));
            lam(
                arity,
                CodeExpr::pair_of(
                    tag.clone(),
                    CodeExpr::if_zero(tag, chain_code(&cf, pass.clone()), chain_code(&cg, pass)),
                ),
            )
            .map_err(fail)
        }
        Formula::Imp(f, g) => {
            // The antecedent's index is built only to keep table indices
            // aligned; the recipe never consults it.
            let _cf = build_index(f, k, counter, sig)?;
            let cg = build_index(g, k, counter, sig)?;
            let total = arity + 1;
            let pass: Vec<CodeExpr> = (0..arity).map(|i| var(i, total)).collect();
            lam(total, chain_code(&cg, pass)).map_err(fail)
        }
        Formula::Exists(_, _, body) => {
            let child = build_index(body, k + 1, counter, sig)?;
            let witness = CodeExpr::oracle_at(key_expr(arity));
            let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, arity)).collect();
            args.push(witness.clone());
            lam(arity, CodeExpr::pair_of(witness, chain_code(&child, args))).map_err(fail)
        }
        Formula::Forall(_, _, body) => {
            let child = build_index(body, k + 1, counter, sig)?;
            let total = arity + 1;
            let mut args: Vec<CodeExpr> = (0..k).map(|i| var(i, total)).collect();
            args.push(var(total - 1, total));
            lam(total, chain_code(&child, args)).map_err(fail)
        }
    }
}

// ---------------------------------------------------------------------
// Round trips
// ---------------------------------------------------------------------

/// Everything needed to run the self-realizability construction for one
/// first-order sentence.
pub struct SelfReal<'a> {
    pub sig: &'a Signature,
    pub truth_bound: u64,
    pub desc: TDescription,
    pub index: SelfIndex,
}

/// Outcome of checking the truth-from-realizer direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundTrip {
    pub check: Verdict,
    pub truth: Verdict,
    /// The law "a checking pair implies truth": fails exactly when the
    /// check holds and the sentence is false.
    pub law: Verdict,
}

impl<'a> SelfReal<'a> {
    /// Build the condition set and the self index for a closed
    /// first-order formula.
    pub fn new(
        phi: &Formula,
        truth_bound: u64,
        num_set: &[Nat],
        witness_bound: u64,
        sig: &'a Signature,
    ) -> Result<Self, SelfRealError> {
        if !phi.is_closed() {
            return Err(SelfRealError::NotClosed);
        }
        let truth = TruthOracle::new(truth_bound, sig);
        let desc = TDescription::new(phi, &truth, num_set, witness_bound)?;
        let index = self_index(phi, sig)?;
        Ok(SelfReal {
            sig,
            truth_bound,
            desc,
            index,
        })
    }

    pub fn universe(&self, fuel: Fuel) -> ForcingUniverse {
        self.desc.universe(fuel)
    }

    fn truth(&self) -> TruthOracle<'a> {
        TruthOracle::new(self.truth_bound, self.sig)
    }

    /// Truth of the sentence itself.
    pub fn sentence_truth(&self) -> Verdict {
        self.truth().eval(&self.desc.formula)
    }

    /// Extend `p` along the true subformulas (disjunction tags and
    /// existential witnesses) to a `q` in T under which the self index
    /// evaluates; returns `q` and the realizer value.
    pub fn realize_true(&self, p: &Oracle, fuel: Fuel) -> Result<(Oracle, Nat), SelfRealError> {
        if !t_membership(p, &self.desc) {
            return Err(SelfRealError::Universe(UniverseError::UniverseEmpty(
                p.to_string(),
            )));
        }
        let truth = self.truth();
        match truth.eval(&self.desc.formula) {
            Verdict::Holds => {}
            Verdict::Fails => {
                return Err(SelfRealError::PremiseFalse(self.desc.formula.to_string()))
            }
            Verdict::Exhausted(_) => {
                return Err(SelfRealError::OracleInconclusive(
                    self.desc.formula.to_string(),
                ))
            }
        }
        let mut q = p.clone();
        self.extend(0, &self.desc.formula, &[], &truth, &mut q)?;
        // The index of a sentence consumes one dummy argument.
        let value = match apply(&self.index.code, &Nat::zero(), &q, fuel) {
            EvalResult::Value(v) => v,
            other => return Err(SelfRealError::Evaluation(other.to_string())),
        };
        Ok((q, value))
    }

    /// Walk the true part of the formula, filling tags and witnesses.
    /// Implications and universals are left to the checking relation's
    /// own extension searches.
    fn extend(
        &self,
        j: usize,
        phi: &Formula,
        env: &[Nat],
        truth: &TruthOracle,
        q: &mut Oracle,
    ) -> Result<(), SelfRealError> {
        match phi {
            Formula::Eq(..) | Formula::Imp(..) | Formula::Forall(..) => Ok(()),
            Formula::And(f, g) => {
                self.extend(j + 1, f, env, truth, q)?;
                self.extend(j + 1 + node_count(f), g, env, truth, q)
            }
            Formula::Or(f, g) => {
                let key = subformula_key(j, env);
                let tag = match q.get(&key) {
                    Some(v) => v.clone(),
                    None => {
                        let left = instantiate_at(f, &self.desc.table[j].vars, env);
                        let pick = match truth.eval(&left) {
                            Verdict::Holds => 0u32,
                            Verdict::Fails => 1u32,
                            Verdict::Exhausted(_) => {
                                return Err(SelfRealError::OracleInconclusive(left.to_string()))
                            }
                        };
                        q.insert(key, Nat::from(pick));
                        Nat::from(pick)
                    }
                };
                if tag.is_zero() {
                    self.extend(j + 1, f, env, truth, q)
                } else {
                    self.extend(j + 1 + node_count(f), g, env, truth, q)
                }
            }
            Formula::Exists(x, _, body) => {
                let key = subformula_key(j, env);
                let w = match q.get(&key) {
                    Some(v) => v.clone(),
                    None => {
                        let mut found = None;
                        for wv in 0..=self.desc.witness_bound {
                            let inst = instantiate_at(body, &self.desc.table[j + 1].vars, &{
                                let mut e = env.to_vec();
                                e.push(Nat::from(wv));
                                e
                            });
                            match truth.eval(&inst) {
                                Verdict::Holds => {
                                    found = Some(Nat::from(wv));
                                    break;
                                }
                                Verdict::Fails => {}
                                Verdict::Exhausted(_) => {
                                    return Err(SelfRealError::OracleInconclusive(inst.to_string()))
                                }
                            }
                        }
                        let w = found.ok_or_else(|| {
                            SelfRealError::PremiseFalse(format!("exists {x}. {body}"))
                        })?;
                        q.insert(key, w.clone());
                        w
                    }
                };
                let mut env2 = env.to_vec();
                env2.push(w);
                self.extend(j + 1, body, &env2, truth, q)
            }
        }
    }

    /// Run both directions: the bounded check of `(a,b)` against the
    /// sentence over the universe, and the truth oracle.
    pub fn truth_from_realizer(
        &self,
        p: &Oracle,
        a: &Nat,
        b: &Nat,
        u: &ForcingUniverse,
    ) -> Result<RoundTrip, SelfRealError> {
        let check = check_pair(u, p, a, b, &self.desc.formula, self.sig)?;
        let truth = self.truth().eval(&self.desc.formula);
        let law = match (check, truth) {
            (Verdict::Holds, Verdict::Fails) => Verdict::Fails,
            (Verdict::Exhausted(e), _) | (_, Verdict::Exhausted(e)) => Verdict::Exhausted(e),
            _ => Verdict::Holds,
        };
        Ok(RoundTrip { check, truth, law })
    }
}

fn instantiate_at(phi: &Formula, vars: &[(String, Type)], env: &[Nat]) -> Formula {
    instantiate(phi, vars, env)
}

fn node_count(phi: &Formula) -> usize {
    match phi {
        Formula::Eq(..) => 1,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            1 + node_count(a) + node_count(b)
        }
        Formula::Exists(_, _, b) | Formula::Forall(_, _, b) => 1 + node_count(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::pairing::nat;
    use crate::realizability::check_single;
    use crate::syntax::parse_formula;

    const FUEL: Fuel = 100_000;

    fn sig() -> Signature {
        Signature::standard()
    }

    fn fml(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    fn nums() -> Vec<Nat> {
        (0..5u64).map(Nat::from).collect()
    }

    #[test]
    fn truth_decides_atoms_and_connectives() {
        let s = sig();
        assert_eq!(truth_eval(&fml("0 =N 0"), 4, &s), Verdict::Holds);
        assert_eq!(truth_eval(&fml("0 =N S(0)"), 4, &s), Verdict::Fails);
        assert_eq!(
            truth_eval(&fml("0 =N 0 & 0 =N S(0)"), 4, &s),
            Verdict::Fails
        );
        assert_eq!(
            truth_eval(&fml("0 =N S(0) | 0 =N 0"), 4, &s),
            Verdict::Holds
        );
    }

    #[test]
    fn truth_finds_existential_witnesses_within_bound() {
        let s = sig();
        assert_eq!(
            truth_eval(&fml("exists x:N. x =N S(S(0))"), 4, &s),
            Verdict::Holds
        );
        // Witness out of reach: inconclusive rather than false.
        assert!(truth_eval(&fml("exists x:N. x =N S(S(0))"), 1, &s).is_exhausted());
        // No witness and unbounded: inconclusive.
        assert!(truth_eval(&fml("exists x:N. S(x) =N 0"), 6, &s).is_exhausted());
    }

    #[test]
    fn truth_policy_on_universals() {
        let s = sig();
        // Unbounded universal: held up to the bound, reported exhausted.
        assert!(truth_eval(&fml("forall x:N. mul(x,0) =N 0"), 8, &s).is_exhausted());
        // Counterexamples are exact.
        assert_eq!(
            truth_eval(&fml("forall x:N. x =N 0"), 8, &s),
            Verdict::Fails
        );
        // Guarded universal below the bound is exact.
        assert_eq!(
            truth_eval(
                &fml("forall x:N. lt(x,S(S(0))) =N S(0) -> lt(x,S(S(S(0)))) =N S(0)"),
                8,
                &s
            ),
            Verdict::Holds
        );
        // Guarded existential with no witness is exactly false.
        assert_eq!(
            truth_eval(&fml("exists x:N. lt(x,S(S(0))) =N S(0) & S(x) =N 0"), 8, &s),
            Verdict::Fails
        );
    }

    #[test]
    fn empty_condition_is_always_in_t() {
        let s = sig();
        let truth = TruthOracle::new(8, &s);
        for src in ["0 =N 0", "0 =N 0 | 0 =N S(0)", "exists x:N. x =N S(S(0))"] {
            let td = TDescription::new(&fml(src), &truth, &nums(), 4).unwrap();
            assert!(t_membership(&Oracle::empty(), &td), "empty in T for {src}");
        }
    }

    #[test]
    fn membership_follows_truth() {
        let s = sig();
        let truth = TruthOracle::new(8, &s);
        let phi = fml("exists x:N. x =N S(S(0))");
        let td = TDescription::new(&phi, &truth, &nums(), 4).unwrap();
        let key = td.key(0, &[]);
        let yes = Oracle::from_entries([(key.clone(), nat(2))]);
        let no = Oracle::from_entries([(key.clone(), nat(3))]);
        assert!(t_membership(&yes, &td));
        assert!(!t_membership(&no, &td));
        // A key of a conjunction subformula is never admissible.
        let conj = fml("0 =N 0 & 0 =N 0");
        let td2 = TDescription::new(&conj, &truth, &nums(), 4).unwrap();
        let bad = Oracle::from_entries([(td2.key(0, &[]), nat(0))]);
        assert!(!t_membership(&bad, &td2));
    }

    #[test]
    fn restriction_closure_of_t() {
        // q in T and p a restriction of q imply p in T.
        let s = sig();
        let truth = TruthOracle::new(8, &s);
        let phi = fml("(0 =N 0 | 0 =N S(0)) & (exists x:N. x =N S(0))");
        let td = TDescription::new(&phi, &truth, &nums(), 4).unwrap();
        let u = td.universe(FUEL);
        for q in u.conditions() {
            assert!(t_membership(&q, &td));
            for (k, v) in q.iter() {
                let mut p = q.clone();
                let _ = (k, v);
                p = {
                    let mut entries: Vec<(Nat, Nat)> =
                        p.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
                    entries.retain(|(a, _)| a != k);
                    Oracle::from_entries(entries)
                };
                assert!(t_membership(&p, &td));
            }
        }
    }

    #[test]
    fn self_index_of_an_atom_is_constantly_zero() {
        let s = sig();
        let idx = self_index(&fml("0 =N 0"), &s).unwrap();
        assert_eq!(
            apply(&idx.code, &nat(0), &Oracle::empty(), FUEL),
            EvalResult::Value(nat(0))
        );
    }

    #[test]
    fn self_index_of_disjunction_reads_the_tag() {
        let s = sig();
        let phi = fml("0 =N S(0) | 0 =N 0");
        let idx = self_index(&phi, &s).unwrap();
        let key = subformula_key(0, &[]);
        let p = Oracle::from_entries([(key, nat(1))]);
        match apply(&idx.code, &nat(0), &p, FUEL) {
            EvalResult::Value(v) => {
                assert_eq!(pairing::proj(0, &v), nat(1));
            }
            other => panic!("{other}"),
        }
        // Without the tag the index is undefined.
        assert!(matches!(
            apply(&idx.code, &nat(0), &Oracle::empty(), FUEL),
            EvalResult::OracleMiss(_)
        ));
    }

    #[test]
    fn realize_true_roundtrip_on_witnessed_existential() {
        let s = sig();
        let phi = fml("exists x:N. x =N S(S(0))");
        let sr = SelfReal::new(&phi, 8, &nums(), 4, &s).unwrap();
        let (q, realizer) = sr.realize_true(&Oracle::empty(), FUEL).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(pairing::proj(0, &realizer), nat(2));
        let u = sr.universe(FUEL);
        assert_eq!(
            check_single(&u, &q, &realizer, &sr.desc.formula, &s),
            Ok(Verdict::Holds)
        );
    }

    #[test]
    fn realize_true_picks_the_true_disjunct() {
        let s = sig();
        let phi = fml("0 =N S(0) | 0 =N 0");
        let sr = SelfReal::new(&phi, 8, &nums(), 4, &s).unwrap();
        let (q, realizer) = sr.realize_true(&Oracle::empty(), FUEL).unwrap();
        assert_eq!(pairing::proj(0, &realizer), nat(1));
        let u = sr.universe(FUEL);
        assert_eq!(
            check_single(&u, &q, &realizer, &sr.desc.formula, &s),
            Ok(Verdict::Holds)
        );
    }

    #[test]
    fn realize_true_refuses_false_sentences() {
        let s = sig();
        let phi = fml("0 =N S(0)");
        let sr = SelfReal::new(&phi, 8, &nums(), 4, &s).unwrap();
        assert!(matches!(
            sr.realize_true(&Oracle::empty(), FUEL),
            Err(SelfRealError::PremiseFalse(_))
        ));
    }

    #[test]
    fn no_checking_pair_for_a_false_disjunction() {
        // A fabricated left-tagged pair at (0 = S0) | (0 = 0) fails under
        // every condition of the universe: the tag demands a realizer of
        // the false disjunct.
        let s = sig();
        let phi = fml("0 =N S(0) | 0 =N 0");
        let sr = SelfReal::new(&phi, 8, &nums(), 4, &s).unwrap();
        let u = sr.universe(FUEL);
        let fake = pairing::pair(&nat(0), &nat(0));
        for p in u.conditions() {
            let rt = sr.truth_from_realizer(&p, &fake, &fake, &u).unwrap();
            assert_eq!(rt.check, Verdict::Fails, "under {p}");
            assert_eq!(rt.law, Verdict::Holds);
        }
    }

    #[test]
    fn truth_from_realizer_agrees_on_realized_sentences() {
        let s = sig();
        let phi = fml("exists x:N. (x =N S(0) | x =N 0)");
        let sr = SelfReal::new(&phi, 8, &nums(), 4, &s).unwrap();
        let (q, realizer) = sr.realize_true(&Oracle::empty(), FUEL).unwrap();
        let u = sr.universe(FUEL);
        let rt = sr
            .truth_from_realizer(&q, &realizer, &realizer, &u)
            .unwrap();
        assert_eq!(rt.check, Verdict::Holds);
        assert_eq!(rt.truth, Verdict::Holds);
        assert_eq!(rt.law, Verdict::Holds);
    }

    #[test]
    fn non_first_order_input_is_rejected() {
        let s = sig();
        let phi = fml("forall f:N->N. app(f,0) =N 0");
        assert!(matches!(
            self_index(&phi, &s),
            Err(SelfRealError::NotFirstOrder)
        ));
    }
}
