//! Hilbert-style derivations and their checker.
//!
//! A derivation is an explicit tree; each node names one of the 25
//! axiom/rule schemes, carries its conclusion and premises, and for the
//! two schemes where the instance is not recoverable from the conclusion
//! alone (term instantiation and induction) a payload. Axiom schemes
//! accept arbitrary term instances at their schematic variable positions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::formula::Formula;
use super::parse::{ParseError, Parser};
use super::signature::Signature;
use super::term::Term;
use super::ty::Type;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Payload {
    /// The witness term for quantifier instantiation (rule 12).
    Term(Term),
    /// The induction variable (rule 19).
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule_id: u8,
    pub conclusion: Formula,
    pub premises: Vec<Derivation>,
    pub payload: Option<Payload>,
}

impl Derivation {
    pub fn leaf(rule_id: u8, conclusion: Formula) -> Derivation {
        Derivation {
            rule_id,
            conclusion,
            premises: vec![],
            payload: None,
        }
    }

    pub fn node(rule_id: u8, conclusion: Formula, premises: Vec<Derivation>) -> Derivation {
        Derivation {
            rule_id,
            conclusion,
            premises,
            payload: None,
        }
    }

    pub fn with_payload(mut self, payload: Payload) -> Derivation {
        self.payload = Some(payload);
        self
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(Derivation::node_count)
            .sum::<usize>()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("rule {rule} at '{node}': {reason}")]
    RuleShape {
        rule: u8,
        node: String,
        reason: String,
    },
    #[error("rule {rule} at '{node}': side condition violated: {reason}")]
    SideCondition {
        rule: u8,
        node: String,
        reason: String,
    },
    #[error("ill-sorted formula '{node}': {reason}")]
    Sort { node: String, reason: String },
    #[error("unknown rule id {0}")]
    UnknownRule(u8),
}

fn shape(d: &Derivation, reason: impl Into<String>) -> CheckError {
    CheckError::RuleShape {
        rule: d.rule_id,
        node: d.conclusion.to_string(),
        reason: reason.into(),
    }
}

fn side(d: &Derivation, reason: impl Into<String>) -> CheckError {
    CheckError::SideCondition {
        rule: d.rule_id,
        node: d.conclusion.to_string(),
        reason: reason.into(),
    }
}

/// Check every node of the derivation and return the free variables of
/// the root conclusion in order of first occurrence — the canonical
/// closure list its extracted realizer abstracts over.
pub fn check_derivation(
    d: &Derivation,
    sig: &Signature,
) -> Result<Vec<(String, Type)>, CheckError> {
    check_node(d, sig)?;
    Ok(d.conclusion.free_vars())
}

fn check_node(d: &Derivation, sig: &Signature) -> Result<(), CheckError> {
    for p in &d.premises {
        check_node(p, sig)?;
    }
    d.conclusion
        .check_sorts(sig)
        .map_err(|e| CheckError::Sort {
            node: d.conclusion.to_string(),
            reason: e.to_string(),
        })?;
    if !d.conclusion.is_l_formula() {
        return Err(shape(d, "derivations may not mention index constants"));
    }
    let need = premise_count(d.rule_id).ok_or(CheckError::UnknownRule(d.rule_id))?;
    if d.premises.len() != need {
        return Err(shape(
            d,
            format!("expected {need} premises, found {}", d.premises.len()),
        ));
    }
    check_rule(d, sig)
}

fn premise_count(rule: u8) -> Option<usize> {
    Some(match rule {
        1 | 4 | 5 | 9 | 12..=18 | 20..=25 => 0,
        8 | 10 | 11 => 1,
        2 | 3 | 6 | 7 | 19 => 2,
        _ => return None,
    })
}

fn as_imp(phi: &Formula) -> Option<(&Formula, &Formula)> {
    match phi {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

fn check_rule(d: &Derivation, sig: &Signature) -> Result<(), CheckError> {
    let c = &d.conclusion;
    match d.rule_id {
        1 => {
            let (a, b) = as_imp(c).ok_or_else(|| shape(d, "expected phi -> phi"))?;
            if a != b {
                return Err(shape(d, "antecedent and consequent differ"));
            }
            Ok(())
        }
        2 => {
            let minor = &d.premises[0].conclusion;
            let (a, b) = as_imp(&d.premises[1].conclusion)
                .ok_or_else(|| shape(d, "major premise is not an implication"))?;
            if a != minor {
                return Err(shape(d, "minor premise does not match the antecedent"));
            }
            if b != c {
                return Err(shape(d, "conclusion does not match the consequent"));
            }
            Ok(())
        }
        3 => {
            let (a1, b1) = as_imp(&d.premises[0].conclusion)
                .ok_or_else(|| shape(d, "first premise is not an implication"))?;
            let (a2, b2) = as_imp(&d.premises[1].conclusion)
                .ok_or_else(|| shape(d, "second premise is not an implication"))?;
            let (ca, cb) = as_imp(c).ok_or_else(|| shape(d, "conclusion is not an implication"))?;
            if b1 != a2 {
                return Err(shape(d, "middle formulas do not match"));
            }
            if ca != a1 || cb != b2 {
                return Err(shape(d, "conclusion does not compose the premises"));
            }
            Ok(())
        }
        4 => {
            let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            match ante {
                Formula::And(l, r) if **l == *cons || **r == *cons => Ok(()),
                Formula::And(_, _) => Err(shape(d, "consequent is neither conjunct")),
                _ => Err(shape(d, "antecedent is not a conjunction")),
            }
        }
        5 => {
            let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            match cons {
                Formula::Or(l, r) if **l == *ante || **r == *ante => Ok(()),
                Formula::Or(_, _) => Err(shape(d, "antecedent is neither disjunct")),
                _ => Err(shape(d, "consequent is not a disjunction")),
            }
        }
        6 => {
            let (x1, f) = as_imp(&d.premises[0].conclusion)
                .ok_or_else(|| shape(d, "first premise is not an implication"))?;
            let (x2, g) = as_imp(&d.premises[1].conclusion)
                .ok_or_else(|| shape(d, "second premise is not an implication"))?;
            if x1 != x2 {
                return Err(shape(d, "premises have different antecedents"));
            }
            let want = Formula::imp(x1.clone(), Formula::and(f.clone(), g.clone()));
            if *c != want {
                return Err(shape(d, format!("conclusion should be '{want}'")));
            }
            Ok(())
        }
        7 => {
            let (f, x1) = as_imp(&d.premises[0].conclusion)
                .ok_or_else(|| shape(d, "first premise is not an implication"))?;
            let (g, x2) = as_imp(&d.premises[1].conclusion)
                .ok_or_else(|| shape(d, "second premise is not an implication"))?;
            if x1 != x2 {
                return Err(shape(d, "premises have different consequents"));
            }
            let want = Formula::imp(Formula::or(f.clone(), g.clone()), x1.clone());
            if *c != want {
                return Err(shape(d, format!("conclusion should be '{want}'")));
            }
            Ok(())
        }
        8 => {
            let p = &d.premises[0].conclusion;
            // Currying direction: from (phi & psi) -> chi.
            if let Some((Formula::And(phi, psi), chi)) = as_imp(p).map(|(a, b)| (a, b)) {
                let want =
                    Formula::imp((**phi).clone(), Formula::imp((**psi).clone(), chi.clone()));
                if *c == want {
                    return Ok(());
                }
            }
            // Uncurrying direction: from phi -> (psi -> chi).
            if let Some((phi, Formula::Imp(psi, chi))) = as_imp(p) {
                let want =
                    Formula::imp(Formula::and(phi.clone(), (**psi).clone()), (**chi).clone());
                if *c == want {
                    return Ok(());
                }
            }
            Err(shape(d, "conclusion is not a curried/uncurried premise"))
        }
        9 => {
            let (ante, _) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            if *ante != Formula::falsum() {
                return Err(shape(d, "antecedent must be 0 =N S(0)"));
            }
            Ok(())
        }
        10 => {
            let (phi_c, rest) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            let (x, _ty, psi_c) = match rest {
                Formula::Forall(x, ty, body) => (x, ty, body),
                _ => return Err(shape(d, "consequent is not universally quantified")),
            };
            let (phi_p, psi_p) = as_imp(&d.premises[0].conclusion)
                .ok_or_else(|| shape(d, "premise is not an implication"))?;
            if phi_p != phi_c || psi_p != &**psi_c {
                return Err(shape(d, "premise does not match the conclusion"));
            }
            if phi_c.mentions_free(x) {
                return Err(side(d, format!("'{x}' occurs free in the antecedent")));
            }
            Ok(())
        }
        11 => {
            let (rest, psi_c) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            let (x, _ty, phi_c) = match rest {
                Formula::Exists(x, ty, body) => (x, ty, body),
                _ => return Err(shape(d, "antecedent is not existentially quantified")),
            };
            let (phi_p, psi_p) = as_imp(&d.premises[0].conclusion)
                .ok_or_else(|| shape(d, "premise is not an implication"))?;
            if phi_p != &**phi_c || psi_p != psi_c {
                return Err(shape(d, "premise does not match the conclusion"));
            }
            if psi_c.mentions_free(x) {
                return Err(side(d, format!("'{x}' occurs free in the consequent")));
            }
            Ok(())
        }
        12 => {
            let alpha = match &d.payload {
                Some(Payload::Term(t)) => t,
                _ => return Err(shape(d, "missing 'with: term ...' payload")),
            };
            let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            let mut deferred: Option<CheckError> = None;
            // Universal instantiation reading.
            if let Formula::Forall(x, ty, body) = ante {
                if alpha.sort(sig).ok().as_ref() == Some(ty) {
                    if is_free_for(body, x, alpha) {
                        let inst = body
                            .substitute(x, alpha)
                            .map_err(|e| shape(d, e.to_string()))?;
                        if inst == *cons {
                            return Ok(());
                        }
                    } else {
                        deferred = Some(side(d, format!("'{alpha}' is not free for '{x}'")));
                    }
                }
            }
            // Existential introduction reading.
            if let Formula::Exists(x, ty, body) = cons {
                if alpha.sort(sig).ok().as_ref() == Some(ty) {
                    if is_free_for(body, x, alpha) {
                        let inst = body
                            .substitute(x, alpha)
                            .map_err(|e| shape(d, e.to_string()))?;
                        if inst == *ante {
                            return Ok(());
                        }
                    } else if deferred.is_none() {
                        deferred = Some(side(d, format!("'{alpha}' is not free for '{x}'")));
                    }
                }
            }
            Err(deferred
                .unwrap_or_else(|| shape(d, "not an instantiation instance for the given term")))
        }
        13 => {
            // not (0 = S t)   or   S t1 = S t2 -> t1 = t2
            let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            if let Formula::Eq(Type::Nat, z, st) = ante {
                if *z == Term::Zero
                    && matches!(st, Term::App(f, _) if **f == Term::Succ)
                    && *cons == Formula::falsum()
                {
                    return Ok(());
                }
            }
            if let (Formula::Eq(Type::Nat, l, r), Formula::Eq(Type::Nat, lc, rc)) = (ante, cons) {
                let succ_arg = |t: &Term| match t {
                    Term::App(f, x) if **f == Term::Succ => Some((**x).clone()),
                    _ => None,
                };
                if let (Some(a), Some(b)) = (succ_arg(l), succ_arg(r)) {
                    if a == *lc && b == *rc {
                        return Ok(());
                    }
                }
            }
            Err(shape(d, "not a successor axiom instance"))
        }
        14 => {
            let (ty, l, r) = match c {
                Formula::Eq(ty, l, r) => (ty, l, r),
                _ => return Err(shape(d, "expected an equation")),
            };
            if *ty != Type::Nat {
                return Err(shape(d, "defining equations are at type N"));
            }
            for (tl, tr) in sig.equations() {
                let mut binding = Vec::new();
                if match_template(tl, l, &mut binding) && match_template(tr, r, &mut binding) {
                    return Ok(());
                }
            }
            Err(shape(d, "not an instance of a defining equation"))
        }
        15 => {
            if check_k_equation(c) || check_s_equation(c) {
                Ok(())
            } else {
                Err(shape(d, "not a combinator equation instance"))
            }
        }
        16 => {
            if check_rec_zero(c) || check_rec_succ(c) {
                Ok(())
            } else {
                Err(shape(d, "not a recursor equation instance"))
            }
        }
        17 => {
            if check_proj_equation(c) {
                Ok(())
            } else {
                Err(shape(d, "not a projection equation instance"))
            }
        }
        18 => {
            if check_surjective_pairing(c) {
                Ok(())
            } else {
                Err(shape(d, "not a surjective pairing instance"))
            }
        }
        19 => {
            let x = match &d.payload {
                Some(Payload::Var(x)) => x.clone(),
                _ => return Err(shape(d, "missing 'with: var ...' payload")),
            };
            if c.var_type(&x).map(|t| t != Type::Nat).unwrap_or(false) {
                return Err(shape(
                    d,
                    format!("induction variable '{x}' is not of type N"),
                ));
            }
            let base = c
                .substitute(&x, &Term::Zero)
                .map_err(|e| shape(d, e.to_string()))?;
            let step = Formula::imp(
                c.clone(),
                c.substitute(&x, &Term::succ_of(Term::nvar(&x)))
                    .map_err(|e| shape(d, e.to_string()))?,
            );
            if d.premises[0].conclusion != base {
                return Err(shape(d, format!("base premise should be '{base}'")));
            }
            if d.premises[1].conclusion != step {
                return Err(shape(d, format!("step premise should be '{step}'")));
            }
            Ok(())
        }
        20 => match c {
            Formula::Eq(_, l, r) if l == r => Ok(()),
            _ => Err(shape(d, "expected a reflexivity equation")),
        },
        21 => {
            let (l, r) = match c {
                Formula::Or(l, r) => (&**l, &**r),
                _ => return Err(shape(d, "expected a disjunction")),
            };
            let (t1, t2) = match l {
                Formula::Eq(Type::Nat, t1, t2) => (t1, t2),
                _ => return Err(shape(d, "left disjunct is not an N-equation")),
            };
            let want = Formula::neg(Formula::eq_n(t1.clone(), t2.clone()));
            if *r != want {
                return Err(shape(d, format!("right disjunct should be '{want}'")));
            }
            Ok(())
        }
        22 => {
            let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            let (eq, phi1) = match ante {
                Formula::And(a, b) => (&**a, &**b),
                _ => return Err(shape(d, "antecedent is not a conjunction")),
            };
            let (t1, t2) = match eq {
                Formula::Eq(_, t1, t2) => (t1, t2),
                _ => return Err(shape(d, "first conjunct is not an equation")),
            };
            if anti_unify_formula(phi1, cons, t1, t2) {
                Ok(())
            } else {
                Err(shape(
                    d,
                    "consequent is not the antecedent with the equated terms exchanged",
                ))
            }
        }
        23 => {
            let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
            let (xt, yt) = match cons {
                Formula::Eq(Type::Arrow(_, _), x, y) => (x, y),
                _ => return Err(shape(d, "consequent is not an arrow-type equation")),
            };
            let (bty, cty) = match cons {
                Formula::Eq(Type::Arrow(b, c2), _, _) => ((**b).clone(), (**c2).clone()),
                _ => unreachable!(),
            };
            let (z, zty, body) = match ante {
                Formula::Forall(z, zty, body) => (z, zty, body),
                _ => return Err(shape(d, "antecedent is not universally quantified")),
            };
            if *zty != bty {
                return Err(shape(d, "quantifier type does not match the arrow domain"));
            }
            let zv = Term::Var(z.clone(), zty.clone());
            let want = Formula::Eq(
                cty,
                Term::app(xt.clone(), zv.clone()),
                Term::app(yt.clone(), zv),
            );
            if **body != want {
                return Err(shape(d, format!("antecedent body should be '{want}'")));
            }
            if xt.mentions_var(z) || yt.mentions_var(z) {
                return Err(side(d, format!("'{z}' occurs in the compared terms")));
            }
            Ok(())
        }
        24 => check_choice(d),
        25 => check_dependent_choice(d),
        _ => Err(CheckError::UnknownRule(d.rule_id)),
    }
}

/// `forall x:B. exists y:C. phi  ->  exists z:B->C. forall x:B. phi[zx/y]`
fn check_choice(d: &Derivation) -> Result<(), CheckError> {
    let c = &d.conclusion;
    let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
    let (x, bty, inner) = match ante {
        Formula::Forall(x, bty, inner) => (x, bty, inner),
        _ => return Err(shape(d, "antecedent is not universally quantified")),
    };
    let (y, cty, phi) = match &**inner {
        Formula::Exists(y, cty, phi) => (y, cty, phi),
        _ => return Err(shape(d, "antecedent body is not existentially quantified")),
    };
    let (z, zty, rest) = match cons {
        Formula::Exists(z, zty, rest) => (z, zty, rest),
        _ => return Err(shape(d, "consequent is not existentially quantified")),
    };
    if *zty != Type::arrow(bty.clone(), cty.clone()) {
        return Err(shape(d, "choice function type mismatch"));
    }
    if phi.mentions_free(z) {
        return Err(side(d, format!("'{z}' occurs free in the matrix")));
    }
    let (x2, bty2, phi2) = match &**rest {
        Formula::Forall(x2, bty2, phi2) => (x2, bty2, phi2),
        _ => return Err(shape(d, "consequent body is not universally quantified")),
    };
    if x2 != x || bty2 != bty {
        return Err(shape(d, "consequent quantifies a different variable"));
    }
    let zx = Term::app(
        Term::Var(z.clone(), zty.clone()),
        Term::Var(x.clone(), bty.clone()),
    );
    let want = phi
        .substitute(y, &zx)
        .map_err(|e| shape(d, e.to_string()))?;
    if **phi2 != want {
        return Err(shape(d, format!("consequent matrix should be '{want}'")));
    }
    Ok(())
}

/// `forall x:B. [phi(x) -> exists y:B. (phi(y) & psi(x,y))]`
/// `  -> forall x:B. [phi(x) -> exists z:N->B. (z0 = x & forall v:N. psi(zv, z(Sv)))]`
fn check_dependent_choice(d: &Derivation) -> Result<(), CheckError> {
    let c = &d.conclusion;
    let (ante, cons) = as_imp(c).ok_or_else(|| shape(d, "expected an implication"))?;
    let (x, bty, ante_body) = match ante {
        Formula::Forall(x, bty, body) => (x, bty, body),
        _ => return Err(shape(d, "antecedent is not universally quantified")),
    };
    let (phi_x, ex) = match &**ante_body {
        Formula::Imp(a, b) => (&**a, &**b),
        _ => return Err(shape(d, "antecedent body is not an implication")),
    };
    let (y, yty, conj) = match ex {
        Formula::Exists(y, yty, conj) => (y, yty, conj),
        _ => return Err(shape(d, "antecedent consequent is not existential")),
    };
    if yty != bty {
        return Err(shape(
            d,
            "existential type differs from the quantifier type",
        ));
    }
    let (phi_y, psi) = match &**conj {
        Formula::And(a, b) => (&**a, &**b),
        _ => return Err(shape(d, "existential body is not a conjunction")),
    };
    let want_phi_y = phi_x
        .substitute(x, &Term::Var(y.clone(), bty.clone()))
        .map_err(|e| shape(d, e.to_string()))?;
    if *phi_y != want_phi_y {
        return Err(shape(
            d,
            "first conjunct is not the predicate at the new point",
        ));
    }

    // Rebuild the expected consequent from phi and psi.
    let (x2, bty2, cons_body) = match cons {
        Formula::Forall(x2, bty2, body) => (x2, bty2, body),
        _ => return Err(shape(d, "consequent is not universally quantified")),
    };
    if x2 != x || bty2 != bty {
        return Err(shape(d, "consequent quantifies a different variable"));
    }
    let (phi_x2, ez) = match &**cons_body {
        Formula::Imp(a, b) => (&**a, &**b),
        _ => return Err(shape(d, "consequent body is not an implication")),
    };
    if phi_x2 != phi_x {
        return Err(shape(d, "consequent antecedent differs from the predicate"));
    }
    let (z, zty, zconj) = match ez {
        Formula::Exists(z, zty, b) => (z, zty, b),
        _ => return Err(shape(d, "consequent lacks the sequence existential")),
    };
    if *zty != Type::arrow(Type::Nat, bty.clone()) {
        return Err(shape(d, "sequence type must be N -> B"));
    }
    if phi_x.mentions_free(z) || psi.mentions_free(z) {
        return Err(side(d, format!("'{z}' occurs free in the matrix")));
    }
    let (anchor, allpsi) = match &**zconj {
        Formula::And(a, b) => (&**a, &**b),
        _ => return Err(shape(d, "sequence body is not a conjunction")),
    };
    let zvar = Term::Var(z.clone(), zty.clone());
    let want_anchor = Formula::Eq(
        bty.clone(),
        Term::app(zvar.clone(), Term::Zero),
        Term::Var(x.clone(), bty.clone()),
    );
    if *anchor != want_anchor {
        return Err(shape(d, format!("anchor should be '{want_anchor}'")));
    }
    let (v, vty, psi_zz) = match allpsi {
        Formula::Forall(v, vty, b) => (v, vty, b),
        _ => return Err(shape(d, "step part is not universally quantified")),
    };
    if *vty != Type::Nat {
        return Err(shape(d, "step variable must have type N"));
    }
    if psi.mentions_free(v) {
        return Err(side(d, format!("'{v}' occurs free in the step relation")));
    }
    let zv = Term::app(zvar.clone(), Term::Var(v.clone(), Type::Nat));
    let zsv = Term::app(zvar, Term::succ_of(Term::Var(v.clone(), Type::Nat)));
    let want_psi = psi
        .substitute(x, &zv)
        .and_then(|f| f.substitute(y, &zsv))
        .map_err(|e| shape(d, e.to_string()))?;
    if **psi_zz != want_psi {
        return Err(shape(d, format!("step part should be '{want_psi}'")));
    }
    Ok(())
}

fn check_k_equation(c: &Formula) -> bool {
    // K[A,B] x y = x
    if let Formula::Eq(ty, l, r) = c {
        if let Term::App(f1, y) = l {
            if let Term::App(f0, x) = &**f1 {
                if let Term::CombK(a, _b) = &**f0 {
                    let _ = y;
                    return a == ty && **x == *r;
                }
            }
        }
    }
    false
}

fn check_s_equation(c: &Formula) -> bool {
    // Sig[A,B,C] x y z = (x z)(y z)
    if let Formula::Eq(ty, l, r) = c {
        if let Term::App(f2, z) = l {
            if let Term::App(f1, y) = &**f2 {
                if let Term::App(f0, x) = &**f1 {
                    if let Term::CombS(_a, _b, cc) = &**f0 {
                        let want = Term::app(
                            Term::app((**x).clone(), (**z).clone()),
                            Term::app((**y).clone(), (**z).clone()),
                        );
                        return cc == ty && want == *r;
                    }
                }
            }
        }
    }
    false
}

fn rec_spine(l: &Term) -> Option<(&Type, &Term, &Term, &Term)> {
    // R[A] x y n
    if let Term::App(f2, n) = l {
        if let Term::App(f1, y) = &**f2 {
            if let Term::App(f0, x) = &**f1 {
                if let Term::Rec(a) = &**f0 {
                    return Some((a, x, y, n));
                }
            }
        }
    }
    None
}

fn check_rec_zero(c: &Formula) -> bool {
    if let Formula::Eq(ty, l, r) = c {
        if let Some((a, x, _y, n)) = rec_spine(l) {
            return *n == Term::Zero && a == ty && x == r;
        }
    }
    false
}

fn check_rec_succ(c: &Formula) -> bool {
    // R x y (S n) = y (R x y n) n
    if let Formula::Eq(ty, l, r) = c {
        if let Some((a, x, y, sn)) = rec_spine(l) {
            if let Term::App(s, n) = sn {
                if **s == Term::Succ {
                    let rec = Term::apps(
                        Term::Rec(a.clone()),
                        vec![x.clone(), y.clone(), (**n).clone()],
                    );
                    let want = Term::app(Term::app(y.clone(), rec), (**n).clone());
                    return a == ty && want == *r;
                }
            }
        }
    }
    false
}

fn check_proj_equation(c: &Formula) -> bool {
    // D0[A,B] (D[A,B] x y) = x   or   D1[A,B] (D[A,B] x y) = y
    if let Formula::Eq(_ty, l, r) = c {
        if let Term::App(proj, inner) = l {
            let which = match &**proj {
                Term::Proj0(a, b) => Some((0, a.clone(), b.clone())),
                Term::Proj1(a, b) => Some((1, a.clone(), b.clone())),
                _ => None,
            };
            if let Some((i, a, b)) = which {
                if let Term::App(f1, y) = &**inner {
                    if let Term::App(f0, x) = &**f1 {
                        if **f0 == Term::PairC(a, b) {
                            return if i == 0 { **x == *r } else { **y == *r };
                        }
                    }
                }
            }
        }
    }
    false
}

fn check_surjective_pairing(c: &Formula) -> bool {
    // x = D[A,B] (D0[A,B] x) (D1[A,B] x)
    if let Formula::Eq(ty, l, r) = c {
        if let Type::Prod(a, b) = ty {
            let want = Term::apps(
                Term::PairC((**a).clone(), (**b).clone()),
                vec![
                    Term::app(Term::Proj0((**a).clone(), (**b).clone()), l.clone()),
                    Term::app(Term::Proj1((**a).clone(), (**b).clone()), l.clone()),
                ],
            );
            return want == *r;
        }
    }
    false
}

/// Nonlinear first-order template match: template variables bind N-terms
/// consistently.
fn match_template(template: &Term, actual: &Term, binding: &mut Vec<(String, Term)>) -> bool {
    match template {
        Term::Var(name, _) => {
            if let Some((_, bound)) = binding.iter().find(|(n, _)| n == name) {
                bound == actual
            } else {
                binding.push((name.clone(), actual.clone()));
                true
            }
        }
        Term::Zero => *actual == Term::Zero,
        Term::App(f, x) => {
            if let Term::App(g, y) = actual {
                match_template(f, g, binding) && match_template(x, y, binding)
            } else {
                false
            }
        }
        Term::Succ => *actual == Term::Succ,
        Term::Prim(name, args) => {
            if let Term::Prim(name2, args2) = actual {
                name == name2
                    && args.len() == args2.len()
                    && args
                        .iter()
                        .zip(args2)
                        .all(|(t, a)| match_template(t, a, binding))
            } else {
                false
            }
        }
        other => other == actual,
    }
}

/// Whether the formulas differ exactly by exchanging `t1` for `t2`,
/// nowhere under a binder capturing their variables.
fn anti_unify_formula(f1: &Formula, f2: &Formula, t1: &Term, t2: &Term) -> bool {
    match (f1, f2) {
        (Formula::Eq(ty1, l1, r1), Formula::Eq(ty2, l2, r2)) => {
            ty1 == ty2 && anti_unify_term(l1, l2, t1, t2) && anti_unify_term(r1, r2, t1, t2)
        }
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Imp(a1, b1), Formula::Imp(a2, b2)) => {
            anti_unify_formula(a1, a2, t1, t2) && anti_unify_formula(b1, b2, t1, t2)
        }
        (Formula::Exists(x1, ty1, b1), Formula::Exists(x2, ty2, b2))
        | (Formula::Forall(x1, ty1, b1), Formula::Forall(x2, ty2, b2)) => {
            if x1 != x2 || ty1 != ty2 {
                return false;
            }
            if b1 == b2 {
                return true;
            }
            // The exchanged terms must not be captured by this binder.
            if t1.mentions_var(x1) || t2.mentions_var(x1) {
                return false;
            }
            anti_unify_formula(b1, b2, t1, t2)
        }
        _ => false,
    }
}

fn anti_unify_term(u1: &Term, u2: &Term, t1: &Term, t2: &Term) -> bool {
    if u1 == u2 {
        return true;
    }
    if u1 == t1 && u2 == t2 {
        return true;
    }
    match (u1, u2) {
        (Term::App(f1, x1), Term::App(f2, x2)) => {
            anti_unify_term(f1, f2, t1, t2) && anti_unify_term(x1, x2, t1, t2)
        }
        (Term::Prim(n1, a1), Term::Prim(n2, a2)) => {
            n1 == n2
                && a1.len() == a2.len()
                && a1
                    .iter()
                    .zip(a2)
                    .all(|(u, v)| anti_unify_term(u, v, t1, t2))
        }
        _ => false,
    }
}

/// `alpha` is free for `x` in `phi`: no free occurrence of `x` lies under
/// a binder that binds a variable of `alpha`.
pub fn is_free_for(phi: &Formula, x: &str, alpha: &Term) -> bool {
    let alpha_vars: Vec<String> = alpha.free_vars().into_iter().map(|(n, _)| n).collect();
    free_for_inner(phi, x, &alpha_vars)
}

fn free_for_inner(phi: &Formula, x: &str, avoid: &[String]) -> bool {
    match phi {
        Formula::Eq(..) => true,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            free_for_inner(a, x, avoid) && free_for_inner(b, x, avoid)
        }
        Formula::Exists(y, _, body) | Formula::Forall(y, _, body) => {
            if y == x {
                true // x is bound below; no free occurrence there
            } else if avoid.contains(y) && body.mentions_free(x) {
                false
            } else {
                free_for_inner(body, x, avoid)
            }
        }
    }
}

// ---------------------------------------------------------------------
// Proof files
// ---------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("line {line}: {err}")]
    Parse { line: usize, err: ParseError },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("empty proof file")]
    Empty,
}

/// Parse a line-oriented proof file into a derivation tree.
///
/// ```text
/// # comment
/// var x : N
/// step 1: rule 20 |- x =N x
/// step 2: rule 1 |- x =N x -> x =N x
/// step 3: rule 2 premises: 1,2 |- x =N x
/// ```
///
/// Payloads: `with: term <t>` for rule 12, `with: var <x>` for rule 19.
/// The last step is the root; steps may only reference earlier steps.
pub fn parse_proof(text: &str, sig: &Signature) -> Result<Derivation, ProofFileError> {
    use num_traits::ToPrimitive;
    let mut vars: Vec<(String, Type)> = Vec::new();
    let mut steps: Vec<(u64, Derivation)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |msg: &str| ProofFileError::Malformed {
            line: lineno,
            msg: msg.to_string(),
        };
        let parse_err = |err: ParseError| ProofFileError::Parse { line: lineno, err };

        if let Some(rest) = line.strip_prefix("var ") {
            let (name, ty_text) = rest
                .split_once(':')
                .ok_or_else(|| malformed("expected 'var <name> : <type>'"))?;
            let ty = super::parse::parse_type(ty_text.trim()).map_err(parse_err)?;
            vars.push((name.trim().to_string(), ty));
            continue;
        }

        let rest = line
            .strip_prefix("step ")
            .ok_or_else(|| malformed("expected 'step' or 'var'"))?;
        let mut p = Parser::new(rest, sig, &vars).map_err(parse_err)?;
        let step_line = p.proof_step().map_err(parse_err)?;
        p.expect_end().map_err(parse_err)?;

        let premises: Vec<Derivation> = step_line
            .premises
            .iter()
            .map(|id| {
                steps
                    .iter()
                    .find(|(sid, _)| sid == id)
                    .map(|(_, d)| d.clone())
                    .ok_or_else(|| malformed(&format!("premise {id} not defined yet")))
            })
            .collect::<Result<_, _>>()?;
        let id = step_line
            .id
            .to_u64()
            .ok_or_else(|| malformed("step id out of range"))?;
        steps.push((
            id,
            Derivation {
                rule_id: step_line.rule,
                conclusion: step_line.conclusion,
                premises,
                payload: step_line.payload,
            },
        ));
    }

    steps.pop().map(|(_, d)| d).ok_or(ProofFileError::Empty)
}

impl fmt::Display for Derivation {
    /// Serialize back to the line-oriented format, one step per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn emit(
            d: &Derivation,
            next: &mut u64,
            f: &mut fmt::Formatter<'_>,
        ) -> Result<u64, fmt::Error> {
            let mut ids = Vec::new();
            for p in &d.premises {
                ids.push(emit(p, next, f)?);
            }
            let id = *next;
            *next += 1;
            write!(f, "step {id}: rule {}", d.rule_id)?;
            if !ids.is_empty() {
                let list: Vec<String> = ids.iter().map(u64::to_string).collect();
                write!(f, " premises: {}", list.join(","))?;
            }
            match &d.payload {
                Some(Payload::Term(t)) => write!(f, " with: term {t}")?,
                Some(Payload::Var(x)) => write!(f, " with: var {x}")?,
                None => {}
            }
            writeln!(f, " |- {}", d.conclusion)?;
            Ok(id)
        }
        let mut next = 1;
        for (name, ty) in self.conclusion.free_vars() {
            writeln!(f, "var {name} : {ty}")?;
        }
        // Free variables of premises may exceed the conclusion's.
        let mut seen: Vec<(String, Type)> = self.conclusion.free_vars();
        fn premise_vars(
            d: &Derivation,
            seen: &mut Vec<(String, Type)>,
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            for (name, ty) in d.conclusion.free_vars() {
                if !seen.iter().any(|(n, _)| *n == name) {
                    writeln!(f, "var {name} : {ty}")?;
                    seen.push((name, ty));
                }
            }
            for p in &d.premises {
                premise_vars(p, seen, f)?;
            }
            Ok(())
        }
        for p in &self.premises {
            premise_vars(p, &mut seen, f)?;
        }
        emit(self, &mut next, f).map(|_| ())
    }
}
