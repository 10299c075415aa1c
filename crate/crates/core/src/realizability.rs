//! The two realizability relations: pair forcing `p ||- (a,b): phi` over
//! a bounded universe, and the oracle-free typed realizability `a: phi`.
//!
//! Quantifiers over realizer candidates and numerals range over the
//! universe's numeral set (respectively an explicit candidate list in the
//! typed relation); condition quantifiers range over the universe's
//! extension enumerator. Verdicts follow the same exactness discipline as
//! the equality relations.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::Zero;

use crate::codes::{pairing, Fuel, Oracle};
use crate::heo::{
    AllOf, AnyOf, Defined, EqSession, Exhaustion, ForcingUniverse, PlainEqSession, UniverseError,
    Verdict,
};
use crate::syntax::{Formula, Signature, Term, Type};
use crate::valuation;
use crate::Nat;

/// The type of a formula's realizers in the typed relation: atoms are
/// `N`, conjunctions and existentials pair, disjunctions add a tag,
/// implications and universals are functions.
pub fn formula_type(phi: &Formula) -> Type {
    match phi {
        Formula::Eq(..) => Type::Nat,
        Formula::And(a, b) => Type::prod(formula_type(a), formula_type(b)),
        Formula::Or(a, b) => Type::prod(Type::Nat, Type::prod(formula_type(a), formula_type(b))),
        Formula::Imp(a, b) => Type::arrow(formula_type(a), formula_type(b)),
        Formula::Exists(_, ty, body) => Type::prod(ty.clone(), formula_type(body)),
        Formula::Forall(_, ty, body) => Type::arrow(ty.clone(), formula_type(body)),
    }
}

/// Decides `p ||- (a,b): phi` over the universe. `phi` must be closed;
/// its index constants are interpreted literally.
pub fn check_pair(
    u: &ForcingUniverse,
    p: &Oracle,
    a: &Nat,
    b: &Nat,
    phi: &Formula,
    sig: &Signature,
) -> Result<Verdict, UniverseError> {
    let session = PairSession::new(u, sig);
    session.check_at(p, a, b, phi)
}

/// `p ||- a: phi`, shorthand for `p ||- (a,a): phi`.
pub fn check_single(
    u: &ForcingUniverse,
    p: &Oracle,
    a: &Nat,
    phi: &Formula,
    sig: &Signature,
) -> Result<Verdict, UniverseError> {
    check_pair(u, p, a, a, phi, sig)
}

/// A memoized pair-forcing session over one universe.
pub struct PairSession<'a> {
    eq: EqSession<'a>,
    sig: &'a Signature,
    memo: RefCell<HashMap<(Nat, Nat, Nat, Formula), Verdict>>,
}

impl<'a> PairSession<'a> {
    pub fn new(u: &'a ForcingUniverse, sig: &'a Signature) -> Self {
        PairSession {
            eq: EqSession::new(u),
            sig,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn check_at(
        &self,
        p: &Oracle,
        a: &Nat,
        b: &Nat,
        phi: &Formula,
    ) -> Result<Verdict, UniverseError> {
        if !self.eq.universe().contains(p) {
            return Err(UniverseError::UniverseEmpty(p.to_string()));
        }
        Ok(self.check(p, a, b, phi))
    }

    fn universe(&self) -> &'a ForcingUniverse {
        self.eq.universe()
    }

    fn check(&self, p: &Oracle, a: &Nat, b: &Nat, phi: &Formula) -> Verdict {
        let key = (p.encode(), a.clone(), b.clone(), phi.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return *v;
        }
        let v = self.check_uncached(p, a, b, phi);
        self.memo.borrow_mut().insert(key, v);
        v
    }

    fn check_uncached(&self, p: &Oracle, a: &Nat, b: &Nat, phi: &Formula) -> Verdict {
        let u = self.universe();
        match phi {
            // Realizer content is irrelevant at atoms: the equation must
            // be forced. `p ||- alpha = beta` asks every extension q to
            // have a further extension where both values are defined and
            // extensionally equal.
            Formula::Eq(ty, alpha, beta) => {
                let mut all = AllOf::default();
                for q in self.eq.extensions(p).iter() {
                    let mut any = AnyOf::default();
                    let mut inner = None;
                    for r in self.eq.extensions(q).iter() {
                        let va = match self.value_in(alpha, r) {
                            Defined::Val(v) => v,
                            Defined::No => continue,
                            Defined::Ex(e) => {
                                any.mark(e);
                                continue;
                            }
                        };
                        let vb = match self.value_in(beta, r) {
                            Defined::Val(v) => v,
                            Defined::No => continue,
                            Defined::Ex(e) => {
                                any.mark(e);
                                continue;
                            }
                        };
                        if let Some(decided) = any.feed(self.eq.eq(r, ty, &va, &vb)) {
                            inner = Some(decided);
                            break;
                        }
                    }
                    let inner = inner.unwrap_or_else(|| any.finish());
                    if let Some(decided) = all.feed(inner) {
                        return decided;
                    }
                }
                all.finish()
            }
            Formula::And(f, g) => {
                let (a0, a1) = pairing::unpair(a);
                let (b0, b1) = pairing::unpair(b);
                let mut all = AllOf::default();
                for v in [self.check(p, &a0, &b0, f), self.check(p, &a1, &b1, g)] {
                    if let Some(decided) = all.feed(v) {
                        return decided;
                    }
                }
                all.finish()
            }
            Formula::Or(f, g) => {
                let (ta, ra) = pairing::unpair(a);
                let (tb, rb) = pairing::unpair(b);
                if ta != tb {
                    return Verdict::Fails;
                }
                if ta.is_zero() {
                    self.check(p, &ra, &rb, f)
                } else if ta == Nat::from(1u32) {
                    self.check(p, &ra, &rb, g)
                } else {
                    Verdict::Fails
                }
            }
            Formula::Imp(f, g) => {
                let mut all = AllOf::default();
                for q in self.eq.extensions(p).iter() {
                    for c in &u.num_set {
                        for d in &u.num_set {
                            match self.check(q, c, d, f) {
                                Verdict::Fails => continue,
                                Verdict::Exhausted(e) => {
                                    all.mark(e);
                                    continue;
                                }
                                Verdict::Holds => {}
                            }
                            let sub = self.applied_check(q, a, c, b, d, g);
                            if let Some(decided) = all.feed(sub) {
                                return decided;
                            }
                        }
                    }
                }
                all.finish()
            }
            Formula::Exists(x, ty, body) => {
                let (wa, ra) = pairing::unpair(a);
                let (wb, rb) = pairing::unpair(b);
                let mut all = AllOf::default();
                if let Some(decided) = all.feed(self.eq.eq(p, ty, &wa, &wb)) {
                    return decided;
                }
                let inst = body
                    .substitute(x, &Term::Heo(wa, ty.clone()))
                    .expect("index constants never capture");
                if let Some(decided) = all.feed(self.check(p, &ra, &rb, &inst)) {
                    return decided;
                }
                all.finish()
            }
            Formula::Forall(x, ty, body) => {
                let mut all = AllOf::default();
                for q in self.eq.extensions(p).iter() {
                    for n in &u.num_set {
                        for m in &u.num_set {
                            match self.eq.eq(q, ty, n, m) {
                                Verdict::Fails => continue,
                                Verdict::Exhausted(e) => {
                                    all.mark(e);
                                    continue;
                                }
                                Verdict::Holds => {}
                            }
                            let inst = body
                                .substitute(x, &Term::Heo(n.clone(), ty.clone()))
                                .expect("index constants never capture");
                            let sub = self.applied_check(q, a, n, b, m, &inst);
                            if let Some(decided) = all.feed(sub) {
                                return decided;
                            }
                        }
                    }
                }
                all.finish()
            }
        }
    }

    /// Search `r ⊇ q` with both applications defined and the results
    /// checking at the target formula.
    fn applied_check(
        &self,
        q: &Oracle,
        a: &Nat,
        ca: &Nat,
        b: &Nat,
        cb: &Nat,
        target: &Formula,
    ) -> Verdict {
        let mut any = AnyOf::default();
        for r in self.eq.extensions(q).iter() {
            let va = match self.eq.apply(a, ca, r) {
                Defined::Val(v) => v,
                Defined::No => continue,
                Defined::Ex(e) => {
                    any.mark(e);
                    continue;
                }
            };
            let vb = match self.eq.apply(b, cb, r) {
                Defined::Val(v) => v,
                Defined::No => continue,
                Defined::Ex(e) => {
                    any.mark(e);
                    continue;
                }
            };
            if let Some(decided) = any.feed(self.check(r, &va, &vb, target)) {
                return decided;
            }
        }
        any.finish()
    }

    fn value_in(&self, term: &Term, r: &Oracle) -> Defined {
        let u = self.universe();
        crate::heo::classify(valuation::value(term, self.sig, r, u.fuel), u)
    }
}

/// A structured account of one top-level check: the relation, the
/// universe, the verdict, and one level of witnesses or counterexamples.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub relation: String,
    pub universe: String,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Check a single realizer and report the first layer of quantifier
/// structure: for implications and universals, the extension found (or
/// missing) per candidate; for existentials, the witness components.
pub fn check_single_report(
    u: &ForcingUniverse,
    p: &Oracle,
    a: &Nat,
    phi: &Formula,
    sig: &Signature,
) -> Result<CheckReport, UniverseError> {
    let session = PairSession::new(u, sig);
    let verdict = session.check_at(p, a, a, phi)?;
    let mut notes = Vec::new();
    match phi {
        Formula::Forall(x, ty, body) => {
            for q in session.eq.extensions(p).iter() {
                for n in &u.num_set {
                    for m in &u.num_set {
                        if session.eq.eq(q, ty, n, m) != Verdict::Holds {
                            continue;
                        }
                        let inst = body
                            .substitute(x, &Term::Heo(n.clone(), ty.clone()))
                            .expect("index constants never capture");
                        let found = session.eq.extensions(q).iter().cloned().find(|r| {
                            let va = session.eq.apply(a, n, r);
                            let vb = session.eq.apply(a, m, r);
                            match (va, vb) {
                                (Defined::Val(va), Defined::Val(vb)) => {
                                    session.check(r, &va, &vb, &inst) == Verdict::Holds
                                }
                                _ => false,
                            }
                        });
                        match found {
                            Some(r) => {
                                if notes.len() < 16 {
                                    notes.push(format!(
                                        "q={q} numerals ({n},{m}): witness extension r={r}"
                                    ));
                                }
                            }
                            None => notes
                                .push(format!("q={q} numerals ({n},{m}): no extension verifies")),
                        }
                    }
                }
            }
        }
        Formula::Imp(f, g) => {
            for q in session.eq.extensions(p).iter() {
                for c in &u.num_set {
                    for d in &u.num_set {
                        if session.check(q, c, d, f) != Verdict::Holds {
                            continue;
                        }
                        let found = session.eq.extensions(q).iter().cloned().find(|r| {
                            match (session.eq.apply(a, c, r), session.eq.apply(a, d, r)) {
                                (Defined::Val(va), Defined::Val(vb)) => {
                                    session.check(r, &va, &vb, g) == Verdict::Holds
                                }
                                _ => false,
                            }
                        });
                        match found {
                            Some(r) => {
                                if notes.len() < 16 {
                                    notes.push(format!(
                                        "q={q} hypothesis ({c},{d}): witness extension r={r}"
                                    ));
                                }
                            }
                            None => notes
                                .push(format!("q={q} hypothesis ({c},{d}): no extension verifies")),
                        }
                    }
                }
            }
            if notes.is_empty() {
                notes.push("no candidate pair realizes the antecedent within the universe".into());
            }
        }
        Formula::Exists(_, ty, _) => {
            let (w, _) = pairing::unpair(a);
            notes.push(format!("witness component {w} at type {ty}"));
        }
        _ => {}
    }
    Ok(CheckReport {
        relation: "pair forcing".into(),
        universe: u.describe(),
        verdict,
        notes,
    })
}

/// Decides the typed relation `a: phi`. Numeral quantifiers and the
/// extensional equalities range over `num_set`; hypothetical-realizer
/// positions ("if b: phi then ...") range over the same set unless a
/// wider candidate list is supplied through [`PlainSession`].
pub fn check_plain(
    a: &Nat,
    phi: &Formula,
    num_set: &[Nat],
    fuel: Fuel,
    sig: &Signature,
) -> Verdict {
    PlainSession::new(num_set, fuel, sig).check(a, phi)
}

/// A memoized typed-realizability session.
pub struct PlainSession<'a> {
    eq: PlainEqSession<'a>,
    num_set: &'a [Nat],
    /// Candidates for hypothetical-realizer positions; defaults to the
    /// numeral set.
    hyp_candidates: Vec<Nat>,
    sig: &'a Signature,
    fuel: Fuel,
    memo: RefCell<HashMap<(Nat, Formula), Verdict>>,
}

impl<'a> PlainSession<'a> {
    pub fn new(num_set: &'a [Nat], fuel: Fuel, sig: &'a Signature) -> Self {
        PlainSession {
            eq: PlainEqSession::new(num_set, fuel),
            num_set,
            hyp_candidates: num_set.to_vec(),
            sig,
            fuel,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Extend the hypothetical-realizer candidate set (the "if b: phi"
    /// positions). The numeral set is unchanged.
    pub fn with_candidates(mut self, extra: impl IntoIterator<Item = Nat>) -> Self {
        self.hyp_candidates.extend(extra);
        self.hyp_candidates.sort();
        self.hyp_candidates.dedup();
        self
    }

    pub fn type_check(&self, a: &Nat, ty: &Type) -> Verdict {
        self.eq.eq(ty, a, a)
    }

    pub fn check(&self, a: &Nat, phi: &Formula) -> Verdict {
        let key = (a.clone(), phi.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return *v;
        }
        let v = self.check_uncached(a, phi);
        self.memo.borrow_mut().insert(key, v);
        v
    }

    fn check_uncached(&self, a: &Nat, phi: &Formula) -> Verdict {
        match phi {
            Formula::Eq(ty, alpha, beta) => {
                let va = match self.value_plain(alpha) {
                    Defined::Val(v) => v,
                    Defined::No => return Verdict::Fails,
                    Defined::Ex(e) => return Verdict::Exhausted(e),
                };
                let vb = match self.value_plain(beta) {
                    Defined::Val(v) => v,
                    Defined::No => return Verdict::Fails,
                    Defined::Ex(e) => return Verdict::Exhausted(e),
                };
                self.eq.eq(ty, &va, &vb)
            }
            Formula::And(f, g) => {
                let (a0, a1) = pairing::unpair(a);
                let mut all = AllOf::default();
                for v in [self.check(&a0, f), self.check(&a1, g)] {
                    if let Some(decided) = all.feed(v) {
                        return decided;
                    }
                }
                all.finish()
            }
            Formula::Or(f, g) => {
                let shape = Type::prod(Type::Nat, Type::prod(formula_type(f), formula_type(g)));
                let mut all = AllOf::default();
                if let Some(decided) = all.feed(self.type_check(a, &shape)) {
                    return decided;
                }
                let tag = pairing::component(a, 0, 3);
                let v = if tag.is_zero() {
                    self.check(&pairing::component(a, 1, 3), f)
                } else if tag == Nat::from(1u32) {
                    self.check(&pairing::component(a, 2, 3), g)
                } else {
                    Verdict::Fails
                };
                if let Some(decided) = all.feed(v) {
                    return decided;
                }
                all.finish()
            }
            Formula::Imp(f, g) => {
                let shape = Type::arrow(formula_type(f), formula_type(g));
                let mut all = AllOf::default();
                if let Some(decided) = all.feed(self.type_check(a, &shape)) {
                    return decided;
                }
                for b in self.hyp_candidates.clone() {
                    match self.check(&b, f) {
                        Verdict::Fails => continue,
                        Verdict::Exhausted(e) => {
                            all.mark(e);
                            continue;
                        }
                        Verdict::Holds => {}
                    }
                    let ab = match self.eq.apply(a, &b) {
                        Defined::Val(v) => v,
                        Defined::No => return Verdict::Fails,
                        Defined::Ex(e) => {
                            all.mark(e);
                            continue;
                        }
                    };
                    if let Some(decided) = all.feed(self.check(&ab, g)) {
                        return decided;
                    }
                }
                all.finish()
            }
            Formula::Exists(x, ty, body) => {
                let (w, r) = pairing::unpair(a);
                let mut all = AllOf::default();
                if let Some(decided) = all.feed(self.eq.eq(ty, &w, &w)) {
                    return decided;
                }
                let inst = body
                    .substitute(x, &Term::Heo(w, ty.clone()))
                    .expect("index constants never capture");
                if let Some(decided) = all.feed(self.check(&r, &inst)) {
                    return decided;
                }
                all.finish()
            }
            Formula::Forall(x, ty, body) => {
                let shape = Type::arrow(ty.clone(), formula_type(body));
                let mut all = AllOf::default();
                if let Some(decided) = all.feed(self.type_check(a, &shape)) {
                    return decided;
                }
                for n in self.num_set {
                    match self.eq.eq(ty, n, n) {
                        Verdict::Fails => continue,
                        Verdict::Exhausted(e) => {
                            all.mark(e);
                            continue;
                        }
                        Verdict::Holds => {}
                    }
                    let an = match self.eq.apply(a, n) {
                        Defined::Val(v) => v,
                        Defined::No => return Verdict::Fails,
                        Defined::Ex(e) => {
                            all.mark(e);
                            continue;
                        }
                    };
                    let inst = body
                        .substitute(x, &Term::Heo(n.clone(), ty.clone()))
                        .expect("index constants never capture");
                    if let Some(decided) = all.feed(self.check(&an, &inst)) {
                        return decided;
                    }
                }
                all.finish()
            }
        }
    }

    fn value_plain(&self, term: &Term) -> Defined {
        match valuation::value_plain(term, self.sig, self.fuel) {
            crate::codes::EvalResult::Value(v) => Defined::Val(v),
            crate::codes::EvalResult::FuelExhausted => Defined::Ex(Exhaustion::Fuel),
            _ => Defined::No,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::pairing::{nat, pair, tuple};
    use crate::syntax::parse_formula;

    fn sig() -> Signature {
        Signature::standard()
    }

    fn universe() -> ForcingUniverse {
        ForcingUniverse::new([0, 1], 3, 0..5, 50_000)
    }

    fn fml(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    #[test]
    fn atomic_clause_ignores_the_realizers() {
        let u = universe();
        let p = Oracle::empty();
        assert_eq!(
            check_pair(&u, &p, &nat(0), &nat(0), &fml("0 =N 0"), &sig()),
            Ok(Verdict::Holds)
        );
        assert_eq!(
            check_pair(&u, &p, &nat(0), &nat(0), &fml("0 =N S(0)"), &sig()),
            Ok(Verdict::Fails)
        );
        // Any numbers do at a true atom.
        assert_eq!(
            check_pair(&u, &p, &nat(77), &nat(3), &fml("0 =N 0"), &sig()),
            Ok(Verdict::Holds)
        );
    }

    #[test]
    fn disjunction_requires_matching_tags() {
        let u = universe();
        let p = Oracle::empty();
        let phi = fml("0 =N 0 | 0 =N S(0)");
        let left = pair(&nat(0), &nat(0));
        assert_eq!(
            check_pair(&u, &p, &left, &left, &phi, &sig()),
            Ok(Verdict::Holds)
        );
        let right = pair(&nat(1), &nat(0));
        assert_eq!(
            check_pair(&u, &p, &right, &right, &phi, &sig()),
            Ok(Verdict::Fails)
        );
        // Mismatched tags fail outright.
        assert_eq!(
            check_pair(&u, &p, &left, &right, &phi, &sig()),
            Ok(Verdict::Fails)
        );
    }

    #[test]
    fn conjunction_checks_components() {
        let u = universe();
        let p = Oracle::empty();
        let phi = fml("0 =N 0 & S(0) =N S(0)");
        let a = pair(&nat(0), &nat(0));
        assert_eq!(check_single(&u, &p, &a, &phi, &sig()), Ok(Verdict::Holds));
        let bad = fml("0 =N 0 & 0 =N S(0)");
        assert_eq!(check_single(&u, &p, &a, &bad, &sig()), Ok(Verdict::Fails));
    }

    #[test]
    fn implication_uses_candidate_realizers() {
        let u = universe();
        let p = Oracle::empty();
        // The identity (code 1) realizes phi -> phi.
        let phi = fml("0 =N 0 -> 0 =N 0");
        assert_eq!(
            check_single(&u, &p, &nat(1), &phi, &sig()),
            Ok(Verdict::Holds)
        );
        // Ex falso: anything realizes from an unforceable antecedent.
        let exfalso = fml("0 =N S(0) -> 0 =N S(0)");
        assert_eq!(
            check_single(&u, &p, &nat(0), &exfalso, &sig()),
            Ok(Verdict::Holds)
        );
    }

    #[test]
    fn existential_checks_witness_and_body() {
        let u = universe();
        let p = Oracle::empty();
        let phi = fml("exists x:N. x =N S(S(0))");
        let good = pair(&nat(2), &nat(0));
        assert_eq!(
            check_single(&u, &p, &good, &phi, &sig()),
            Ok(Verdict::Holds)
        );
        let bad = pair(&nat(3), &nat(0));
        assert_eq!(check_single(&u, &p, &bad, &phi, &sig()), Ok(Verdict::Fails));
    }

    #[test]
    fn universal_requires_action_on_all_equal_numerals() {
        let u = universe();
        let p = Oracle::empty();
        // forall x:N. x =N x realized by anything total, e.g. identity.
        let phi = fml("forall x:N. x =N x");
        assert_eq!(
            check_single(&u, &p, &nat(1), &phi, &sig()),
            Ok(Verdict::Holds)
        );
        // An invalid code cannot act.
        assert_eq!(
            check_single(&u, &p, &nat(9), &phi, &sig()),
            Ok(Verdict::Fails)
        );
    }

    #[test]
    fn formula_types_follow_the_map() {
        assert_eq!(formula_type(&fml("0 =N 0")), Type::Nat);
        assert_eq!(
            formula_type(&fml("0 =N 0 | 0 =N 0")),
            Type::prod(Type::Nat, Type::prod(Type::Nat, Type::Nat))
        );
        assert_eq!(
            formula_type(&fml("forall x:N. 0 =N 0")),
            Type::arrow(Type::Nat, Type::Nat)
        );
        assert_eq!(
            formula_type(&fml("exists x:N. x =N 0")),
            Type::prod(Type::Nat, Type::Nat)
        );
    }

    #[test]
    fn plain_realizability_examples() {
        let cands: Vec<Nat> = (0..5u64).map(Nat::from).collect();
        assert_eq!(
            check_plain(&nat(0), &fml("0 =N 0"), &cands, 10_000, &sig()),
            Verdict::Holds
        );
        // Left injection with any number in the unused slot.
        let a = tuple(&[nat(0), nat(0), nat(4)]);
        assert_eq!(
            check_plain(&a, &fml("0 =N 0 | 0 =N S(0)"), &cands, 10_000, &sig()),
            Verdict::Holds
        );
        // Wrong tag.
        let b = tuple(&[nat(1), nat(0), nat(0)]);
        assert_eq!(
            check_plain(&b, &fml("0 =N 0 | 0 =N S(0)"), &cands, 10_000, &sig()),
            Verdict::Fails
        );
    }

    #[test]
    fn plain_realizers_inhabit_their_formula_type() {
        // R1: a realizer is extensionally self-equal at the formula type.
        let cands: Vec<Nat> = (0..5u64).map(Nat::from).collect();
        let phi = fml("forall x:N. x =N x");
        assert_eq!(
            check_plain(&nat(1), &phi, &cands, 10_000, &sig()),
            Verdict::Holds
        );
        assert_eq!(
            plain_eq_at(&formula_type(&phi), &nat(1), &cands),
            Verdict::Holds
        );
    }

    fn plain_eq_at(ty: &Type, a: &Nat, cands: &[Nat]) -> Verdict {
        crate::heo::plain_eq(ty, a, a, cands, 10_000)
    }
}

#[cfg(test)]
mod substitution_tests {
    use super::*;
    use crate::codes::pairing::nat;
    use crate::syntax::{parse_formula_with, Term};
    use crate::valuation::value;

    #[test]
    fn r2_instance_equal_values_give_equal_verdicts() {
        // If two closed terms have the same value under p, the check
        // verdicts of phi(alpha) and phi(beta) coincide.
        let sig = Signature::standard();
        let u = ForcingUniverse::new([0], 2, 0..4, 50_000);
        let fv = [("h".to_string(), Type::Nat)];
        let phi = parse_formula_with("h =N S(S(0)) | 0 =N h", &sig, &fv).unwrap();
        let alpha = Term::Prim("add".into(), vec![Term::numeral(1), Term::numeral(1)]);
        let beta = Term::numeral(2);
        let p = Oracle::empty();
        assert_eq!(value(&alpha, &sig, &p, 1000), value(&beta, &sig, &p, 1000));
        let at_alpha = phi.substitute("h", &alpha).unwrap();
        let at_beta = phi.substitute("h", &beta).unwrap();
        for a in 0..6u64 {
            for b in 0..6u64 {
                let va = check_pair(&u, &p, &nat(a), &nat(b), &at_alpha, &sig).unwrap();
                let vb = check_pair(&u, &p, &nat(a), &nat(b), &at_beta, &sig).unwrap();
                assert_eq!(va, vb, "at ({a},{b})");
            }
        }
    }
}
