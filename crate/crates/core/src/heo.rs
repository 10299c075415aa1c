//! Extensional equality of indices, decided exactly over bounded
//! universes of forcing conditions.
//!
//! The relations here are the bounded surrogates of semi-decidable ones:
//! every "for all extensions" ranges over the universe's enumerator,
//! numeral quantifiers range over the universe's numeral set, and
//! definedness is read at the universe's fuel. `Holds` and `Fails` are
//! exact for the relation so bounded; when an evaluation runs out of fuel
//! or queries the oracle outside the universe's key set, the verdict on
//! any branch left undecided is `Exhausted` rather than a guess. A branch
//! decided by an actual witness or counterexample stays decisive.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::Zero;
use thiserror::Error;

use crate::codes::{apply_shared, build, pairing, CodeExpr, EvalResult, Fuel, Oracle};
use crate::syntax::Type;
use crate::Nat;

/// Why a check could not be decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exhaustion {
    /// Some evaluation ran out of fuel.
    Fuel,
    /// Some evaluation queried a key no condition of the universe binds.
    OracleMissOutsideUniverse,
    /// A truth evaluation exceeded its quantifier bound.
    TruthBound,
}

/// Three-valued outcome of a bounded check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    Exhausted(Exhaustion),
}

impl Verdict {
    pub fn is_holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn is_fails(self) -> bool {
        self == Verdict::Fails
    }

    pub fn is_exhausted(self) -> bool {
        matches!(self, Verdict::Exhausted(_))
    }

    /// Exit-code convention: 0 holds, 1 fails, 2 exhausted.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Exhausted(_) => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails => write!(f, "fails"),
            Verdict::Exhausted(Exhaustion::Fuel) => write!(f, "exhausted (fuel)"),
            Verdict::Exhausted(Exhaustion::OracleMissOutsideUniverse) => {
                write!(f, "exhausted (oracle miss outside universe)")
            }
            Verdict::Exhausted(Exhaustion::TruthBound) => {
                write!(f, "exhausted (truth bound)")
            }
        }
    }
}

/// Conjunctive aggregation: a failing branch decides, undecided branches
/// taint the result, otherwise everything held.
#[derive(Default)]
pub(crate) struct AllOf {
    ex: Option<Exhaustion>,
}

impl AllOf {
    pub fn feed(&mut self, v: Verdict) -> Option<Verdict> {
        match v {
            Verdict::Holds => None,
            Verdict::Fails => Some(Verdict::Fails),
            Verdict::Exhausted(e) => {
                self.ex.get_or_insert(e);
                None
            }
        }
    }

    pub fn mark(&mut self, e: Exhaustion) {
        self.ex.get_or_insert(e);
    }

    pub fn finish(self) -> Verdict {
        match self.ex {
            Some(e) => Verdict::Exhausted(e),
            None => Verdict::Holds,
        }
    }
}

/// Disjunctive aggregation: a holding branch decides.
#[derive(Default)]
pub(crate) struct AnyOf {
    ex: Option<Exhaustion>,
}

impl AnyOf {
    pub fn feed(&mut self, v: Verdict) -> Option<Verdict> {
        match v {
            Verdict::Holds => Some(Verdict::Holds),
            Verdict::Fails => None,
            Verdict::Exhausted(e) => {
                self.ex.get_or_insert(e);
                None
            }
        }
    }

    pub fn mark(&mut self, e: Exhaustion) {
        self.ex.get_or_insert(e);
    }

    pub fn finish(self) -> Verdict {
        match self.ex {
            Some(e) => Verdict::Exhausted(e),
            None => Verdict::Fails,
        }
    }
}

/// Which conditions belong to the universe, beyond the domain and value
/// bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TsetFilter {
    /// Every finite function within bounds.
    All,
    /// Only conditions binding listed keys to listed values; used for the
    /// self-realizability condition sets, where the admissible value table
    /// is precomputed from a truth oracle.
    Keyed(BTreeMap<Nat, BTreeSet<Nat>>),
}

impl TsetFilter {
    pub fn accepts(&self, p: &Oracle) -> bool {
        match self {
            TsetFilter::All => true,
            TsetFilter::Keyed(table) => p
                .iter()
                .all(|(k, v)| table.get(k).is_some_and(|vals| vals.contains(v))),
        }
    }
}

/// The bounds relative to which the forcing relations are decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingUniverse {
    /// Keys conditions may bind.
    pub key_set: BTreeSet<Nat>,
    /// Largest value a condition may take.
    pub val_bound: Nat,
    /// Numeral instances tried at every quantifier position.
    pub num_set: Vec<Nat>,
    /// Step budget for each machine evaluation.
    pub fuel: Fuel,
    pub tset: TsetFilter,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("condition {0} is not in the universe")]
    UniverseEmpty(String),
}

impl ForcingUniverse {
    pub fn new(
        keys: impl IntoIterator<Item = u64>,
        val_bound: u64,
        nums: impl IntoIterator<Item = u64>,
        fuel: Fuel,
    ) -> Self {
        let mut num_set: Vec<Nat> = nums.into_iter().map(Nat::from).collect();
        num_set.sort();
        num_set.dedup();
        ForcingUniverse {
            key_set: keys.into_iter().map(Nat::from).collect(),
            val_bound: Nat::from(val_bound),
            num_set,
            fuel,
            tset: TsetFilter::All,
        }
    }

    pub fn with_tset(mut self, tset: TsetFilter) -> Self {
        self.tset = tset;
        self
    }

    /// Whether a condition belongs to the universe.
    pub fn contains(&self, p: &Oracle) -> bool {
        p.iter()
            .all(|(k, v)| self.key_set.contains(k) && *v <= self.val_bound)
            && self.tset.accepts(p)
    }

    /// All conditions `q` of the universe with `p ⊆ q`, in ascending
    /// order of their encodings. Includes `p` itself when it belongs to
    /// the universe; empty when it does not.
    pub fn extensions(&self, p: &Oracle) -> Vec<Oracle> {
        if !self.contains(p) {
            return Vec::new();
        }
        let free: Vec<&Nat> = self.key_set.iter().filter(|k| !p.defines(k)).collect();
        let mut out = Vec::new();
        let mut stack: Vec<(Oracle, usize)> = vec![(p.clone(), 0)];
        while let Some((q, i)) = stack.pop() {
            if i == free.len() {
                if self.tset.accepts(&q) {
                    out.push(q);
                }
                continue;
            }
            // Leave the key unbound, or bind it to each allowed value.
            stack.push((q.clone(), i + 1));
            let mut v = Nat::zero();
            loop {
                if v > self.val_bound {
                    break;
                }
                let mut q2 = q.clone();
                q2.insert(free[i].clone(), v.clone());
                stack.push((q2, i + 1));
                v += 1u32;
            }
        }
        out.sort_by_key(Oracle::encode);
        out
    }

    /// Every condition of the universe.
    pub fn conditions(&self) -> Vec<Oracle> {
        self.extensions(&Oracle::empty())
    }

    pub fn describe(&self) -> String {
        let keys: Vec<String> = self.key_set.iter().map(Nat::to_string).collect();
        let nums: Vec<String> = self.num_set.iter().map(Nat::to_string).collect();
        format!(
            "keys {{{}}} values <= {} numerals {{{}}} fuel {}{}",
            keys.join(","),
            self.val_bound,
            nums.join(","),
            self.fuel,
            match &self.tset {
                TsetFilter::All => String::new(),
                TsetFilter::Keyed(t) => format!(" tset keyed ({} keys)", t.len()),
            }
        )
    }
}

/// Outcome of a definedness-demanding evaluation inside a universe.
pub(crate) enum Defined {
    Val(Nat),
    /// Definitely undefined under the inspected condition.
    No,
    Ex(Exhaustion),
}

pub(crate) fn classify(result: EvalResult, u: &ForcingUniverse) -> Defined {
    match result {
        EvalResult::Value(v) => Defined::Val(v),
        EvalResult::InvalidCode => Defined::No,
        EvalResult::FuelExhausted => Defined::Ex(Exhaustion::Fuel),
        EvalResult::OracleMiss(k) => {
            if u.key_set.contains(&k) {
                Defined::No
            } else {
                Defined::Ex(Exhaustion::OracleMissOutsideUniverse)
            }
        }
    }
}

/// Decides `p ||- a =_A b` over the universe.
pub fn force_eq(
    u: &ForcingUniverse,
    p: &Oracle,
    ty: &Type,
    a: &Nat,
    b: &Nat,
) -> Result<Verdict, UniverseError> {
    let session = EqSession::new(u);
    if !u.contains(p) {
        return Err(UniverseError::UniverseEmpty(p.to_string()));
    }
    Ok(session.eq(p, ty, a, b))
}

/// `p ||- a ∈ A`, that is `p ||- a =_A a`.
pub fn force_in(
    u: &ForcingUniverse,
    p: &Oracle,
    ty: &Type,
    a: &Nat,
) -> Result<Verdict, UniverseError> {
    force_eq(u, p, ty, a, a)
}

/// A memoized equality session over one universe.
pub(crate) struct EqSession<'a> {
    u: &'a ForcingUniverse,
    memo: RefCell<HashMap<(Nat, Type, Nat, Nat), Verdict>>,
    ext_memo: RefCell<HashMap<Nat, Rc<Vec<Oracle>>>>,
}

impl<'a> EqSession<'a> {
    pub fn new(u: &'a ForcingUniverse) -> Self {
        EqSession {
            u,
            memo: RefCell::new(HashMap::new()),
            ext_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn universe(&self) -> &'a ForcingUniverse {
        self.u
    }

    pub fn extensions(&self, p: &Oracle) -> Rc<Vec<Oracle>> {
        let key = p.encode();
        if let Some(v) = self.ext_memo.borrow().get(&key) {
            return Rc::clone(v);
        }
        let v = Rc::new(self.u.extensions(p));
        self.ext_memo.borrow_mut().insert(key, Rc::clone(&v));
        v
    }

    pub fn apply(&self, code: &Nat, arg: &Nat, r: &Oracle) -> Defined {
        let mut fuel = self.u.fuel;
        classify(apply_shared(code, arg, r, &mut fuel), self.u)
    }

    pub fn eq(&self, p: &Oracle, ty: &Type, a: &Nat, b: &Nat) -> Verdict {
        let key = (p.encode(), ty.clone(), a.clone(), b.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return *v;
        }
        let v = self.eq_uncached(p, ty, a, b);
        self.memo.borrow_mut().insert(key, v);
        v
    }

    fn eq_uncached(&self, p: &Oracle, ty: &Type, a: &Nat, b: &Nat) -> Verdict {
        match ty {
            Type::Nat => {
                if a == b {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                }
            }
            Type::Prod(l, r) => {
                let (a0, a1) = pairing::unpair(a);
                let (b0, b1) = pairing::unpair(b);
                let mut all = AllOf::default();
                for v in [self.eq(p, l, &a0, &b0), self.eq(p, r, &a1, &b1)] {
                    if let Some(decided) = all.feed(v) {
                        return decided;
                    }
                }
                all.finish()
            }
            Type::Arrow(dom, cod) => {
                let mut all = AllOf::default();
                for q in self.extensions(p).iter() {
                    for n in &self.u.num_set {
                        for m in &self.u.num_set {
                            match self.eq(q, dom, n, m) {
                                Verdict::Fails => continue,
                                Verdict::Exhausted(e) => {
                                    all.mark(e);
                                    continue;
                                }
                                Verdict::Holds => {}
                            }
                            let sub = self.eq_applied(q, cod, a, n, b, m);
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

    /// Search an extension `r ⊇ q` with `a^r n` and `b^r m` defined and
    /// equal at the result type.
    pub(crate) fn eq_applied(
        &self,
        q: &Oracle,
        cod: &Type,
        a: &Nat,
        n: &Nat,
        b: &Nat,
        m: &Nat,
    ) -> Verdict {
        let mut any = AnyOf::default();
        for r in self.extensions(q).iter() {
            let va = match self.apply(a, n, r) {
                Defined::Val(v) => v,
                Defined::No => continue,
                Defined::Ex(e) => {
                    any.mark(e);
                    continue;
                }
            };
            let vb = match self.apply(b, m, r) {
                Defined::Val(v) => v,
                Defined::No => continue,
                Defined::Ex(e) => {
                    any.mark(e);
                    continue;
                }
            };
            if let Some(decided) = any.feed(self.eq(r, cod, &va, &vb)) {
                return decided;
            }
        }
        any.finish()
    }
}

/// The canonical inhabitant `0^A`: 0 at base type, the pair of the
/// component inhabitants at products, and a constant function at arrows.
/// Membership checks need only a handful of machine steps per arrow
/// layer (the constant bodies are literals), so any per-application fuel
/// of at least `8 * depth(A) + 8` decides `0^A ∈ A` without exhaustion.
pub fn default_code(ty: &Type) -> Nat {
    match ty {
        Type::Nat => Nat::zero(),
        Type::Prod(a, b) => pairing::pair(&default_code(a), &default_code(b)),
        Type::Arrow(_, b) => {
            build(CodeExpr::lit(&default_code(b))).expect("constant bodies are closed")
        }
    }
}

/// Decides the oracle-free extensional equality `a =_A b` with numeral
/// quantifiers over `num_set` and fuel-bounded application.
pub fn plain_eq(ty: &Type, a: &Nat, b: &Nat, num_set: &[Nat], fuel: Fuel) -> Verdict {
    PlainEqSession::new(num_set, fuel).eq(ty, a, b)
}

pub(crate) struct PlainEqSession<'a> {
    num_set: &'a [Nat],
    fuel: Fuel,
    memo: RefCell<HashMap<(Type, Nat, Nat), Verdict>>,
}

impl<'a> PlainEqSession<'a> {
    pub fn new(num_set: &'a [Nat], fuel: Fuel) -> Self {
        PlainEqSession {
            num_set,
            fuel,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn apply(&self, code: &Nat, arg: &Nat) -> Defined {
        let mut fuel = self.fuel;
        match apply_shared(code, arg, &Oracle::empty(), &mut fuel) {
            EvalResult::Value(v) => Defined::Val(v),
            EvalResult::FuelExhausted => Defined::Ex(Exhaustion::Fuel),
            // With no oracle there are no extensions to rescue a miss.
            EvalResult::OracleMiss(_) | EvalResult::InvalidCode => Defined::No,
        }
    }

    pub fn eq(&self, ty: &Type, a: &Nat, b: &Nat) -> Verdict {
        let key = (ty.clone(), a.clone(), b.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return *v;
        }
        let v = self.eq_uncached(ty, a, b);
        self.memo.borrow_mut().insert(key, v);
        v
    }

    fn eq_uncached(&self, ty: &Type, a: &Nat, b: &Nat) -> Verdict {
        match ty {
            Type::Nat => {
                if a == b {
                    Verdict::Holds
                } else {
                    Verdict::Fails
                }
            }
            Type::Prod(l, r) => {
                let (a0, a1) = pairing::unpair(a);
                let (b0, b1) = pairing::unpair(b);
                let mut all = AllOf::default();
                for v in [self.eq(l, &a0, &b0), self.eq(r, &a1, &b1)] {
                    if let Some(decided) = all.feed(v) {
                        return decided;
                    }
                }
                all.finish()
            }
            Type::Arrow(dom, cod) => {
                let mut all = AllOf::default();
                for n in self.num_set {
                    for m in self.num_set {
                        match self.eq(dom, n, m) {
                            Verdict::Fails => continue,
                            Verdict::Exhausted(e) => {
                                all.mark(e);
                                continue;
                            }
                            Verdict::Holds => {}
                        }
                        let va = match self.apply(a, n) {
                            Defined::Val(v) => v,
                            Defined::No => return Verdict::Fails,
                            Defined::Ex(e) => {
                                all.mark(e);
                                continue;
                            }
                        };
                        let vb = match self.apply(b, m) {
                            Defined::Val(v) => v,
                            Defined::No => return Verdict::Fails,
                            Defined::Ex(e) => {
                                all.mark(e);
                                continue;
                            }
                        };
                        if let Some(decided) = all.feed(self.eq(cod, &va, &vb)) {
                            return decided;
                        }
                    }
                }
                all.finish()
            }
        }
    }
}
