//! Sample derivations exercising every axiom and rule, plus a curated
//! set of broken variants (one per rule) that the checker must reject.
//!
//! These double as the source of the checked-in proof files: each sample
//! serializes through `Derivation`'s display form and parses back.

use crate::syntax::{parse_formula_with, Derivation, Formula, Payload, Signature, Term, Type};

pub struct Sample {
    pub name: &'static str,
    pub derivation: Derivation,
}

fn fml(sig: &Signature, vars: &[(&str, Type)], src: &str) -> Formula {
    let ctx: Vec<(String, Type)> = vars
        .iter()
        .map(|(n, t)| (n.to_string(), t.clone()))
        .collect();
    parse_formula_with(src, sig, &ctx).unwrap_or_else(|e| panic!("corpus formula {src}: {e}"))
}

/// `phi -> psi` from a derivation of `psi`.
fn weaken(psi_deriv: Derivation, phi: Formula) -> Derivation {
    let psi = psi_deriv.conclusion.clone();
    let s1 = Derivation::leaf(
        4,
        Formula::imp(Formula::and(psi.clone(), phi.clone()), psi.clone()),
    );
    let s2 = Derivation::node(
        8,
        Formula::imp(psi.clone(), Formula::imp(phi.clone(), psi.clone())),
        vec![s1],
    );
    Derivation::node(2, Formula::imp(phi, psi), vec![psi_deriv, s2])
}

fn mp(minor: Derivation, major: Derivation) -> Derivation {
    let conclusion = match &major.conclusion {
        Formula::Imp(_, b) => (**b).clone(),
        other => panic!("major premise {other} is not an implication"),
    };
    Derivation::node(2, conclusion, vec![minor, major])
}

/// `A & B` from derivations of `A` and of `B`.
fn conj(da: Derivation, db: Derivation) -> Derivation {
    let a = da.conclusion.clone();
    let b = db.conclusion.clone();
    let i1 = Derivation::leaf(1, Formula::imp(a.clone(), a.clone()));
    let i2 = weaken(db, a.clone());
    let i3 = Derivation::node(
        6,
        Formula::imp(a.clone(), Formula::and(a.clone(), b.clone())),
        vec![i1, i2],
    );
    mp(da, i3)
}

fn refl(t: Term, ty: Type) -> Derivation {
    Derivation::leaf(20, Formula::Eq(ty, t.clone(), t))
}

fn syll(first: Derivation, second: Derivation) -> Derivation {
    let a = match &first.conclusion {
        Formula::Imp(a, _) => (**a).clone(),
        other => panic!("{other} is not an implication"),
    };
    let c = match &second.conclusion {
        Formula::Imp(_, c) => (**c).clone(),
        other => panic!("{other} is not an implication"),
    };
    Derivation::node(3, Formula::imp(a, c), vec![first, second])
}

/// The full sample corpus. Together the derivations exercise all 25
/// rules.
pub fn samples(sig: &Signature) -> Vec<Sample> {
    let nn = Type::arrow(Type::Nat, Type::Nat);
    let n3 = Type::arrows(&[Type::Nat, Type::Nat], Type::Nat);
    let zero_eq = || fml(sig, &[], "0 =N 0");
    let mut out = Vec::new();
    let mut push = |name: &'static str, derivation: Derivation| {
        out.push(Sample { name, derivation });
    };

    // (1) identity implication at a closed atom.
    push(
        "imp_refl",
        Derivation::leaf(1, fml(sig, &[], "0 =N 0 -> 0 =N 0")),
    );

    // (2), (20) modus ponens from reflexivity.
    push(
        "modus_ponens",
        mp(
            refl(Term::Zero, Type::Nat),
            Derivation::leaf(1, fml(sig, &[], "0 =N 0 -> 0 =N 0")),
        ),
    );

    // (3) syllogism between two identity implications.
    push(
        "syllogism",
        syll(
            Derivation::leaf(1, fml(sig, &[], "0 =N 0 -> 0 =N 0")),
            Derivation::leaf(1, fml(sig, &[], "0 =N 0 -> 0 =N 0")),
        ),
    );

    // (4) conjunction projection.
    push(
        "and_proj",
        Derivation::leaf(4, fml(sig, &[], "0 =N 0 & S(0) =N S(0) -> 0 =N 0")),
    );

    // (5) disjunction injection.
    push(
        "or_inject",
        Derivation::leaf(5, fml(sig, &[], "0 =N 0 -> 0 =N 0 | 0 =N S(0)")),
    );

    // (6), (8), (4), (2) conjunction introduction from two facts.
    push(
        "and_intro",
        conj(
            refl(Term::Zero, Type::Nat),
            refl(Term::numeral(1), Type::Nat),
        ),
    );

    // (7), (9) case analysis with ex falso on the right.
    push(
        "or_elim",
        Derivation::node(
            7,
            fml(sig, &[], "(0 =N 0 | 0 =N S(0)) -> 0 =N 0"),
            vec![
                Derivation::leaf(1, fml(sig, &[], "0 =N 0 -> 0 =N 0")),
                Derivation::leaf(9, fml(sig, &[], "0 =N S(0) -> 0 =N 0")),
            ],
        ),
    );

    // (8) both directions.
    let curry = Derivation::node(
        8,
        fml(sig, &[], "0 =N 0 -> (S(0) =N S(0) -> 0 =N 0)"),
        vec![Derivation::leaf(
            4,
            fml(sig, &[], "0 =N 0 & S(0) =N S(0) -> 0 =N 0"),
        )],
    );
    push("curry", curry.clone());
    push(
        "uncurry",
        Derivation::node(
            8,
            fml(sig, &[], "0 =N 0 & S(0) =N S(0) -> 0 =N 0"),
            vec![curry],
        ),
    );

    // (9) ex falso on its own.
    push(
        "exfalso",
        Derivation::leaf(9, fml(sig, &[], "0 =N S(0) -> S(S(0)) =N S(S(0))")),
    );

    // (10), (14) universal introduction over a defining equation.
    let defeq = Derivation::leaf(14, fml(sig, &[("x", Type::Nat)], "add(x,0) =N x"));
    let guarded = weaken(defeq, zero_eq());
    let all_intro = Derivation::node(
        10,
        fml(sig, &[], "0 =N 0 -> forall x:N. add(x,0) =N x"),
        vec![guarded],
    );
    push("forall_intro", mp(refl(Term::Zero, Type::Nat), all_intro));

    // (11) existential elimination into a closed consequent.
    push(
        "exists_elim",
        Derivation::node(
            11,
            fml(sig, &[], "(exists x:N. x =N S(S(0))) -> 0 =N 0"),
            vec![weaken(
                refl(Term::Zero, Type::Nat),
                fml(sig, &[("x", Type::Nat)], "x =N S(S(0))"),
            )],
        ),
    );

    // (12) existential introduction: a closed witness.
    push(
        "exists_intro",
        mp(
            refl(Term::numeral(2), Type::Nat),
            Derivation::leaf(
                12,
                fml(sig, &[], "S(S(0)) =N S(S(0)) -> exists x:N. x =N S(S(0))"),
            )
            .with_payload(Payload::Term(Term::numeral(2))),
        ),
    );

    // (12) universal instantiation of the derived universal fact.
    let all_fact = mp(
        refl(Term::Zero, Type::Nat),
        Derivation::node(
            10,
            fml(sig, &[], "0 =N 0 -> forall x:N. add(x,0) =N x"),
            vec![weaken(
                Derivation::leaf(14, fml(sig, &[("x", Type::Nat)], "add(x,0) =N x")),
                zero_eq(),
            )],
        ),
    );
    push(
        "forall_elim",
        mp(
            all_fact,
            Derivation::leaf(
                12,
                fml(
                    sig,
                    &[],
                    "(forall x:N. add(x,0) =N x) -> add(S(0),0) =N S(0)",
                ),
            )
            .with_payload(Payload::Term(Term::numeral(1))),
        ),
    );

    // (13) both successor axioms.
    push(
        "succ_no_confusion",
        Derivation::leaf(13, fml(sig, &[("x", Type::Nat)], "0 =N S(x) -> 0 =N S(0)")),
    );
    push(
        "succ_injective",
        Derivation::leaf(
            13,
            fml(
                sig,
                &[("x", Type::Nat), ("y", Type::Nat)],
                "S(x) =N S(y) -> x =N y",
            ),
        ),
    );

    // (14) a defining equation with two variables.
    push(
        "defining_equation",
        Derivation::leaf(
            14,
            fml(
                sig,
                &[("x", Type::Nat), ("y", Type::Nat)],
                "add(x,S(y)) =N S(add(x,y))",
            ),
        ),
    );

    // (15) combinator equations.
    push(
        "comb_k",
        Derivation::leaf(
            15,
            fml(
                sig,
                &[("x", Type::Nat), ("y", Type::Nat)],
                "app(app(K[N,N],x),y) =N x",
            ),
        ),
    );
    push(
        "comb_s",
        Derivation::leaf(
            15,
            fml(
                sig,
                &[("x", n3.clone()), ("y", nn.clone()), ("z", Type::Nat)],
                "app(app(app(Sig[N,N,N],x),y),z) =N app(app(x,z),app(y,z))",
            ),
        ),
    );

    // (16) recursor equations.
    push(
        "rec_zero",
        Derivation::leaf(
            16,
            fml(
                sig,
                &[("x", Type::Nat), ("y", n3.clone())],
                "app(app(app(R[N],x),y),0) =N x",
            ),
        ),
    );
    push(
        "rec_succ",
        Derivation::leaf(
            16,
            fml(
                sig,
                &[("x", Type::Nat), ("y", n3.clone()), ("z", Type::Nat)],
                "app(app(app(R[N],x),y),S(z)) =N app(app(y,app(app(app(R[N],x),y),z)),z)",
            ),
        ),
    );

    // (17) projections of a pair.
    push(
        "proj_pair",
        Derivation::leaf(
            17,
            fml(
                sig,
                &[("x", Type::Nat), ("y", Type::Nat)],
                "app(D0[N,N],app(app(D[N,N],x),y)) =N x",
            ),
        ),
    );

    // (18) surjective pairing.
    push(
        "surjective_pairing",
        Derivation::leaf(
            18,
            fml(
                sig,
                &[("x", Type::prod(Type::Nat, Type::Nat))],
                "x =N*N app(app(D[N,N],app(D0[N,N],x)),app(D1[N,N],x))",
            ),
        ),
    );

    // (19) induction: max(x,x) = x, with Leibniz and syllogism plumbing.
    push("induction_max", induction_max(sig));

    // (20) reflexivity at base and arrow type.
    push(
        "refl_var",
        Derivation::leaf(20, fml(sig, &[("x", Type::Nat)], "x =N x")),
    );
    push(
        "refl_fun",
        Derivation::leaf(20, fml(sig, &[("f", nn.clone())], "f =N->N f")),
    );

    // (21) decidable equality, open and closed instances.
    push(
        "dec_eq",
        Derivation::leaf(
            21,
            fml(
                sig,
                &[("x", Type::Nat), ("y", Type::Nat)],
                "x =N y | (x =N y -> 0 =N S(0))",
            ),
        ),
    );
    push(
        "dec_eq_closed",
        Derivation::leaf(21, fml(sig, &[], "S(0) =N 0 | (S(0) =N 0 -> 0 =N S(0))")),
    );

    // (22) Leibniz.
    push(
        "leibniz",
        Derivation::leaf(
            22,
            fml(
                sig,
                &[("x", Type::Nat), ("y", Type::Nat)],
                "x =N y & x =N 0 -> y =N 0",
            ),
        ),
    );

    // (23) extensionality at N -> N.
    push(
        "extensionality",
        Derivation::leaf(
            23,
            fml(
                sig,
                &[("x", nn.clone()), ("y", nn.clone())],
                "(forall z:N. app(x,z) =N app(y,z)) -> x =N->N y",
            ),
        ),
    );

    // (24) choice at N, doubling matrix.
    push(
        "choice",
        Derivation::leaf(
            24,
            fml(
                sig,
                &[],
                "(forall x:N. exists y:N. y =N add(x,x)) -> \
                 exists z:N->N. forall x:N. app(z,x) =N add(x,x)",
            ),
        ),
    );

    // Choice applied end to end: derive the premise, detach the
    // Skolemized conclusion.
    push("ac_instance", ac_instance(sig));

    // (25) dependent choice at N with the successor step relation.
    push(
        "dependent_choice",
        Derivation::leaf(
            25,
            fml(
                sig,
                &[],
                "(forall x:N. x =N x -> (exists y:N. y =N y & y =N S(x))) -> \
                 forall x:N. x =N x -> (exists z:N->N. app(z,0) =N x & \
                 (forall v:N. app(z,S(v)) =N S(app(z,v))))",
            ),
        ),
    );

    out
}

/// `exists z:N->N. forall x:N. app(z,x) = add(x,x)` from the choice
/// axiom and a derived premise.
fn ac_instance(sig: &Signature) -> Derivation {
    let x = &[("x", Type::Nat)];
    let doubled = crate::syntax::Term::Prim("add".into(), vec![Term::nvar("x"), Term::nvar("x")]);
    // add(x,x) = add(x,x), then the witness step into the existential.
    let refl_step = refl(doubled.clone(), Type::Nat);
    let intro = Derivation::leaf(
        12,
        Formula::imp(
            refl_step.conclusion.clone(),
            fml(sig, x, "exists y:N. y =N add(x,x)"),
        ),
    )
    .with_payload(Payload::Term(doubled));
    let ex = mp(refl_step, intro);
    // Universal closure over x through a vacuous antecedent.
    let zero_eq = fml(sig, &[], "0 =N 0");
    let guarded = weaken(ex, zero_eq.clone());
    let closed = Derivation::node(
        10,
        fml(sig, &[], "0 =N 0 -> forall x:N. exists y:N. y =N add(x,x)"),
        vec![guarded],
    );
    let premise = mp(refl(Term::Zero, Type::Nat), closed);
    let choice = Derivation::leaf(
        24,
        fml(
            sig,
            &[],
            "(forall x:N. exists y:N. y =N add(x,x)) -> \
             exists z:N->N. forall x:N. app(z,x) =N add(x,x)",
        ),
    );
    mp(premise, choice)
}

fn induction_max(sig: &Signature) -> Derivation {
    let x = &[("x", Type::Nat)];
    let ih = fml(sig, x, "max(x,x) =N x");
    let base = Derivation::leaf(14, fml(sig, &[], "max(0,0) =N 0"));
    let unfold = Derivation::leaf(14, fml(sig, x, "max(S(x),S(x)) =N S(max(x,x))"));
    let ih_self = Derivation::leaf(1, Formula::imp(ih.clone(), ih.clone()));
    let ih_to_unfold = weaken(unfold, ih.clone());
    let pair_up = Derivation::node(
        6,
        Formula::imp(
            ih.clone(),
            Formula::and(ih.clone(), fml(sig, x, "max(S(x),S(x)) =N S(max(x,x))")),
        ),
        vec![ih_self, ih_to_unfold],
    );
    let leibniz = Derivation::leaf(
        22,
        fml(
            sig,
            x,
            "(max(x,x) =N x & max(S(x),S(x)) =N S(max(x,x))) -> max(S(x),S(x)) =N S(x)",
        ),
    );
    let step = syll(pair_up, leibniz);
    Derivation::node(19, ih, vec![base, step]).with_payload(Payload::Var("x".into()))
}

/// One broken derivation per rule; each must be rejected by the checker.
pub fn mutations(sig: &Signature) -> Vec<(u8, Derivation)> {
    let n = Type::Nat;
    let nn = Type::arrow(Type::Nat, Type::Nat);
    let f = |vars: &[(&str, Type)], s: &str| fml(sig, vars, s);
    vec![
        (1, Derivation::leaf(1, f(&[], "0 =N 0 -> 0 =N S(0)"))),
        (
            2,
            Derivation::node(
                2,
                f(&[], "0 =N 0"),
                vec![
                    refl(Term::numeral(1), Type::Nat),
                    Derivation::leaf(1, f(&[], "0 =N 0 -> 0 =N 0")),
                ],
            ),
        ),
        (
            3,
            Derivation::node(
                3,
                f(&[], "0 =N 0 -> 0 =N 0"),
                vec![
                    Derivation::leaf(1, f(&[], "0 =N 0 -> 0 =N 0")),
                    Derivation::leaf(1, f(&[], "S(0) =N S(0) -> S(0) =N S(0)")),
                ],
            ),
        ),
        (
            4,
            Derivation::leaf(4, f(&[], "0 =N 0 & 0 =N 0 -> S(0) =N 0")),
        ),
        (
            5,
            Derivation::leaf(5, f(&[], "S(0) =N 0 -> 0 =N 0 | 0 =N S(0)")),
        ),
        (
            6,
            Derivation::node(
                6,
                f(&[], "0 =N 0 -> 0 =N 0 & S(0) =N S(0)"),
                vec![
                    Derivation::leaf(1, f(&[], "0 =N 0 -> 0 =N 0")),
                    Derivation::leaf(1, f(&[], "S(0) =N S(0) -> S(0) =N S(0)")),
                ],
            ),
        ),
        (
            7,
            Derivation::node(
                7,
                f(&[], "(0 =N 0 | S(0) =N S(0)) -> 0 =N 0"),
                vec![
                    Derivation::leaf(1, f(&[], "0 =N 0 -> 0 =N 0")),
                    Derivation::leaf(1, f(&[], "S(0) =N S(0) -> S(0) =N S(0)")),
                ],
            ),
        ),
        (
            8,
            Derivation::node(
                8,
                f(&[], "S(0) =N S(0) -> (0 =N 0 -> 0 =N 0)"),
                vec![Derivation::leaf(
                    4,
                    f(&[], "0 =N 0 & S(0) =N S(0) -> 0 =N 0"),
                )],
            ),
        ),
        (9, Derivation::leaf(9, f(&[], "0 =N 0 -> S(0) =N 0"))),
        (
            10,
            Derivation::node(
                10,
                f(&[("x", n.clone())], "x =N 0 -> forall x:N. x =N 0"),
                vec![Derivation::leaf(
                    1,
                    f(&[("x", n.clone())], "x =N 0 -> x =N 0"),
                )],
            ),
        ),
        (
            11,
            Derivation::node(
                11,
                f(&[("x", n.clone())], "(exists x:N. x =N 0) -> x =N 0"),
                vec![Derivation::leaf(
                    1,
                    f(&[("x", n.clone())], "x =N 0 -> x =N 0"),
                )],
            ),
        ),
        (
            12,
            Derivation::leaf(12, f(&[], "(forall x:N. x =N x) -> 0 =N S(0)"))
                .with_payload(Payload::Term(Term::Zero)),
        ),
        (13, Derivation::leaf(13, f(&[], "S(0) =N 0 -> 0 =N S(0)"))),
        (
            14,
            Derivation::leaf(14, f(&[("x", n.clone())], "add(x,0) =N S(x)")),
        ),
        (
            15,
            Derivation::leaf(
                15,
                f(
                    &[("x", n.clone()), ("y", n.clone())],
                    "app(app(K[N,N],x),y) =N y",
                ),
            ),
        ),
        (
            16,
            Derivation::leaf(
                16,
                f(
                    &[
                        ("x", n.clone()),
                        ("y", Type::arrows(&[n.clone(), n.clone()], n.clone())),
                    ],
                    "app(app(app(R[N],x),y),0) =N app(app(y,x),0)",
                ),
            ),
        ),
        (
            17,
            Derivation::leaf(
                17,
                f(
                    &[("x", n.clone()), ("y", n.clone())],
                    "app(D0[N,N],app(app(D[N,N],x),y)) =N y",
                ),
            ),
        ),
        (
            18,
            Derivation::leaf(
                18,
                f(
                    &[("x", Type::prod(n.clone(), n.clone()))],
                    "x =N*N app(app(D[N,N],app(D1[N,N],x)),app(D0[N,N],x))",
                ),
            ),
        ),
        (
            19,
            Derivation::node(
                19,
                f(&[("x", n.clone())], "max(x,x) =N x"),
                vec![
                    Derivation::leaf(14, f(&[], "max(0,0) =N 0")),
                    Derivation::leaf(1, f(&[("x", n.clone())], "max(x,x) =N x -> max(x,x) =N x")),
                ],
            )
            .with_payload(Payload::Var("x".into())),
        ),
        (
            20,
            Derivation::leaf(20, f(&[("x", n.clone()), ("y", n.clone())], "x =N y")),
        ),
        (
            21,
            Derivation::leaf(
                21,
                f(
                    &[("x", n.clone()), ("y", n.clone())],
                    "x =N y | (x =N y -> 0 =N 0)",
                ),
            ),
        ),
        (
            22,
            Derivation::leaf(
                22,
                f(
                    &[("x", n.clone()), ("y", n.clone())],
                    "x =N y & x =N 0 -> S(0) =N 0",
                ),
            ),
        ),
        (
            23,
            Derivation::leaf(
                23,
                f(
                    &[("x", nn.clone()), ("y", nn.clone())],
                    "(forall z:N. app(x,z) =N app(x,z)) -> x =N->N y",
                ),
            ),
        ),
        (
            24,
            Derivation::leaf(
                24,
                f(
                    &[],
                    "(forall x:N. exists y:N. y =N add(x,x)) -> \
                     exists z:N->N. forall x:N. app(z,x) =N 0",
                ),
            ),
        ),
        (
            25,
            Derivation::leaf(
                25,
                f(
                    &[],
                    "(forall x:N. x =N x -> (exists y:N. y =N y & y =N S(x))) -> \
                     forall x:N. x =N x -> (exists z:N->N. app(z,S(0)) =N x & \
                     (forall v:N. app(z,S(v)) =N S(app(z,v))))",
                ),
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{check_derivation, parse_proof};

    #[test]
    fn all_samples_check() {
        let sig = Signature::standard();
        for s in samples(&sig) {
            check_derivation(&s.derivation, &sig)
                .unwrap_or_else(|e| panic!("sample {}: {e}", s.name));
        }
    }

    #[test]
    fn all_mutations_are_rejected() {
        let sig = Signature::standard();
        let muts = mutations(&sig);
        let covered: std::collections::BTreeSet<u8> = muts.iter().map(|(r, _)| *r).collect();
        assert_eq!(covered.len(), 25, "one mutation per rule");
        for (rule, d) in muts {
            assert!(
                check_derivation(&d, &sig).is_err(),
                "mutation of rule {rule} was accepted"
            );
        }
    }

    #[test]
    fn samples_serialize_and_parse_back() {
        let sig = Signature::standard();
        for s in samples(&sig) {
            let text = s.derivation.to_string();
            let parsed = parse_proof(&text, &sig)
                .unwrap_or_else(|e| panic!("reparse of {}: {e}\n{text}", s.name));
            assert_eq!(parsed, s.derivation, "roundtrip of {}", s.name);
        }
    }

    #[test]
    fn rule_10_side_condition_is_flagged() {
        use crate::syntax::CheckError;
        let sig = Signature::standard();
        let bad = mutations(&sig)
            .into_iter()
            .find(|(r, _)| *r == 10)
            .unwrap()
            .1;
        match check_derivation(&bad, &sig) {
            Err(CheckError::SideCondition { rule: 10, .. }) => {}
            other => panic!("expected a side-condition error, got {other:?}"),
        }
    }
}
