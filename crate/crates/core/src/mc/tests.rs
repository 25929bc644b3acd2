use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::cgs::{g1, g2, gstar_truncated, qbf_fig3, RelationalCgs};
use crate::syntax::{free_vars_ordered, nnf, parse, Signature};

fn sig() -> Signature {
    Signature::new(2, ["a", "b"], ["p"]).unwrap()
}

fn f(text: &str) -> Formula {
    parse(text, &sig()).unwrap()
}

#[test]
fn separation_claims() {
    assert_eq!(mc(&g1(), "s", &f("exists x <x,x> ~p")), Ok(true));
    assert_eq!(mc(&g2(), "s", &f("exists x <x,x> ~p")), Ok(false));
    assert_eq!(mc(&g1(), "s", &f("forall x exists y <x,y> p")), Ok(true));
    assert_eq!(mc(&g1(), "s", &f("forall x <x,x> ~p")), Ok(true));
}

#[test]
fn simple_truths() {
    for g in [g1(), g2()] {
        for s in ["s", "t"] {
            assert_eq!(mc(&g, s, &f("(p | ~p)")), Ok(true));
        }
    }
    assert_eq!(mc(&g1(), "s", &f("<a,a> p")), Ok(false));
    assert_eq!(mc_dual(&g1(), "s", &f("<a,a> p")), Ok(false));
    let one = Cgs::from_fn(1, vec!["a".into()], vec!["s".into()], vec![("p", vec![0])], |_, _| 0).unwrap();
    let one_sig = Signature::new(1, ["a"], ["p"]).unwrap();
    assert_eq!(mc(&one, "s", &parse("(<a> p <-> p)", &one_sig).unwrap()), Ok(true));
}

#[test]
fn validity_and_sets() {
    assert_eq!(valid_in(&g1(), &f("(p | ~p)")), Ok(true));
    assert_eq!(valid_in(&g1(), &f("p")), Ok(false));
    let set = [f("exists x <x,x> ~p"), f("forall x exists y <x,y> p")];
    assert_eq!(satisfies_set(&g1(), "s", &set), Ok(true));
    assert_eq!(satisfies_set(&g2(), "s", &set), Ok(false));
}

#[test]
fn open_formulas_use_their_closure() {
    // <x,x> ~p holds at s in g1 for every x, so the closure holds
    assert_eq!(mc(&g1(), "s", &f("<x,x> ~p")), Ok(true));
    // <x,y> p fails for x = y
    assert_eq!(mc(&g1(), "s", &f("<x,y> p")), Ok(false));
}

#[test]
fn errors() {
    assert_eq!(mc(&g1(), "u", &f("p")), Err(McError::UnknownState("u".into())));
    assert_eq!(mc(&g1(), "s", &Formula::atom("q")), Err(McError::UnknownAtom("q".into())));
    let c = Formula::strat(vec![Term::constant("c"), Term::constant("a")], Formula::atom("p"));
    assert_eq!(mc(&g1(), "s", &c), Err(McError::UnknownConstant("c".into())));
    let short = Formula::strat(vec![Term::constant("a")], Formula::atom("p"));
    assert_eq!(mc(&g1(), "s", &short), Err(McError::Arity { expected: 2, found: 1 }));
    let clash = Formula::forall("a", Formula::atom("p"));
    assert_eq!(mc(&g1(), "s", &clash), Err(McError::VariableClash("a".into())));
}

#[test]
fn expansions_for_two_quantifiers() {
    let (v, st) = mc_with_stats(&g1(), "s", &f("forall x forall y (<x,y> p | ~<x,y> p)")).unwrap();
    assert!(v);
    assert_eq!(st.quantifier_expansions, 4);
}

fn prefix(q: usize) -> Formula {
    let mut body = Formula::or(Formula::atom("p"), Formula::not(Formula::atom("p")));
    for i in (0..q).rev() {
        body = Formula::forall(alloc::format!("x{i}"), body);
    }
    body
}

#[test]
fn expansions_grow_as_powers() {
    for k in 1..=4 {
        let g = gstar_truncated(k);
        let acts = (k + 1) as u64;
        for q in 1..=5u32 {
            let (v, st) = mc_with_stats(&g, "s0", &prefix(q as usize)).unwrap();
            assert!(v);
            assert_eq!(st.quantifier_expansions, acts.pow(q));
        }
    }
}

#[test]
fn depth_is_bounded_by_size() {
    for text in ["exists x <x,x> ~p", "forall x exists y <x,y> p", "(p -> <a,b> (p & <b,b> ~p))"] {
        let g = f(text);
        let (_, st) = mc_with_stats(&g1(), "s", &g).unwrap();
        assert!(st.max_depth <= g.size(), "{text}");
    }
}

fn rename(g: &Cgs, state: impl Fn(&str) -> String, atom: impl Fn(&str) -> String) -> Cgs {
    let raw = g.to_relational();
    RelationalCgs {
        agents: raw.agents,
        actions: raw.actions,
        states: raw.states.iter().map(|s| state(s)).collect(),
        transitions: raw
            .transitions
            .into_iter()
            .map(|(s, d, t)| (state(&s), d, state(&t)))
            .collect(),
        valuation: raw
            .valuation
            .into_iter()
            .map(|(p, at)| (atom(&p), at.iter().map(|s| state(s)).collect()))
            .collect(),
    }
    .validate()
    .unwrap()
}

fn rename_atoms(f: &Formula, atom: &impl Fn(&str) -> String) -> Formula {
    match f {
        Formula::Atom(p) => Formula::Atom(atom(p)),
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::Not(a) => Formula::not(rename_atoms(a, atom)),
        Formula::And(a, b) => Formula::and(rename_atoms(a, atom), rename_atoms(b, atom)),
        Formula::Or(a, b) => Formula::or(rename_atoms(a, atom), rename_atoms(b, atom)),
        Formula::Imp(a, b) => Formula::imp(rename_atoms(a, atom), rename_atoms(b, atom)),
        Formula::Iff(a, b) => Formula::iff(rename_atoms(a, atom), rename_atoms(b, atom)),
        Formula::Strat(ts, a) => Formula::strat(ts.clone(), rename_atoms(a, atom)),
        Formula::Forall(x, a) => Formula::forall(x.clone(), rename_atoms(a, atom)),
        Formula::Exists(x, a) => Formula::exists(x.clone(), rename_atoms(a, atom)),
    }
}

/// g1 with a second atom `q` true at `t`.
fn models() -> Vec<Cgs> {
    let g1q = Cgs::from_fn(
        2,
        vec!["a".into(), "b".into()],
        vec!["s".into(), "t".into()],
        vec![("p", vec![0]), ("q", vec![1])],
        |s, d| if d[0] == d[1] { 1 - s } else { s },
    )
    .unwrap();
    let mixed = Cgs::from_fn(
        2,
        vec!["a".into(), "b".into()],
        vec!["s".into(), "t".into(), "u".into()],
        vec![("p", vec![0, 2]), ("q", vec![2])],
        |s, d| (s + d[0] + 2 * d[1]) % 3,
    )
    .unwrap();
    vec![g1q, mixed]
}

fn arb(depth: u32) -> impl Strategy<Value = Formula> {
    crate::testutil::arb_formula(&["a", "b"], 2, depth)
}

proptest! {
    #[test]
    fn mc_agrees_with_dual(f in arb(5)) {
        for g in models() {
            for s in g.states().to_vec() {
                prop_assert_eq!(mc(&g, &s, &f), mc_dual(&g, &s, &f));
            }
        }
    }

    #[test]
    fn normal_forms_preserve_truth(f in arb(5)) {
        for g in models() {
            for s in g.states().to_vec() {
                let v = mc(&g, &s, &f).unwrap();
                prop_assert_eq!(mc(&g, &s, &nnf(&f)).unwrap(), v);
                prop_assert_eq!(mc(&g, &s, &core_normalize(&f)).unwrap(), v);
            }
        }
    }

    #[test]
    fn negation_commutes_with_modalities(f in arb(4)) {
        let ts = vec![Term::constant("a"), Term::constant("b")];
        let lhs = Formula::not(Formula::strat(ts.clone(), f.clone()));
        let rhs = Formula::strat(ts, Formula::not(f));
        for g in models() {
            for s in g.states().to_vec() {
                prop_assert_eq!(mc(&g, &s, &lhs).unwrap(), mc(&g, &s, &rhs).unwrap());
            }
        }
    }

    #[test]
    fn closure_order_is_irrelevant(f in arb(5)) {
        let mut reversed = f.clone();
        for x in free_vars_ordered(&f) {
            reversed = Formula::forall(x, reversed);
        }
        for g in models() {
            for s in g.states().to_vec() {
                prop_assert_eq!(mc(&g, &s, &f).unwrap(), mc(&g, &s, &reversed).unwrap());
            }
        }
    }

    #[test]
    fn consistent_renaming_is_invisible(f in arb(5)) {
        let state = |s: &str| alloc::format!("st_{s}");
        let atom = |p: &str| alloc::format!("{p}_renamed");
        let g2f = rename_atoms(&f, &atom);
        for g in models() {
            let h = rename(&g, state, atom);
            for s in g.states() {
                prop_assert_eq!(mc(&g, s, &f).unwrap(), mc(&h, &state(s), &g2f).unwrap());
            }
        }
    }
}

#[test]
fn fixtures_agree_with_dual_on_separation_formulas() {
    let fig3 = qbf_fig3();
    let sig3 = Signature::new(1, ["a1", "a2", "a3"], ["p1", "p2", "p3"]).unwrap();
    let q = parse("forall x2 exists x1 exists x3 ((<x1> p1 -> <x2> p2) & <x3> p3)", &sig3).unwrap();
    assert_eq!(mc(&fig3, "s", &q), Ok(true));
    assert_eq!(mc_dual(&fig3, "s", &q), Ok(true));
    for text in ["exists x <x,x> ~p", "forall x exists y <x,y> p", "forall x <x,x> ~p"] {
        for g in [g1(), g2()] {
            for s in ["s", "t"] {
                assert_eq!(mc(&g, s, &f(text)), mc_dual(&g, s, &f(text)));
            }
        }
    }
}
