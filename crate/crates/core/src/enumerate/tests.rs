use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::mc::{mc_at, valid_in};
use crate::syntax::{nnf, parse, Signature, Term};

fn sig(n: usize) -> Signature {
    Signature::new(n, ["a0", "a1"], ["p", "q"]).unwrap()
}

fn f(n: usize, text: &str) -> Formula {
    parse(text, &sig(n)).unwrap()
}

/// Independent count: |S|^(|S|·|Ac|^n) · 2^(|S|·|atoms|) by repeated multiplication.
fn product(n: u32, a: u128, s: u128, atoms: u128) -> u128 {
    let mut out = 1u128;
    for _ in 0..s * a.pow(n) {
        out *= s;
    }
    for _ in 0..s * atoms {
        out *= 2;
    }
    out
}

#[test]
fn single_cell_counts() {
    let b = Bounds::new(1, 1, 1).with_atoms(["p"]);
    assert_eq!(enum_cgs(&b).unwrap().count(), 2);
    let b = Bounds::new(1, 1, 2).with_atoms(["p"]);
    let two_states = enum_cgs(&b).unwrap().filter(|g| g.states().len() == 2).count();
    assert_eq!(two_states, 16);
}

#[test]
fn enumeration_matches_closed_form() {
    for (n, a, s, atoms) in [(1, 2, 2, 1), (1, 3, 2, 0), (2, 2, 2, 1), (1, 2, 3, 1), (2, 1, 3, 2)] {
        let names: Vec<String> = ["p", "q"][..atoms].iter().map(|p| String::from(*p)).collect();
        let b = Bounds::new(n, a, s).with_atoms(names);
        let mut per_cell = alloc::collections::BTreeMap::new();
        for g in enum_cgs(&b).unwrap() {
            *per_cell.entry((g.states().len(), g.actions().len())).or_insert(0u128) += 1;
        }
        for si in 1..=s {
            for ai in 1..=a {
                let expected = product(n as u32, ai as u128, si as u128, atoms as u128);
                assert_eq!(per_cell[&(si, ai)], expected);
                assert_eq!(cell_count(n, ai, si, atoms), Some(expected));
            }
        }
    }
}

#[test]
fn enumerated_structures_are_valid_and_distinct() {
    let b = Bounds::new(2, 2, 2).with_atoms(["p"]);
    let mut seen = BTreeSet::new();
    for g in enum_cgs(&b).unwrap() {
        assert_eq!(g.to_relational().validate().as_ref(), Ok(&g));
        assert!(seen.insert(format!("{g:?}")));
    }
}

#[test]
fn enumeration_order_is_by_cell_then_lexicographic() {
    let b = Bounds::new(1, 2, 2).with_atoms(["p"]);
    let shapes: Vec<(usize, usize)> = enum_cgs(&b).unwrap().map(|g| (g.states().len(), g.actions().len())).collect();
    let mut sorted = shapes.clone();
    sorted.sort();
    assert_eq!(shapes, sorted);
    let first = enum_cgs(&b).unwrap().next().unwrap();
    assert_eq!(first.prop(StateId(0)), Vec::<&str>::new());
}

#[test]
fn guard_refuses_large_bounds() {
    let b = Bounds::new(2, 3, 3).with_atoms(["p"]);
    assert!(matches!(enum_cgs(&b), Err(EnumError::TooMany { .. })));
    assert!(matches!(enum_cgs(&Bounds::new(0, 1, 1)), Err(EnumError::ZeroBound)));
}

#[test]
fn label_clash_is_reported() {
    let b = Bounds::new(1, 2, 2).with_atoms(["a1"]);
    assert_eq!(enum_cgs(&b).unwrap_err(), EnumError::LabelClash("a1".into()));
}

#[test]
fn axiom_instances_have_no_countermodel() {
    let b = Bounds::new(1, 2, 3);
    let n_inst = f(1, "(~<a0> p <-> <a0> ~p)");
    let out = find_countermodel(&n_inst, &b).unwrap();
    assert!(out.witness().is_none());
    assert!(out.report().is_complete());
    let b2 = Bounds::new(2, 2, 3);
    assert!(bounded_valid(&f(2, "(forall x <a0,a1> p -> <a0,a1> forall x p)"), &b2).unwrap());
}

#[test]
fn atom_has_a_countermodel() {
    let out = find_countermodel(&f(1, "p"), &Bounds::new(1, 2, 2)).unwrap();
    let w = out.witness().expect("p is not valid");
    let s = w.state.unwrap();
    assert_eq!(mc_at(&w.model, s, &f(1, "p")), Ok(false));
    // the smallest one: one state, one action, p false
    assert_eq!(w.model.states().len(), 1);
    assert_eq!(w.model.actions().len(), 1);
}

#[test]
fn consequence_and_equivalence_examples() {
    let b = Bounds::new(1, 2, 2);
    assert!(bounded_consequence(&[f(1, "p")], &f(1, "p"), &b).unwrap());
    assert!(bounded_consequence(&[f(1, "p")], &f(1, "forall x <x> p"), &b).is_ok());
    // p valid in G forces p at every successor
    assert!(bounded_consequence(&[f(1, "p")], &f(1, "forall x <x> p"), &b).unwrap());
    assert!(!bounded_consequence(&[f(1, "q")], &f(1, "p"), &b).unwrap());
    assert!(!bounded_equiv(&f(1, "p"), &f(1, "q"), &b).unwrap());
    let g = f(1, "~forall x (<x> p -> exists y <y> ~q)");
    assert!(bounded_equiv(&g, &nnf(&g), &b).unwrap());
}

#[test]
fn constants_outside_a_cell_skip_it() {
    let out = find_countermodel(&f(1, "(<a1> p | ~<a1> p)"), &Bounds::new(1, 2, 2)).unwrap();
    let rep = out.report();
    assert!(rep.cells.iter().filter(|c| c.actions == 1).all(|c| c.skipped));
    assert!(rep.cells.iter().filter(|c| c.actions == 2).all(|c| !c.skipped));
    assert!(rep.is_complete());
}

/// Validity by brute force over the naive enumeration.
fn naive_countermodel(g: &Formula, b: &Bounds) -> Option<(Cgs, StateId)> {
    for m in enum_cgs(b).unwrap() {
        if crate::mc::check_against(&m, g).is_err() {
            continue;
        }
        for s in 0..m.states().len() {
            if !mc_at(&m, StateId(s), g).unwrap() {
                return Some((m, StateId(s)));
            }
        }
    }
    None
}

fn arb(agents: usize, depth: u32) -> impl Strategy<Value = Formula> {
    crate::testutil::arb_formula(&["a0", "a1"], agents, depth)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lazy_search_agrees_with_naive_enumeration(g in arb(1, 4)) {
        let b = Bounds::new(1, 2, 2).with_atoms(["p", "q"]);
        let lazy = find_countermodel(&g, &b).unwrap();
        let searched = lazy.report().cells.len() - usize::from(lazy.witness().is_some());
        prop_assert!(lazy.report().cells[..searched].iter().all(|c| c.skipped || c.covered.len() == c.states));
        let naive = naive_countermodel(&g, &b);
        prop_assert_eq!(lazy.witness().is_none(), naive.is_none());
        match lazy.witness() {
            None => prop_assert!(lazy.report().is_complete()),
            Some(w) => {
                let s = w.state.unwrap();
                prop_assert_eq!(mc_at(&w.model, s, &g), Ok(false));
                // same cell as the first naive counterexample
                let (m, _) = naive.unwrap();
                prop_assert_eq!(
                    (w.model.states().len(), w.model.actions().len()),
                    (m.states().len(), m.actions().len())
                );
            }
        }
    }

    #[test]
    fn two_agent_search_agrees_with_naive(g in arb(2, 3)) {
        let b = Bounds::new(2, 2, 2).with_atoms(["p", "q"]).unguarded();
        let lazy = bounded_valid(&g, &b).unwrap();
        let naive = naive_countermodel(&g, &b).is_none();
        prop_assert_eq!(lazy, naive);
    }

    #[test]
    fn countermodel_absent_iff_valid(g in arb(1, 4)) {
        let b = Bounds::new(1, 2, 2);
        let none = find_countermodel(&g, &b).unwrap().witness().is_none();
        prop_assert_eq!(none, bounded_valid(&g, &b).unwrap());
    }

    #[test]
    fn nnf_is_bounded_equivalent(g in arb(1, 4)) {
        prop_assert!(bounded_equiv(&g, &nnf(&g), &Bounds::new(1, 2, 2)).unwrap());
    }

    #[test]
    fn consequence_matches_whole_model_oracle(x in arb(1, 3), g in arb(1, 3)) {
        let b = Bounds::new(1, 2, 2).with_atoms(["p", "q"]);
        let lazy = bounded_consequence(&[x.clone()], &g, &b).unwrap();
        let naive = enum_cgs(&b).unwrap().all(|m| {
            crate::mc::check_against(&m, &x).is_err()
                || crate::mc::check_against(&m, &g).is_err()
                || !valid_in(&m, &x).unwrap()
                || valid_in(&m, &g).unwrap()
        });
        prop_assert_eq!(lazy, naive);
    }
}

#[test]
fn coverage_is_exact_for_a_valid_formula_with_modalities() {
    let g = Formula::or(
        Formula::strat(vec![Term::var("x"), Term::constant("a0")], Formula::atom("p")),
        Formula::not(Formula::strat(vec![Term::var("x"), Term::constant("a0")], Formula::atom("p"))),
    );
    let out = find_countermodel(&g, &Bounds::new(2, 2, 3)).unwrap();
    let rep = out.report();
    assert!(out.witness().is_none());
    assert!(rep.is_complete());
    let cells = || (1..=3u128).flat_map(|s| (1..=2u128).map(move |a| (s, a)));
    let expected: u128 = cells().map(|(s, a)| product(2, a, s, 1)).sum();
    assert_eq!(rep.candidates(), expected);
    assert_eq!(rep.pointed_candidates(), cells().map(|(s, a)| product(2, a, s, 1) * s).sum::<u128>());
}
