//! Generators shared by the unit tests.

use alloc::string::String;
use alloc::vec::Vec;

use proptest::prelude::*;

use crate::syntax::{Formula, Term};

fn arb_term(constants: &[&str]) -> impl Strategy<Value = Term> + Clone {
    let mut names: Vec<Term> = constants.iter().map(|c| Term::constant(*c)).collect();
    names.extend(["x", "y", "z"].into_iter().map(Term::var));
    proptest::sample::select(names)
}

/// Random formulas over atoms `p`,`q`, the given constants and the
/// variables `x`,`y`,`z`, using every connective.
pub(crate) fn arb_formula(constants: &[&str], agents: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::Top),
        Just(Formula::Bottom)
    ];
    let terms = proptest::collection::vec(arb_term(constants), agents);
    let var = proptest::sample::select(alloc::vec![String::from("x"), String::from("y"), String::from("z")]);
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (terms.clone(), inner.clone()).prop_map(|(ts, f)| Formula::strat(ts, f)),
            (var.clone(), inner.clone()).prop_map(|(x, f)| Formula::forall(x, f)),
            (var.clone(), inner).prop_map(|(x, f)| Formula::exists(x, f)),
        ]
    })
}
