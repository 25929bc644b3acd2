use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;

fn sig2() -> Signature {
    Signature::new(2, ["a", "b"], ["p", "q"]).unwrap()
}

fn v(x: &str) -> Term {
    Term::var(x)
}

fn c(x: &str) -> Term {
    Term::constant(x)
}

fn p() -> Formula {
    Formula::atom("p")
}

#[test]
fn signature_invariants() {
    assert_eq!(Signature::new(0, ["a"], ["p"]), Err(SignatureError::NoAgents));
    assert_eq!(Signature::new(1, Vec::<&str>::new(), ["p"]), Err(SignatureError::NoConstants));
    assert_eq!(Signature::new(1, ["a"], Vec::<&str>::new()), Err(SignatureError::NoAtoms));
    assert_eq!(Signature::new(1, ["a", "a"], ["p"]), Err(SignatureError::Duplicate("a".into())));
    assert_eq!(Signature::new(1, ["a"], ["a"]), Err(SignatureError::ConstantAtomOverlap("a".into())));
    assert_eq!(Signature::new(1, ["forall"], ["p"]), Err(SignatureError::BadIdentifier("forall".into())));
}

#[test]
fn parses_separation_formula() {
    let f = parse("exists x <x,x> ~p", &sig2()).unwrap();
    assert_eq!(f, Formula::exists("x", Formula::strat(vec![v("x"), v("x")], Formula::not(p()))));
}

#[test]
fn parses_atom() {
    assert_eq!(parse("p", &sig2()).unwrap(), p());
}

#[test]
fn parses_quantified_implication() {
    let f = parse("forall x (<a,x> p -> <x,a> p)", &sig2()).unwrap();
    let expected = Formula::forall(
        "x",
        Formula::imp(
            Formula::strat(vec![c("a"), v("x")], p()),
            Formula::strat(vec![v("x"), c("a")], p()),
        ),
    );
    assert_eq!(f, expected);
    assert_eq!(parse(&f.to_string(), &sig2()).unwrap(), f);
}

#[test]
fn quantifiers_bind_like_negation() {
    let f = parse("forall x <x,a> p & q", &sig2()).unwrap();
    assert!(matches!(f, Formula::And(..)));
}

#[test]
fn parse_errors() {
    let sig = sig2();
    let err = parse("<a> p", &sig).unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::Arity { expected: 2, found: 1 });
    assert_eq!(err.pos, 0);
    assert!(matches!(parse("forall a p", &sig).unwrap_err().kind, ParseErrorKind::Clash(_)));
    assert!(matches!(parse("<p,a> q", &sig).unwrap_err().kind, ParseErrorKind::Clash(_)));
    assert!(matches!(parse("r", &sig).unwrap_err().kind, ParseErrorKind::UnknownAtom(_)));
    assert!(matches!(parse("p $ q", &sig).unwrap_err().kind, ParseErrorKind::UnexpectedChar('$')));
    let chain = parse("p & q & p", &sig).unwrap_err();
    assert_eq!(chain.pos, 6);
    assert!(parse("(p & q", &sig).is_err());
    assert!(parse("", &sig).is_err());
}

#[test]
fn free_variables() {
    assert!(free_vars(&p()).is_empty());
    let f = Formula::strat(vec![v("x"), c("a")], p());
    assert_eq!(free_vars(&f), ["x"].into_iter().collect());
    let g = Formula::forall("x", Formula::strat(vec![v("x"), v("y")], p()));
    assert_eq!(free_vars(&g), ["y"].into_iter().collect());
}

#[test]
fn substitution() {
    let f = Formula::strat(vec![v("x"), v("x")], Formula::not(p()));
    assert_eq!(
        substitute(&f, "x", &c("a")).unwrap(),
        Formula::strat(vec![c("a"), c("a")], Formula::not(p()))
    );
    let bound = Formula::forall("x", Formula::strat(vec![v("x"), v("y")], p()));
    assert_eq!(substitute(&bound, "x", &c("b")).unwrap(), bound);
    let capture = Formula::forall("y", Formula::strat(vec![v("x"), v("y")], p()));
    assert_eq!(
        substitute(&capture, "x", &v("y")),
        Err(CaptureError { var: "x".into(), term: "y".into() })
    );
    // no capture when x does not occur free below the binder
    let harmless = Formula::forall("y", Formula::strat(vec![v("y"), v("y")], p()));
    assert_eq!(substitute(&harmless, "x", &v("y")).unwrap(), harmless);
}

#[test]
fn closure_orders_by_first_occurrence() {
    let s = parse("forall x <x,a> p", &sig2()).unwrap();
    assert_eq!(closure(&s), s);
    let xy = Formula::strat(vec![v("x"), v("y")], p());
    assert_eq!(closure(&xy), Formula::forall("x", Formula::forall("y", xy.clone())));
    let yx = Formula::strat(vec![v("y"), v("x")], p());
    assert_eq!(closure(&yx), Formula::forall("y", Formula::forall("x", yx.clone())));
}

#[test]
fn size_counts_nodes_terms_and_binders() {
    assert_eq!(p().size(), 1);
    assert_eq!(Formula::not(p()).size(), 2);
    assert_eq!(Formula::strat(vec![c("a"), c("b")], p()).size(), 4);
    assert_eq!(parse("forall x <x,x> p", &sig2()).unwrap().size(), 6);
}

#[test]
fn nnf_examples() {
    let sig = sig2();
    let f = parse("~<a,b> p", &sig).unwrap();
    assert_eq!(nnf(&f), parse("<a,b> ~p", &sig).unwrap());
    let g = parse("~forall x <x,a> p", &sig).unwrap();
    assert_eq!(nnf(&g), parse("exists x <x,a> ~p", &sig).unwrap());
    assert_eq!(nnf(&parse("~~p", &sig).unwrap()), p());
    let h = parse("~(p <-> ~q)", &sig).unwrap();
    assert_eq!(nnf(&h), parse("(p <-> q)", &sig).unwrap());
}

#[test]
fn core_normalize_examples() {
    let sig = sig2();
    let e = parse("exists x <x,x> ~p", &sig).unwrap();
    assert_eq!(core_normalize(&e), parse("~forall x ~<x,x> ~p", &sig).unwrap());
    assert_eq!(core_normalize(&parse("p -> q", &sig).unwrap()), parse("~(p & ~q)", &sig).unwrap());
    assert!(is_sentence(&e));
    assert!(core_normalize(&parse("((p | q) <-> false)", &sig).unwrap()).is_core());
}

#[test]
fn well_formedness_check() {
    let sig = sig2();
    assert!(parse("forall x <x,a> p", &sig).unwrap().check(&sig).is_ok());
    let bad = Formula::strat(vec![c("z"), c("a")], p());
    assert_eq!(bad.check(&sig), Err(WellFormedError::UnknownConstant("z".into())));
    let arity = Formula::strat(vec![c("a")], p());
    assert!(matches!(arity.check(&sig), Err(WellFormedError::Arity { .. })));
}

fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    crate::testutil::arb_formula(&["a", "b"], 2, depth)
}

proptest! {
    #[test]
    fn print_parse_round_trip(f in arb_formula(6)) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text, &sig2()).unwrap(), f);
    }

    #[test]
    fn nnf_is_at_most_twice_as_large(f in arb_formula(6)) {
        let g = nnf(&f);
        prop_assert!(g.is_nnf());
        prop_assert!(g.size() <= 2 * f.size());
        prop_assert_eq!(free_vars(&g), free_vars(&f));
    }

    #[test]
    fn closure_is_an_idempotent_sentence(f in arb_formula(5)) {
        let cl = closure(&f);
        prop_assert!(is_sentence(&cl));
        prop_assert_eq!(closure(&cl), cl);
    }

    #[test]
    fn constant_substitution_removes_the_variable(f in arb_formula(5)) {
        for x in ["x", "y", "z"] {
            if free_vars(&f).contains(x) {
                let g = substitute(&f, x, &c("a")).unwrap();
                let mut expected: Vec<_> = free_vars(&f).iter().filter(|y| *y != x).map(ToString::to_string).collect();
                expected.sort();
                let mut got: Vec<_> = free_vars(&g).iter().map(ToString::to_string).collect();
                got.sort();
                prop_assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn size_is_monotone_under_subformulas(f in arb_formula(5)) {
        for child in f.children() {
            prop_assert!(child.size() < f.size());
        }
    }
}
