use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::cgs::{g1, g2, gstar_truncated, qbf_fig3};
use crate::enumerate::{bounded_valid, Bounds};
use crate::mc::mc;
use crate::syntax::parse;

fn sig() -> Signature {
    Signature::new(2, ["a", "b"], ["p"]).unwrap()
}

fn atoms() -> Vec<String> {
    vec!["p".to_string()]
}

fn cl(text: &str) -> ClFormula {
    parse_cl(text, &sig()).unwrap()
}

fn al(text: &str) -> AlFormula {
    parse_al(text, &sig()).unwrap()
}

fn sf(text: &str) -> SfclFormula {
    parse_sfcl(text, &sig()).unwrap()
}

#[test]
fn coalition_semantics_on_g1() {
    assert_eq!(cl_mc(&g1(), "s", &cl("[[1,2]] ~p")), Ok(true));
    assert_eq!(cl_mc(&g1(), "s", &cl("[[1]] ~p")), Ok(false));
    for g in [g1(), g2(), gstar_truncated(2)] {
        for s in g.states().to_vec() {
            for c in ["[[]] true", "[[1]] true", "[[2]] true", "[[1,2]] true"] {
                assert_eq!(cl_mc(&g, &s, &cl(c)), Ok(true));
            }
        }
    }
}

#[test]
fn coalition_translation_shapes() {
    assert_eq!(tr_cl(&cl("[[1]] p"), 2).to_string(), "exists x1 forall y2 <x1,y2> p");
    assert_eq!(tr_cl(&cl("[[]] p"), 2).to_string(), "forall y1 forall y2 <y1,y2> p");
    assert_eq!(tr_cl(&cl("[[1,2]] p"), 2).to_string(), "exists x1 exists x2 <x1,x2> p");
    assert_eq!(tr_cl(&cl("[[2]] p"), 2).to_string(), "exists x2 forall y1 <y1,x2> p");
    let avoid = tr_cl_avoiding(&cl("[[1]] p"), 2, &["x1".to_string()]);
    assert_eq!(avoid.to_string(), "exists x1_1 forall y2 <x1_1,y2> p");
}

#[test]
fn coalition_parse_errors() {
    assert!(parse_cl("[[3]] p", &sig()).is_err());
    assert!(parse_cl("[[0]] p", &sig()).is_err());
    assert!(parse_cl("[[1] p", &sig()).is_err());
    assert_eq!(cl("[[2,1,2]] p"), cl("[[1,2]] p"));
    let bad = Coal::new(vec![3], Ext::atom("p"));
    assert_eq!(cl_mc(&g1(), "s", &bad), Err(TranslateError::Agent { index: 3, agents: 2 }));
    assert_eq!(cl_mc(&g1(), "u", &cl("p")), Err(TranslateError::UnknownState("u".into())));
}

#[test]
fn marker_semantics_and_translation() {
    let f = al("[Ex, b] p");
    assert_eq!(f, Marker::new(vec![Entry::Exists("x".into()), Entry::Action("b".into())], Ext::atom("p")));
    assert_eq!(tr_al(&f).to_string(), "exists x <x,b> p");
    assert_eq!(tr_al(&al("[Ay, Ex] p")).to_string(), "exists x forall y <y,x> p");
    for g in [g1(), g2()] {
        for s in ["s", "t"] {
            assert_eq!(al_mc(&g, s, &al("[Ay, Az] true")), Ok(true));
        }
    }
    // synchronised moves of g1 leave s
    assert_eq!(al_mc(&g1(), "s", &al("[a, a] ~p")), Ok(true));
    assert_eq!(al_mc(&g2(), "s", &al("[a, a] ~p")), Ok(false));
}

#[test]
fn marker_errors() {
    assert!(parse_al("[Ex, Ex] p", &sig()).is_err());
    assert!(parse_al("[Ex] p", &sig()).is_err());
    assert!(parse_al("[Ex, c] p", &sig()).is_err());
    assert!(parse_al("[Ep, a] p", &sig()).is_err());
    let rep = Marker::new(vec![Entry::Exists("x".into()), Entry::Forall("x".into())], Ext::Top);
    assert_eq!(al_mc(&g1(), "s", &rep), Err(TranslateError::RepeatedVariable("x".into())));
    let act = Marker::new(vec![Entry::Action("c".into()), Entry::Forall("x".into())], Ext::Top);
    assert_eq!(al_mc(&g1(), "s", &act), Err(TranslateError::UnknownAction("c".into())));
    let clash = Marker::new(vec![Entry::Exists("a".into()), Entry::Forall("x".into())], Ext::Top);
    assert_eq!(al_mc(&g1(), "s", &clash), Err(TranslateError::VariableClash("a".into())));
    let short = Marker::new(vec![Entry::Exists("x".into())], Ext::Top);
    assert_eq!(al_mc(&g1(), "s", &short), Err(TranslateError::Arity { expected: 2, found: 1 }));
}

#[test]
fn enabling_semantics_on_g1() {
    assert_eq!(sfcl_mc(&g1(), "s", &sf("[[1]](true; p)")), Ok(true));
    assert_eq!(sfcl_mc(&g1(), "s", &sf("[[1]](p; ~p)")), Ok(false));
    for g in [g1(), g2(), qbf_fig3()] {
        let s = g.states()[0].clone();
        let f = parse_sfcl("[[1]](true; true)", &Signature::new(g.agents(), g.actions().to_vec(), g.atoms().to_vec()).unwrap()).unwrap();
        assert_eq!(sfcl_mc(&g, &s, &f), Ok(true));
    }
    assert!(parse_sfcl("[[1]](p; )", &sig()).is_err());
    assert!(parse_sfcl("[[1]](p)", &sig()).is_err());
    assert_eq!(SfCoal::new(vec![1], Ext::Top, vec![]), Err(TranslateError::EmptyEnable));
}

#[test]
fn printing_round_trips() {
    for f in cl_formulas(2, &atoms(), 4).concat() {
        assert_eq!(parse_cl(&f.to_string(), &sig()).unwrap(), f);
    }
    let acts = ["a".to_string(), "b".to_string()];
    for f in al_formulas(2, &acts, &atoms(), 3).concat() {
        assert_eq!(parse_al(&f.to_string(), &sig()).unwrap(), f);
    }
    for f in sfcl_formulas(2, &atoms(), 5).concat() {
        assert_eq!(parse_sfcl(&f.to_string(), &sig()).unwrap(), f);
    }
}

#[test]
fn enumerated_sizes_are_exact() {
    for (n, fs) in cl_formulas(2, &atoms(), 5).iter().enumerate() {
        assert!(fs.iter().all(|f| f.size() == n));
    }
    for (n, fs) in sfcl_formulas(2, &atoms(), 5).iter().enumerate() {
        assert!(fs.iter().all(|f| f.size() == n));
    }
    // 3 leaves; then 5 unary constructors (negation, four coalitions)
    let counts: Vec<usize> = cl_formulas(2, &atoms(), 4).iter().map(Vec::len).collect();
    assert_eq!(counts, [0, 3, 15, 111, 915]);
}

fn fixtures() -> Vec<(crate::cgs::Cgs, Vec<String>)> {
    [g1(), g2(), gstar_truncated(2)].into_iter().map(|g| {
        let states = g.states().to_vec();
        (g, states)
    }).collect()
}

#[test]
fn translations_agree_on_fixtures() {
    let acts = ["a".to_string(), "b".to_string()];
    for (g, states) in fixtures() {
        let reserved = g.actions().to_vec();
        for f in cl_formulas(2, &atoms(), 5).concat() {
            let t = tr_cl_avoiding(&f, 2, &reserved);
            for s in &states {
                assert_eq!(cl_mc(&g, s, &f).unwrap(), mc(&g, s, &t).unwrap(), "{f}");
            }
        }
        for f in sfcl_formulas(2, &atoms(), 5).concat() {
            let t = f.to_csl(2, &|n| reserved.iter().any(|r| r == n));
            for s in &states {
                assert_eq!(sfcl_mc(&g, s, &f).unwrap(), mc(&g, s, &t).unwrap(), "{f}");
            }
        }
        if g.actions() == acts {
            for f in al_formulas(2, &acts, &atoms(), 4).concat() {
                for s in &states {
                    assert_eq!(al_mc(&g, s, &f).unwrap(), mc(&g, s, &tr_al(&f)).unwrap(), "{f}");
                }
            }
        }
    }
}

#[test]
fn lazy_adequacy_within_small_bounds() {
    let b = Bounds::new(2, 2, 2);
    for f in cl_formulas(2, &atoms(), 3).concat() {
        let out = find_disagreement(&f, &b).unwrap();
        assert!(out.witness().is_none(), "{f}");
        assert!(out.report().is_complete());
    }
    let acts = ["a0".to_string(), "a1".to_string()];
    for f in al_formulas(2, &acts, &atoms(), 3).concat() {
        assert!(find_disagreement(&f, &b).unwrap().witness().is_none(), "{f}");
    }
}

/// `[[C]] f` read as `[[C]](f; true)`.
fn lift(f: &ClFormula) -> SfclFormula {
    let bin = |a: &ClFormula, b: &ClFormula| (lift(a), lift(b));
    match f {
        Ext::Top => Ext::Top,
        Ext::Bottom => Ext::Bottom,
        Ext::Atom(p) => Ext::atom(p.clone()),
        Ext::Not(a) => Ext::not(lift(a)),
        Ext::And(a, b) => {
            let (a, b) = bin(a, b);
            Ext::and(a, b)
        }
        Ext::Or(a, b) => {
            let (a, b) = bin(a, b);
            Ext::or(a, b)
        }
        Ext::Imp(a, b) => {
            let (a, b) = bin(a, b);
            Ext::imp(a, b)
        }
        Ext::Iff(a, b) => {
            let (a, b) = bin(a, b);
            Ext::iff(a, b)
        }
        Ext::Modal(c) => SfCoal::new(c.coalition.clone(), lift(&c.body), vec![Ext::Top]).unwrap(),
    }
}

#[test]
fn coalition_power_implies_enabling() {
    for (g, states) in fixtures() {
        for f in cl_formulas(2, &atoms(), 4).concat() {
            for c in coalitions(2) {
                let strong = Coal::new(c.clone(), f.clone());
                let weak = SfCoal::new(c.clone(), Ext::Top, vec![lift(&f)]).unwrap();
                let same = SfCoal::new(c.clone(), lift(&f), vec![lift(&f)]).unwrap();
                for s in &states {
                    let v = cl_mc(&g, s, &strong).unwrap();
                    assert!(!v || sfcl_mc(&g, s, &weak).unwrap());
                    assert_eq!(sfcl_mc(&g, s, &same).unwrap(), v);
                    assert_eq!(sfcl_mc(&g, s, &lift(&strong)).unwrap(), v);
                }
            }
        }
    }
}

#[test]
fn stackelberg_display() {
    assert_eq!(stackelberg_formula().to_string(), "forall x_d exists x_a forall x_e <x_d,x_a,x_e> win_a");
}

#[test]
fn nash_with_trivial_goals_is_valid() {
    let f = nash_formula(&[Formula::Top, Formula::Top], 2).unwrap();
    assert!(bounded_valid(&f, &Bounds::new(2, 2, 2)).unwrap());
    assert_eq!(nash_formula(&[Formula::Top], 2), Err(TranslateError::GoalCount { expected: 2, found: 1 }));
}

/// Pure equilibria of the one-shot game at `s` with goals `p` and `~p`.
fn equilibrium_oracle(g: &crate::cgs::Cgs, s: &str) -> bool {
    let acts = g.actions().to_vec();
    let wins = |x: &str, y: &str, i: usize| {
        let t = g.successor_by_name(s, &[x, y]).unwrap();
        let p = g.prop(g.state(t).unwrap()).contains(&"p");
        if i == 0 { p } else { !p }
    };
    acts.iter().any(|x| {
        acts.iter().any(|y| {
            let d0 = acts.iter().any(|z| wins(z, y, 0));
            let d1 = acts.iter().any(|z| wins(x, z, 1));
            (!d0 || wins(x, y, 0)) && (!d1 || wins(x, y, 1))
        })
    })
}

#[test]
fn nash_matches_profile_enumeration() {
    let goals = [Formula::atom("p"), Formula::not(Formula::atom("p"))];
    let f = nash_formula(&goals, 2).unwrap();
    assert_eq!(
        f.to_string(),
        "exists x1 exists x2 ((exists y1 <y1,x2> p -> <x1,x2> p) & (exists y2 <x1,y2> ~p -> <x1,x2> ~p))"
    );
    for g in [g1(), g2(), gstar_truncated(2), gstar_truncated(3)] {
        for s in g.states().to_vec() {
            assert_eq!(mc(&g, &s, &f).unwrap(), equilibrium_oracle(&g, &s), "{s}");
        }
    }
    // matching pennies on g1 at s: no pure equilibrium
    assert!(!equilibrium_oracle(&g1(), "s"));
    let clash = nash_formula(&[parse("<x1,a> p", &sig()).unwrap(), Formula::Top], 2).unwrap();
    assert!(clash.to_string().starts_with("exists x1_1 exists x2"));
}

fn brute(
    fs: &[AnyFormula],
    a: (&crate::cgs::Cgs, &str),
    b: (&crate::cgs::Cgs, &str),
) -> u128 {
    fs.iter().filter(|f| f.holds(a.0, a.1).unwrap() != f.holds(b.0, b.1).unwrap()).count() as u128
}

#[test]
fn report_counts_match_explicit_enumeration() {
    let acts = ["a".to_string(), "b".to_string()];
    let bound = 5;
    let all = |logic| -> Vec<AnyFormula> {
        match logic {
            Logic::Cl => cl_formulas(2, &atoms(), bound).concat().into_iter().map(AnyFormula::Cl).collect(),
            Logic::Sfcl => sfcl_formulas(2, &atoms(), bound).concat().into_iter().map(AnyFormula::Sfcl).collect(),
            Logic::Al => al_formulas(2, &acts, &atoms(), 4).concat().into_iter().map(AnyFormula::Al).collect(),
        }
    };
    let (x, y) = (g1(), g2());
    for (ga, sa, gb, sb) in [(&x, "s", &y, "s"), (&x, "s", &x, "t"), (&x, "t", &y, "s")] {
        for logic in [Logic::Cl, Logic::Sfcl, Logic::Al] {
            let fs = all(logic);
            let b = if logic == Logic::Al { 4 } else { bound };
            let r = distinguishability_report(ga, sa, gb, sb, logic, b).unwrap();
            assert_eq!(r.examined, fs.len() as u128, "{logic:?}");
            assert_eq!(r.distinguishing, brute(&fs, (ga, sa), (gb, sb)), "{logic:?}");
            for w in &r.witnesses {
                assert!(w.size() <= b);
                assert_ne!(w.holds(ga, sa).unwrap(), w.holds(gb, sb).unwrap());
            }
        }
    }
}

#[test]
fn g1_and_g2_agree_on_coalition_formulas() {
    for logic in [Logic::Cl, Logic::Sfcl] {
        let r = distinguishability_report(&g1(), "s", &g2(), "s", logic, 8).unwrap();
        assert!(r.is_empty(), "{logic:?}: {:?}", r.witnesses.first().map(ToString::to_string));
        assert!(r.examined > 1_000_000);
    }
    let csl = parse("exists x <x,x> ~p", &sig()).unwrap();
    assert_ne!(mc(&g1(), "s", &csl), mc(&g2(), "s", &csl));
    let markers = distinguishability_report(&g1(), "s", &g2(), "s", Logic::Al, 3).unwrap();
    assert!(!markers.is_empty());
}

#[test]
fn report_preconditions() {
    let one = crate::cgs::Cgs::from_fn(1, vec!["a".into()], vec!["s".into()], vec![("p", vec![0])], |_, _| 0).unwrap();
    assert_eq!(
        distinguishability_report(&g1(), "s", &one, "s", Logic::Cl, 3),
        Err(TranslateError::Mismatch("agents"))
    );
    assert!(distinguishability_report(&g1(), "x", &g2(), "s", Logic::Cl, 3).is_err());
}
