use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::*;

fn s(x: &str) -> String {
    x.to_string()
}

#[test]
fn fixtures_validate() {
    for g in [g1(), g2(), qbf_fig3(), gstar_truncated(1), gstar_truncated(3)] {
        assert_eq!(g.to_relational().validate(), Ok(g.clone()));
    }
}

#[test]
fn duplicated_edge_breaks_functionality() {
    let mut raw = g1().to_relational();
    raw.transitions.push((s("s"), vec![s("a"), s("b")], s("t")));
    let errs = raw.validate().unwrap_err();
    assert_eq!(
        errs,
        vec![Violation::Functionality {
            state: s("s"),
            decision: vec![s("a"), s("b")],
            targets: vec![s("s"), s("t")],
        }]
    );
}

#[test]
fn repeated_identical_edge_is_harmless() {
    let mut raw = g1().to_relational();
    let first = raw.transitions[0].clone();
    raw.transitions.push(first);
    assert!(raw.validate().is_ok());
}

#[test]
fn missing_edge_breaks_seriality() {
    let mut raw = g1().to_relational();
    raw.transitions.retain(|(from, d, _)| !(from == "s" && d[0] == "a" && d[1] == "a"));
    assert_eq!(
        raw.validate().unwrap_err(),
        vec![Violation::Seriality { state: s("s"), decision: vec![s("a"), s("a")] }]
    );
}

#[test]
fn structural_violations_are_collected() {
    let raw = RelationalCgs {
        agents: 1,
        actions: vec![s("a"), s("a")],
        states: vec![s("a")],
        transitions: vec![],
        valuation: vec![(s("a"), vec![])],
    };
    let errs = raw.validate().unwrap_err();
    assert!(errs.contains(&Violation::DuplicateAction(s("a"))));
    assert!(errs.contains(&Violation::ActionStateOverlap(s("a"))));
    assert!(errs.contains(&Violation::ActionAtomOverlap(s("a"))));
}

#[test]
fn bad_transition_entries() {
    let mut raw = g1().to_relational();
    raw.transitions.push((s("u"), vec![s("a"), s("c")], s("s")));
    raw.transitions.push((s("s"), vec![s("a")], s("s")));
    raw.valuation.push((s("q"), vec![s("w")]));
    let errs = raw.validate().unwrap_err();
    assert!(errs.iter().any(|e| matches!(e, Violation::UnknownState { state, .. } if state == "u")));
    assert!(errs.iter().any(|e| matches!(e, Violation::UnknownAction { action, .. } if action == "c")));
    assert!(errs.iter().any(|e| matches!(e, Violation::DecisionArity { found: 1, .. })));
    assert!(errs.iter().any(|e| matches!(e, Violation::UnknownValuationState { .. })));
}

#[test]
fn successor_lookup() {
    assert_eq!(g1().successor_by_name("s", &["a", "a"]), Ok("t"));
    assert_eq!(g1().successor_by_name("s", &["a", "b"]), Ok("s"));
    assert_eq!(g2().successor_by_name("s", &["a", "a"]), Ok("s"));
    assert_eq!(g2().successor_by_name("s", &["b", "a"]), Ok("t"));
    assert!(g1().successor_by_name("s", &["a"]).is_err());
}

/// Recount of the size formula straight from the relational listing.
fn recount(g: &Cgs) -> usize {
    let raw = g.to_relational();
    let decisions: usize = raw.actions.len().pow(raw.agents as u32);
    let props: usize = raw.valuation.iter().map(|(_, at)| at.len()).sum();
    raw.agents + raw.actions.len() + decisions + raw.states.len() + raw.transitions.len() + props
}

#[test]
fn size_matches_hand_count() {
    assert_eq!(g1().size(), 19);
    let single = Cgs::from_fn(1, vec![s("a")], vec![s("s")], vec![("p", vec![])], |_, _| 0).unwrap();
    assert_eq!(single.size(), 5);
    // n=1, |Ac|=3, |D|=3, |S|=4, |R|=12, three true atoms
    assert_eq!(qbf_fig3().size(), 1 + 3 + 3 + 4 + 12 + 3);
    for g in [g1(), g2(), qbf_fig3(), gstar_truncated(2), gstar_truncated(4)] {
        assert_eq!(g.size(), recount(&g));
    }
}

#[test]
fn constructed_over_signature() {
    let g = g1();
    assert!(g.constructed_over(&Signature::new(2, ["a", "b"], ["p"]).unwrap()));
    assert!(g.constructed_over(&Signature::new(2, ["b", "a"], ["p"]).unwrap()));
    assert!(!g.constructed_over(&Signature::new(2, ["a", "b", "c"], ["p"]).unwrap()));
    assert!(!g.constructed_over(&Signature::new(1, ["a", "b"], ["p"]).unwrap()));
}

#[test]
fn gstar_shape() {
    let g = gstar_truncated(3);
    assert_eq!(g.actions(), ["0", "1", "2", "3"]);
    assert_eq!(g.states().len(), 3);
    assert_eq!(g.successor_by_name("s0", &["1", "2"]), Ok("s1"));
    assert_eq!(g.successor_by_name("s0", &["2", "2"]), Ok("s2"));
    assert_eq!(g.successor_by_name("s1", &["3", "0"]), Ok("s1"));
    assert_eq!(g.prop(StateId(1)), vec!["p"]);
}

#[test]
fn unique_successor_for_every_decision() {
    for g in [g1(), g2(), qbf_fig3(), gstar_truncated(2)] {
        let raw = g.to_relational();
        for (si, state) in g.states().iter().enumerate() {
            for (d, t) in g.edges_from(StateId(si)) {
                let names: Vec<String> = d.0.iter().map(|a| g.actions()[a.0].clone()).collect();
                let targets: Vec<_> =
                    raw.transitions.iter().filter(|(f, dd, _)| f == state && *dd == names).collect();
                assert_eq!(targets.len(), 1);
                assert_eq!(targets[0].2, g.states()[t.0]);
            }
        }
    }
}

#[test]
fn decision_index_round_trip() {
    for i in 0..27 {
        assert_eq!(Decision::from_index(i, 3, 3).index(3), i);
    }
    assert_eq!(Decision::from_index(1, 2, 2).0, vec![ActionId(0), ActionId(1)]);
}
