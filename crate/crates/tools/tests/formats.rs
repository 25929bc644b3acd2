use std::path::Path;

use csl_core::cgs::{g1, gstar_truncated, qbf_fig3, Violation};
use csl_core::reduce::{parse_qbf, qbf_eval, Quant};
use csl_tools::format::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn data(rel: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

#[test]
fn models_round_trip() {
    for g in [g1(), qbf_fig3(), gstar_truncated(3)] {
        let text = model_json(&g);
        let back = parse_model(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(model_json(&back), text);
    }
}

#[test]
fn relational_input_is_validated() {
    let missing = r#"{"n": 1, "actions": ["a"], "states": ["s", "t"],
        "transitions": [["s", ["a"], "t"]], "valuation": {"p": ["s"]}}"#;
    match parse_model(missing) {
        Err(FormatError::Model(v)) => assert!(matches!(v.as_slice(), [Violation::Seriality { state, .. }] if state == "t")),
        other => panic!("{other:?}"),
    }
    let twice = r#"{"n": 1, "actions": ["a"], "states": ["s"],
        "transitions": [["s", ["a"], "s"], ["s", ["a"], "s"], ["s", ["a"], "u"]], "valuation": {}}"#;
    let Err(FormatError::Model(v)) = parse_model(twice) else { panic!() };
    assert!(v.iter().any(|e| matches!(e, Violation::UnknownState { .. })));
    // a repeated identical triple is harmless, two different targets are not
    let clash = r#"{"n": 1, "actions": ["a"], "states": ["s", "t"],
        "transitions": [["s", ["a"], "s"], ["s", ["a"], "t"], ["t", ["a"], "t"]]}"#;
    let Err(FormatError::Model(v)) = parse_model(clash) else { panic!() };
    assert!(matches!(v.as_slice(), [Violation::Functionality { .. }]));
    assert!(matches!(parse_model(r#"{"n": 1}"#), Err(FormatError::Json { .. })));
    assert!(matches!(parse_model(r#"{"n": 1, "actions": [], "states": [], "transitions": [], "extra": 1}"#), Err(FormatError::Json { .. })));
}

#[test]
fn signatures() {
    let sig = load_signature(&data("sig/g.sig.json")).unwrap();
    assert_eq!((sig.agents(), sig.constants(), sig.atoms()), (2, &["a".to_string(), "b".to_string()][..], &["p".to_string()][..]));
    assert_eq!(parse_signature(&signature_json(&sig)).unwrap(), sig);
    assert!(matches!(parse_signature(r#"{"n": 0, "constants": ["a"], "atoms": ["p"]}"#), Err(FormatError::Signature(_))));
    assert!(matches!(parse_signature(r#"{"n": 1, "constants": ["p"], "atoms": ["p"]}"#), Err(FormatError::Signature(_))));
    assert!(matches!(load_signature(Path::new("/nonexistent")), Err(FormatError::Io { .. })));
}

#[test]
fn qdimacs_and_infix_agree() {
    let a = parse_qbf_text(&std::fs::read_to_string(data("qbf/fig3.qdimacs")).unwrap()).unwrap();
    let b = parse_qbf_text(&std::fs::read_to_string(data("qbf/fig3.qbf")).unwrap()).unwrap();
    assert_eq!(a.prefix(), b.prefix());
    assert!(qbf_eval(&a) && qbf_eval(&b));
}

#[test]
fn qdimacs_free_variables_are_outer_existentials() {
    let q = parse_qdimacs("p cnf 3 2\na 2 0\n1 2 0\n-2 3 0\n").unwrap();
    assert_eq!(q.prefix(), &[(Quant::Exists, 1), (Quant::Exists, 3), (Quant::Forall, 2)]);
    assert!(qbf_eval(&q));
}

#[test]
fn qdimacs_errors() {
    for (text, line) in [
        ("a 1 0\n", 1),
        ("p cnf 2 1\n1 3 0\n", 2),
        ("p cnf 2 1\na 1\n1 0\n", 2),
        ("p cnf 2 1\n1 0\ne 2 0\n", 3),
        ("p cnf 2 1\na -1 0\n1 0\n", 2),
        ("p cnf x 1\n", 1),
    ] {
        match parse_qdimacs(text) {
            Err(FormatError::Qdimacs { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    assert!(parse_qdimacs("p cnf 2 2\n1 0\n").is_err());
    assert!(matches!(parse_qdimacs("p cnf 2 1\na 1 0\ne 1 0\n1 0\n"), Err(FormatError::Qbf(_))));
}

/// Brute force over the clause list, quantifying in prefix order.
fn oracle(prefix: &[(bool, usize)], clauses: &[Vec<i64>], assign: &mut Vec<bool>) -> bool {
    match prefix.split_first() {
        None => clauses.iter().all(|c| c.iter().any(|&l| assign[l.unsigned_abs() as usize] == (l > 0))),
        Some((&(forall, v), rest)) => {
            let mut vals = [false, true].into_iter().map(|b| {
                assign[v] = b;
                oracle(rest, clauses, assign)
            });
            if forall {
                vals.all(|x| x)
            } else {
                vals.any(|x| x)
            }
        }
    }
}

#[test]
fn random_qdimacs_matches_clause_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let vars = rng.gen_range(1..=6);
        let ncl = rng.gen_range(1..=6);
        let clauses: Vec<Vec<i64>> = (0..ncl)
            .map(|_| {
                (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let v = rng.gen_range(1..=vars) as i64;
                        if rng.gen() {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let mut order: Vec<usize> = (1..=vars).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let prefix: Vec<(bool, usize)> = order.iter().map(|&v| (rng.gen(), v)).collect();
        let mut text = format!("c random\np cnf {vars} {ncl}\n");
        for (forall, v) in &prefix {
            text += &format!("{} {v} 0\n", if *forall { "a" } else { "e" });
        }
        for c in &clauses {
            text += &c.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
            text += " 0\n";
        }
        let used: Vec<usize> = {
            let mut u: Vec<usize> = clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).collect();
            u.sort();
            u.dedup();
            u
        };
        let q = parse_qbf_text(&text).unwrap();
        let expect = oracle(&prefix, &clauses, &mut vec![false; vars + 1]);
        assert_eq!(qbf_eval(&q), expect, "{text}");
        // the infix rendering reads back to the same verdict
        let again = parse_qbf(&q.to_string()).unwrap();
        assert_eq!(qbf_eval(&again), expect);
        assert!(used.iter().all(|v| q.variables().contains(v)));
    }
}

#[test]
fn derivations_load_with_their_signature() {
    let (d, sig) = load_derivation(&data("proofs/k-premises.proof")).unwrap();
    assert_eq!(sig.constants(), ["a0", "a1"]);
    assert_eq!(d.premises.len(), 2);
    assert!(matches!(load_derivation(&data("sig/g.sig.json")), Err(FormatError::NoSig(_))));
}

#[test]
fn tiles_file() {
    let t = parse_tiles(&std::fs::read_to_string(data("tiling/checker.json")).unwrap()).unwrap();
    assert_eq!(t.tiles, ["w", "k"]);
    assert_eq!(t.h.len(), 2);
    assert!(parse_tiles(r#"{"tiles": ["a"], "d": []}"#).is_err());
}
