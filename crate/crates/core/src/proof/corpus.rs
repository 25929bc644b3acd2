//! The shipped derivations, the monotonicity template, and the mutation
//! operators used to test the kernel.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{substitute_blind, Derivation, Justification, Step};
use crate::syntax::{fresh_name, parse, substitute, Formula, Signature, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Valid,
    /// Breaks a side condition or a rule; must be rejected.
    Invalid,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub derivation: Derivation,
    pub expect: Expect,
}

/// Two agents, actions `a0` and `a1`, atoms `p` and `q`.
pub fn corpus_signature() -> Signature {
    Signature::new(2, ["a0", "a1"], ["p", "q"]).expect("corpus signature")
}

/// Signature file name written on the `sig` line of corpus files.
pub const CORPUS_SIG: &str = "corpus.sig.json";

fn f(text: &str) -> Formula {
    parse(text, &corpus_signature()).unwrap_or_else(|e| panic!("corpus formula `{text}`: {e}"))
}

struct Build {
    steps: Vec<Step>,
}

impl Build {
    fn new() -> Self {
        Build { steps: Vec::new() }
    }

    fn push(&mut self, formula: Formula, by: Justification) -> usize {
        self.steps.push(Step { formula, by });
        self.steps.len()
    }

    fn get(&self, i: usize) -> &Formula {
        &self.steps[i - 1].formula
    }

    /// From step `i` and step `j` written as `step_i -> c`, infer `c`.
    fn mp(&mut self, i: usize, j: usize) -> usize {
        let Formula::Imp(_, c) = self.get(j).clone() else { panic!("step {j} is not an implication") };
        self.push(*c, Justification::Mp(i, j))
    }

    /// Proves `h1 -> (h2 -> .. -> goal)` by PC and discharges every
    /// hypothesis by MP, in order.
    fn pc_chain(&mut self, hyps: &[usize], goal: Formula) -> usize {
        let taut = hyps.iter().rev().fold(goal, |acc, &h| Formula::imp(self.get(h).clone(), acc));
        let mut cur = self.push(taut, Justification::Pc);
        for &h in hyps {
            cur = self.mp(h, cur);
        }
        cur
    }

    fn done(self, goal: Formula, premises: Vec<Formula>) -> Derivation {
        Derivation { sig: Some(String::from(CORPUS_SIG)), premises, goal: Some(goal), steps: self.steps }
    }
}

/// Appends the steps turning `A -> B` at step `from` into
/// `<ts> A -> <ts> B`; returns the final step.
fn monotone(b: &mut Build, from: usize, ts: &[Term]) -> usize {
    let Formula::Imp(a, c) = b.get(from).clone() else { panic!("step {from} is not an implication") };
    let (a, c) = (*a, *c);
    let at = |g: Formula| Formula::strat(ts.to_vec(), g);
    let a_not_c = Formula::and(a.clone(), Formula::not(c.clone()));
    let nec = b.push(at(Formula::imp(a.clone(), c.clone())), Justification::Nec(from, ts.to_vec()));
    let n1 = b.push(Formula::iff(Formula::not(at(a_not_c.clone())), at(Formula::not(a_not_c.clone()))), Justification::N);
    let k = b.push(
        Formula::iff(Formula::and(at(a.clone()), at(Formula::not(c.clone()))), at(a_not_c)),
        Justification::K,
    );
    let n2 = b.push(Formula::iff(Formula::not(at(c.clone())), at(Formula::not(c.clone()))), Justification::N);
    b.pc_chain(&[n1, k, n2, nec], Formula::imp(at(a), at(c)))
}

/// The derived rule "from `A -> B` infer `<ts> A -> <ts> B`" applied to
/// the last step of `d`, which must be written as an implication.
pub fn monotonicity(d: &Derivation, ts: &[Term]) -> Derivation {
    let mut b = Build { steps: d.steps.clone() };
    let last = monotone(&mut b, d.steps.len(), ts);
    let goal = b.get(last).clone();
    Derivation { goal: Some(goal), steps: b.steps, ..d.clone() }
}

/// `<ts>(phi -> psi) -> (<ts> phi -> <ts> psi)`.
fn distribution(ts: &str, phi: &str, psi: &str) -> Derivation {
    let (phi, psi) = (f(phi), f(psi));
    let ts: Vec<Term> = match f(&alloc::format!("{ts} true")) {
        Formula::Strat(ts, _) => ts,
        _ => unreachable!(),
    };
    let at = |g: Formula| Formula::strat(ts.clone(), g);
    let imp = Formula::imp(phi.clone(), psi.clone());
    let mut b = Build::new();
    let base = b.push(Formula::imp(Formula::and(imp.clone(), phi.clone()), psi.clone()), Justification::Pc);
    let mono = monotone(&mut b, base, &ts);
    let k = b.push(
        Formula::iff(Formula::and(at(imp.clone()), at(phi.clone())), at(Formula::and(imp.clone(), phi.clone()))),
        Justification::K,
    );
    let goal = Formula::imp(at(imp), Formula::imp(at(phi), at(psi)));
    b.pc_chain(&[k, mono], goal.clone());
    b.done(goal, vec![])
}

/// `forall x (phi -> psi) -> (phi -> forall x psi)` with `x` not free in
/// `phi`, generalizing on the fresh constant `a1`.
fn quantifier_shift() -> Derivation {
    let theta = f("forall x (q -> <x,a0> p)");
    let mut b = Build::new();
    let e = b.push(Formula::imp(theta.clone(), f("(q -> <a1,a0> p)")), Justification::E { t: Term::constant("a1"), x: "x".into() });
    let conj = Formula::and(theta.clone(), f("q"));
    let inst = b.pc_chain(&[e], Formula::imp(conj.clone(), f("<a1,a0> p")));
    let gen = b.push(
        Formula::imp(conj, f("forall x <x,a0> p")),
        Justification::Gen { step: inst, t: Term::constant("a1"), x: "x".into() },
    );
    let goal = Formula::imp(theta, f("(q -> forall x <x,a0> p)"));
    b.pc_chain(&[gen], goal.clone());
    b.done(goal, vec![])
}

/// The same theorem, generalizing on the variable itself.
fn quantifier_shift_on_variable() -> Derivation {
    let theta = f("forall x (<a1,a1> q -> <x,a0> p)");
    let mut b = Build::new();
    let e = b.push(Formula::imp(theta.clone(), f("(<a1,a1> q -> <x,a0> p)")), Justification::E { t: Term::var("x"), x: "x".into() });
    let conj = Formula::and(theta.clone(), f("<a1,a1> q"));
    let inst = b.pc_chain(&[e], Formula::imp(conj.clone(), f("<x,a0> p")));
    let gen = b.push(
        Formula::imp(conj, f("forall x <x,a0> p")),
        Justification::Gen { step: inst, t: Term::var("x"), x: "x".into() },
    );
    let goal = Formula::imp(theta, f("(<a1,a1> q -> forall x <x,a0> p)"));
    b.pc_chain(&[gen], goal.clone());
    b.done(goal, vec![])
}

/// `exists z (<z,a> p -> forall y <y,a> p)`.
fn drinker() -> Derivation {
    let theta = f("forall z ~(<z,a0> p -> forall y <y,a0> p)");
    let all = f("forall y <y,a0> p");
    let mut b = Build::new();
    let e = b.push(
        Formula::imp(theta.clone(), f("~(<a1,a0> p -> forall y <y,a0> p)")),
        Justification::E { t: Term::constant("a1"), x: "z".into() },
    );
    let inst = b.pc_chain(&[e], Formula::imp(theta.clone(), f("<a1,a0> p")));
    let gen = b.push(
        Formula::imp(theta.clone(), all),
        Justification::Gen { step: inst, t: Term::constant("a1"), x: "y".into() },
    );
    b.pc_chain(&[e, gen], Formula::not(theta));
    b.done(f("exists z (<z,a0> p -> forall y <y,a0> p)"), vec![])
}

fn single(formula: &str, by: Justification) -> Derivation {
    let mut b = Build::new();
    b.push(f(formula), by);
    b.done(f(formula), vec![])
}

fn k_demo() -> Derivation {
    let mut b = Build::new();
    let k = b.push(f("((<a0,a1> p & <a0,a1> q) <-> <a0,a1> (p & q))"), Justification::K);
    b.pc_chain(&[k], f("((<a0,a1> p & <a0,a1> q) -> <a0,a1> (p & q))"));
    b.done(f("<a0,a1> (p & q)"), vec![f("<a0,a1> p"), f("<a0,a1> q")])
}

fn n_demo() -> Derivation {
    let mut b = Build::new();
    let n = b.push(f("(~<a0,a1> p <-> <a0,a1> ~p)"), Justification::N);
    let goal = f("(<a0,a1> ~p -> ~<a0,a1> p)");
    b.pc_chain(&[n], goal.clone());
    b.done(goal, vec![])
}

fn nec_demo() -> Derivation {
    let mut b = Build::new();
    let t = b.push(Formula::Top, Justification::Pc);
    b.push(f("<a0,a1> true"), Justification::Nec(t, vec![Term::constant("a0"), Term::constant("a1")]));
    b.done(f("<a0,a1> true"), vec![])
}

fn monotonicity_demo() -> Derivation {
    let mut b = Build::new();
    let base = b.push(f("((p & q) -> p)"), Justification::Pc);
    monotone(&mut b, base, &[Term::constant("a0"), Term::constant("a1")]);
    b.done(f("(<a0,a1> (p & q) -> <a0,a1> p)"), vec![])
}

fn premise_demo() -> Derivation {
    let mut b = Build::new();
    b.push(f("(p -> p)"), Justification::Pc);
    b.done(f("p"), vec![f("p")])
}

/// Valid derivations first, then files each kernel side condition must
/// reject.
pub fn corpus() -> Vec<CorpusEntry> {
    let valid = |name, derivation| CorpusEntry { name, derivation, expect: Expect::Valid };
    let invalid = |name, derivation| CorpusEntry { name, derivation, expect: Expect::Invalid };
    let e = |t: &str, x: &str| Justification::E { t: Term::constant(t), x: x.into() };
    vec![
        valid("distribution", distribution("<a0,a1>", "p", "q")),
        valid("distribution-quantified", distribution("<x,a1>", "forall y <y,a0> p", "q")),
        valid("quantifier-shift", quantifier_shift()),
        valid("quantifier-shift-variable", quantifier_shift_on_variable()),
        valid("drinker", drinker()),
        valid("k-premises", k_demo()),
        valid("n-dual", n_demo()),
        valid("e-instance", single("(forall x <x,a0> p -> <a1,a0> p)", e("a1", "x"))),
        valid("b-instance", single("(forall x <a0,a1> <x,a0> p -> <a0,a1> forall x <x,a0> p)", Justification::B { x: "x".into() })),
        valid("nec", nec_demo()),
        valid("monotonicity", monotonicity_demo()),
        valid("premise", premise_demo()),
        invalid("gen-term-in-antecedent", {
            let mut b = Build::new();
            let s = b.push(f("(<a0,a0> p -> <a0,a0> p)"), Justification::Pc);
            let g = f("(<a0,a0> p -> forall x <x,a0> p)");
            b.push(g.clone(), Justification::Gen { step: s, t: Term::constant("a0"), x: "x".into() });
            b.done(g, vec![])
        }),
        invalid("gen-term-in-body", {
            let mut b = Build::new();
            let s = b.push(f("(true -> (<a0,a0> p -> <a0,a0> p))"), Justification::Pc);
            let g = f("(true -> forall x (<x,a0> p -> <a0,a0> p))");
            b.push(g.clone(), Justification::Gen { step: s, t: Term::constant("a0"), x: "x".into() });
            b.done(g, vec![])
        }),
        invalid("b-bound-term", single("(forall x <x,a0> p -> <x,a0> forall x p)", Justification::B { x: "x".into() })),
        invalid(
            "e-capture",
            single("(forall x forall y <x,y> p -> forall y <y,y> p)", Justification::E { t: Term::var("y"), x: "x".into() }),
        ),
        invalid("not-a-tautology", single("(p -> q)", Justification::Pc)),
    ]
}

/// Removes step `k` (1-based). Later references move down by one; a
/// reference to `k` itself is left pointing at position `k`.
pub fn delete_step(d: &Derivation, k: usize) -> Derivation {
    let fix = |r: usize| if r > k { r - 1 } else { r };
    let steps = d
        .steps
        .iter()
        .enumerate()
        .filter(|(i, _)| i + 1 != k)
        .map(|(_, s)| {
            let by = match &s.by {
                Justification::Mp(i, j) => Justification::Mp(fix(*i), fix(*j)),
                Justification::Nec(i, ts) => Justification::Nec(fix(*i), ts.clone()),
                Justification::Gen { step, t, x } => Justification::Gen { step: fix(*step), t: t.clone(), x: x.clone() },
                other => other.clone(),
            };
            Step { formula: s.formula.clone(), by }
        })
        .collect();
    Derivation { steps, ..d.clone() }
}

fn replace(d: &Derivation, k: usize, step: Step) -> Derivation {
    let mut out = d.clone();
    out.steps[k - 1] = step;
    out
}

/// For every E, B and Gen step, a copy of `d` where that step is swapped
/// for one that matches its rule except for the side condition:
/// E captures its term, B quantifies a variable among its terms, and Gen
/// keeps its term inside the generalized formula. Gen steps on the
/// variable itself have no such variant and are skipped.
pub fn side_condition_mutants(d: &Derivation, agents: usize) -> Vec<(usize, Derivation)> {
    let mut out = Vec::new();
    for (i, s) in d.steps.iter().enumerate() {
        let k = i + 1;
        match (&s.by, &s.formula) {
            (Justification::E { x, .. }, Formula::Imp(ante, _)) => {
                let Formula::Forall(_, body) = &**ante else { continue };
                let names = s.formula.variable_names();
                let w = fresh_name("w", |n| names.contains(n) || n == x);
                let marked = Formula::forall(
                    w.clone(),
                    Formula::and((**body).clone(), Formula::strat(vec![Term::var(x.clone()); agents], Formula::Top)),
                );
                let captured = substitute_blind(&marked, x, &Term::var(w.clone()));
                let formula = Formula::imp(Formula::forall(x.clone(), marked), captured);
                out.push((k, replace(d, k, Step { formula, by: Justification::E { t: Term::var(w), x: x.clone() } })));
            }
            (Justification::B { x }, Formula::Imp(ante, cons)) => {
                let (Formula::Forall(_, inner), Formula::Strat(_, q)) = (&**ante, &**cons) else { continue };
                let Formula::Strat(ts, a) = &**inner else { continue };
                let mut ts = ts.clone();
                ts[0] = Term::var(x.clone());
                let formula = Formula::imp(
                    Formula::forall(x.clone(), Formula::strat(ts.clone(), (**a).clone())),
                    Formula::strat(ts, (**q).clone()),
                );
                out.push((k, replace(d, k, Step { formula, by: s.by.clone() })));
            }
            (Justification::Gen { t, x, .. }, Formula::Imp(phi, gen)) => {
                if matches!(t, Term::Var(v) if v == x) {
                    continue;
                }
                let Formula::Forall(_, psi) = &**gen else { continue };
                let Ok(inst) = substitute(psi, x, t) else { continue };
                let formula = Formula::imp((**phi).clone(), Formula::forall(x.clone(), inst));
                out.push((k, replace(d, k, Step { formula, by: s.by.clone() })));
            }
            _ => {}
        }
    }
    out
}
