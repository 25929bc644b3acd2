//! Hilbert-style derivations: a small checking kernel, a line-oriented
//! text format, and a corpus of derivations.
//!
//! Formulas are compared after eliminating the abbreviations (`|`, `->`,
//! `<->`, `exists`, `false`), so a step may be written with any of them.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::syntax::{core_normalize, is_free_in, substitute, Formula, Term};

mod corpus;
mod pc;
mod text;

pub use corpus::{
    corpus, corpus_signature, delete_step, monotonicity, side_condition_mutants, CorpusEntry, Expect, CORPUS_SIG,
};
pub use pc::{check_pc, skeleton_letters, PcError, PC_LETTER_CAP};
pub use text::{header_sig, parse_derivation, DerivationParseError};

/// Why a step is in the derivation. Step references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    Pc,
    K,
    N,
    E { t: Term, x: String },
    B { x: String },
    Mp(usize, usize),
    Nec(usize, Vec<Term>),
    Gen { step: usize, t: Term, x: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub by: Justification,
}

/// A derivation, optionally of a stated goal from premises.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    /// Path given on the `sig` line, resolved by the caller.
    pub sig: Option<String>,
    pub premises: Vec<Formula>,
    pub goal: Option<Formula>,
    pub steps: Vec<Step>,
}

/// How strictly generalization is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GenCondition {
    /// `t` occurs neither in the antecedent nor in the generalized formula.
    #[default]
    Strict,
    /// Only the antecedent is checked; admits unsound steps.
    Literal,
    /// No freshness check at all.
    Off,
}

/// Checker configuration. The default is the sound kernel; the other
/// settings exist to study what each side condition rules out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub gen: GenCondition,
    /// `x` differs from every modality term in B.
    pub b_distinct: bool,
    /// Substitutions in E and Gen must not capture.
    pub capture: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { gen: GenCondition::Strict, b_distinct: true, capture: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Reason {
    #[error("step {0} is not an earlier step")]
    BadReference(usize),
    #[error("not a propositional tautology")]
    NotTautology,
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error("not an instance of axiom {0}")]
    NotInstance(&'static str),
    #[error("side condition of {rule} violated: {detail}")]
    SideCondition { rule: &'static str, detail: String },
    #[error("substituting `{term}` for `{var}` would capture it")]
    Capture { var: String, term: String },
    #[error("{0} does not produce this formula")]
    Mismatch(&'static str),
    #[error("the derivation is empty")]
    Empty,
    #[error("the last step is neither the goal nor a conjunction of premises implying it")]
    GoalNotReached,
}

/// A failed check. `step` is 1-based; 0 refers to the conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct ProofError {
    pub step: usize,
    pub reason: Reason,
}

/// `a -> b` in core form.
fn as_imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Not(inner) = f {
        if let Formula::And(a, nb) = &**inner {
            if let Formula::Not(b) = &**nb {
                return Some((a, b));
            }
        }
    }
    None
}

/// `a <-> b` in core form.
fn as_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::And(l, r) = f {
        let (a, b) = as_imp(l)?;
        let (b2, a2) = as_imp(r)?;
        if a == a2 && b == b2 {
            return Some((a, b));
        }
    }
    None
}

fn core_imp(a: Formula, b: Formula) -> Formula {
    Formula::not(Formula::and(a, Formula::not(b)))
}

/// `t` occurs in `f`: anywhere for a constant, free for a variable.
fn occurs(t: &Term, f: &Formula) -> bool {
    match t {
        Term::Const(c) => f.constants().iter().any(|d| d == c),
        Term::Var(v) => is_free_in(v, f),
    }
}

/// Replaces free `x` by `t`, capturing if it must.
fn substitute_blind(f: &Formula, x: &str, t: &Term) -> Formula {
    let go = |g: &Formula| substitute_blind(g, x, t);
    match f {
        Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::And(a, b) => Formula::and(go(a), go(b)),
        Formula::Or(a, b) => Formula::or(go(a), go(b)),
        Formula::Imp(a, b) => Formula::imp(go(a), go(b)),
        Formula::Iff(a, b) => Formula::iff(go(a), go(b)),
        Formula::Strat(ts, body) => {
            let ts = ts.iter().map(|u| if matches!(u, Term::Var(v) if v == x) { t.clone() } else { u.clone() }).collect();
            Formula::strat(ts, go(body))
        }
        Formula::Forall(y, _) | Formula::Exists(y, _) if y == x => f.clone(),
        Formula::Forall(y, body) => Formula::forall(y.clone(), go(body)),
        Formula::Exists(y, body) => Formula::exists(y.clone(), go(body)),
    }
}

fn subst(f: &Formula, x: &str, t: &Term, opts: &CheckOptions) -> Result<Formula, Reason> {
    if opts.capture {
        substitute(f, x, t).map_err(|e| Reason::Capture { var: e.var, term: e.term })
    } else {
        Ok(substitute_blind(f, x, t))
    }
}

/// Whether `f` is an instance of the axiom named by `j`; rules and PC
/// answer false. The formula may use abbreviations.
pub fn match_axiom(f: &Formula, j: &Justification) -> bool {
    axiom(&core_normalize(f), j, &CheckOptions::default()).is_ok()
}

fn axiom(f: &Formula, j: &Justification, opts: &CheckOptions) -> Result<(), Reason> {
    match j {
        Justification::K => {
            let ok = as_iff(f).is_some_and(|(l, r)| match (l, r) {
                (Formula::And(x, y), Formula::Strat(ts, body)) => match (&**x, &**y, &**body) {
                    (Formula::Strat(t1, a), Formula::Strat(t2, b), Formula::And(a2, b2)) => {
                        t1 == ts && t2 == ts && a == a2 && b == b2
                    }
                    _ => false,
                },
                _ => false,
            });
            ok.then_some(()).ok_or(Reason::NotInstance("K"))
        }
        Justification::N => {
            let ok = as_iff(f).is_some_and(|(l, r)| match (l, r) {
                (Formula::Not(x), Formula::Strat(ts, body)) => match (&**x, &**body) {
                    (Formula::Strat(t1, a), Formula::Not(a2)) => t1 == ts && a == a2,
                    _ => false,
                },
                _ => false,
            });
            ok.then_some(()).ok_or(Reason::NotInstance("N"))
        }
        Justification::E { t, x } => {
            let (ante, cons) = as_imp(f).ok_or(Reason::NotInstance("E"))?;
            let Formula::Forall(y, body) = ante else { return Err(Reason::NotInstance("E")) };
            if y != x {
                return Err(Reason::NotInstance("E"));
            }
            if subst(body, x, t, opts)? != *cons {
                return Err(Reason::NotInstance("E"));
            }
            Ok(())
        }
        Justification::B { x } => {
            let (ante, cons) = as_imp(f).ok_or(Reason::NotInstance("B"))?;
            let shape = match (ante, cons) {
                (Formula::Forall(y, inner), Formula::Strat(ts, q)) => match (&**inner, &**q) {
                    (Formula::Strat(ts2, a), Formula::Forall(y2, a2)) => {
                        (y == x && y2 == x && ts == ts2 && a == a2).then_some(ts)
                    }
                    _ => None,
                },
                _ => None,
            };
            let ts = shape.ok_or(Reason::NotInstance("B"))?;
            if opts.b_distinct && ts.iter().any(|t| matches!(t, Term::Var(v) if v == x)) {
                return Err(Reason::SideCondition { rule: "B", detail: alloc::format!("`{x}` is one of the terms") });
            }
            Ok(())
        }
        _ => Err(Reason::NotInstance("an axiom")),
    }
}

fn earlier(r: usize, at: usize) -> Result<usize, Reason> {
    if r >= 1 && r < at {
        Ok(r - 1)
    } else {
        Err(Reason::BadReference(r))
    }
}

/// Checks step `at` (1-based) against the core forms of all steps.
fn check_core(core: &[Formula], steps: &[Step], at: usize, opts: &CheckOptions) -> Result<(), Reason> {
    let f = &core[at - 1];
    match &steps[at - 1].by {
        Justification::Pc => match check_pc(f)? {
            true => Ok(()),
            false => Err(Reason::NotTautology),
        },
        j @ (Justification::K | Justification::N | Justification::E { .. } | Justification::B { .. }) => {
            axiom(f, j, opts)
        }
        Justification::Mp(i, j) => {
            let (i, j) = (earlier(*i, at)?, earlier(*j, at)?);
            if core[j] == core_imp(core[i].clone(), f.clone()) {
                Ok(())
            } else {
                Err(Reason::Mismatch("modus ponens"))
            }
        }
        Justification::Nec(i, ts) => {
            let i = earlier(*i, at)?;
            if *f == Formula::strat(ts.clone(), core[i].clone()) {
                Ok(())
            } else {
                Err(Reason::Mismatch("necessitation"))
            }
        }
        Justification::Gen { step, t, x } => {
            let i = earlier(*step, at)?;
            let (phi, gen) = as_imp(f).ok_or(Reason::Mismatch("generalization"))?;
            let Formula::Forall(y, psi) = gen else { return Err(Reason::Mismatch("generalization")) };
            if y != x {
                return Err(Reason::Mismatch("generalization"));
            }
            let (phi0, inst) = as_imp(&core[i]).ok_or(Reason::Mismatch("generalization"))?;
            if phi0 != phi || *inst != subst(psi, x, t, opts)? {
                return Err(Reason::Mismatch("generalization"));
            }
            let side = |detail: &str| Reason::SideCondition { rule: "Gen", detail: detail.into() };
            match opts.gen {
                GenCondition::Off => {}
                GenCondition::Literal if occurs(t, phi) => return Err(side("the term occurs in the antecedent")),
                GenCondition::Literal => {}
                GenCondition::Strict if occurs(t, phi) => return Err(side("the term occurs in the antecedent")),
                GenCondition::Strict if occurs(t, gen) => return Err(side("the term occurs in the generalized formula")),
                GenCondition::Strict => {}
            }
            Ok(())
        }
    }
}

/// Checks step `at` (1-based) of `d` with the default options.
pub fn check_step(d: &Derivation, at: usize) -> Result<(), ProofError> {
    let core: Vec<Formula> = d.steps[..at].iter().map(|s| core_normalize(&s.formula)).collect();
    check_core(&core, &d.steps, at, &CheckOptions::default()).map_err(|reason| ProofError { step: at, reason })
}

/// Checks every step, then, if `d` states a goal, that the last step
/// reaches it from the premises.
pub fn check_derivation(d: &Derivation) -> Result<(), ProofError> {
    check_with(d, &CheckOptions::default())
}

pub fn check_with(d: &Derivation, opts: &CheckOptions) -> Result<(), ProofError> {
    let core: Vec<Formula> = d.steps.iter().map(|s| core_normalize(&s.formula)).collect();
    for at in 1..=d.steps.len() {
        check_core(&core, &d.steps, at, opts).map_err(|reason| ProofError { step: at, reason })?;
    }
    if let Some(goal) = &d.goal {
        conclusion(&d.premises, core.last(), goal).map_err(|reason| ProofError { step: 0, reason })?;
    }
    Ok(())
}

/// The last step is `goal` itself or `Y -> goal` with `Y` a conjunction
/// of premises, nested and ordered in any way.
fn conclusion(premises: &[Formula], last: Option<&Formula>, goal: &Formula) -> Result<(), Reason> {
    let last = last.ok_or(Reason::Empty)?;
    let goal = core_normalize(goal);
    if *last == goal {
        return Ok(());
    }
    let premises: Vec<Formula> = premises.iter().map(core_normalize).collect();
    fn covered(f: &Formula, premises: &[Formula]) -> bool {
        premises.contains(f) || matches!(f, Formula::And(a, b) if covered(a, premises) && covered(b, premises))
    }
    match as_imp(last) {
        Some((ys, g)) if *g == goal && covered(ys, &premises) => Ok(()),
        _ => Err(Reason::GoalNotReached),
    }
}

/// `d` is a valid derivation of `Y -> goal` for some finite `Y` drawn
/// from `premises`.
pub fn derives_from(premises: &[Formula], d: &Derivation, goal: &Formula) -> Result<(), ProofError> {
    let d = Derivation { premises: premises.to_vec(), goal: Some(goal.clone()), ..d.clone() };
    check_derivation(&d)
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Pc => f.write_str("PC"),
            Justification::K => f.write_str("K"),
            Justification::N => f.write_str("N"),
            Justification::E { t, x } => write!(f, "E t={t} x={x}"),
            Justification::B { x } => write!(f, "B x={x}"),
            Justification::Mp(i, j) => write!(f, "MP {i} {j}"),
            Justification::Nec(i, ts) => {
                write!(f, "Nec {i} <")?;
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(">")
            }
            Justification::Gen { step, t, x } => write!(f, "Gen {step} t={t} x={x}"),
        }
    }
}

/// The text format read by [`parse_derivation`].
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.sig {
            writeln!(f, "sig {s}")?;
        }
        for p in &self.premises {
            writeln!(f, "premise {p}")?;
        }
        if let Some(g) = &self.goal {
            writeln!(f, "goal {g}")?;
        }
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "{}. {} ; {}", i + 1, s.formula, s.by)?;
        }
        Ok(())
    }
}
