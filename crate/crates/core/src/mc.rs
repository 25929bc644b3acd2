//! Model checking over finite game structures.
//!
//! [`mc`] compiles the closure of a formula into an index-based tree and
//! evaluates it with an environment of action choices, moving along the
//! unique successor for strategic modalities. [`mc_dual`] is a separate
//! evaluator that works by literal constant substitution on the formula and
//! reads modalities through the universal clause (every successor under the
//! decision satisfies the body). The two must always agree.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::cgs::{decision_index, Cgs, GameView, StateId};
use crate::syntax::{closure, core_normalize, substitute, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("atom `{0}` is not interpreted by the model")]
    UnknownAtom(String),
    #[error("constant `{0}` is not an action of the model")]
    UnknownConstant(String),
    #[error("modality has {found} terms but the model has {expected} agents")]
    Arity { expected: usize, found: usize },
    #[error("variable `{0}` clashes with an action or atom name of the model")]
    VariableClash(String),
}

/// Counters collected by [`mc_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct McStats {
    /// Evaluation calls, one per visited (state, subformula instance).
    pub calls: u64,
    /// Deepest nesting of evaluation calls; the root call has depth 1.
    pub max_depth: usize,
    /// Instantiations made by innermost quantifiers (those whose body holds
    /// no further quantifier). A prefix of `q` quantifiers that is fully
    /// explored over `|Ac|` actions performs `|Ac|^q` of them.
    pub quantifier_expansions: u64,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Const(usize),
    /// Position in the environment stack.
    Var(usize),
}

#[derive(Debug, Clone)]
enum Node {
    Top,
    Bottom,
    Atom(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Strat(Vec<Slot>, Box<Node>),
    /// `universal`, `innermost`, body
    Quant(bool, bool, Box<Node>),
}

/// A sentence resolved against the names of a particular model.
#[derive(Debug, Clone)]
pub struct Compiled {
    root: Node,
}

impl Compiled {
    /// Compiles the universal closure of `f` against `g`'s names.
    pub fn new<G: GameView>(g: &G, f: &Formula) -> Result<Self, McError> {
        let closed = closure(f);
        let mut scope = Vec::new();
        Ok(Compiled { root: compile(g, &closed, &mut scope)? })
    }

    pub fn eval<G: GameView>(&self, g: &G, state: usize) -> Result<bool, G::Miss> {
        let mut env = Vec::new();
        eval(g, &self.root, state, &mut env, &mut None, 1)
    }

    pub fn eval_with_stats<G: GameView>(&self, g: &G, state: usize, stats: &mut McStats) -> Result<bool, G::Miss> {
        let mut env = Vec::new();
        let mut slot = Some(stats);
        eval(g, &self.root, state, &mut env, &mut slot, 1)
    }
}

fn has_quantifier(f: &Formula) -> bool {
    f.quantifier_count() > 0
}

fn compile<G: GameView>(g: &G, f: &Formula, scope: &mut Vec<String>) -> Result<Node, McError> {
    let bin = |a: &Formula, b: &Formula, scope: &mut Vec<String>| -> Result<(Box<Node>, Box<Node>), McError> {
        Ok((Box::new(compile(g, a, scope)?), Box::new(compile(g, b, scope)?)))
    };
    Ok(match f {
        Formula::Top => Node::Top,
        Formula::Bottom => Node::Bottom,
        Formula::Atom(p) => Node::Atom(g.atom_index(p).ok_or_else(|| McError::UnknownAtom(p.clone()))?),
        Formula::Not(a) => Node::Not(Box::new(compile(g, a, scope)?)),
        Formula::And(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::Or(a, b)
        }
        Formula::Imp(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::Imp(a, b)
        }
        Formula::Iff(a, b) => {
            let (a, b) = bin(a, b, scope)?;
            Node::Iff(a, b)
        }
        Formula::Strat(ts, body) => {
            if ts.len() != g.agents() {
                return Err(McError::Arity { expected: g.agents(), found: ts.len() });
            }
            let slots = ts
                .iter()
                .map(|t| match t {
                    Term::Const(c) => g
                        .action_index(c)
                        .map(Slot::Const)
                        .ok_or_else(|| McError::UnknownConstant(c.clone())),
                    Term::Var(x) => {
                        let level = scope.iter().rposition(|y| y == x).expect("closed formula");
                        Ok(Slot::Var(level))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Node::Strat(slots, Box::new(compile(g, body, scope)?))
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            if g.action_index(x).is_some() || g.atom_index(x).is_some() {
                return Err(McError::VariableClash(x.clone()));
            }
            scope.push(x.clone());
            let inner = compile(g, body, scope);
            scope.pop();
            Node::Quant(matches!(f, Formula::Forall(..)), !has_quantifier(body), Box::new(inner?))
        }
    })
}

fn eval<G: GameView>(
    g: &G,
    node: &Node,
    s: usize,
    env: &mut Vec<usize>,
    stats: &mut Option<&mut McStats>,
    depth: usize,
) -> Result<bool, G::Miss> {
    if let Some(st) = stats.as_deref_mut() {
        st.calls += 1;
        st.max_depth = st.max_depth.max(depth);
    }
    let d = depth + 1;
    Ok(match node {
        Node::Top => true,
        Node::Bottom => false,
        Node::Atom(p) => g.holds(*p, s)?,
        Node::Not(a) => !eval(g, a, s, env, stats, d)?,
        Node::And(a, b) => eval(g, a, s, env, stats, d)? && eval(g, b, s, env, stats, d)?,
        Node::Or(a, b) => eval(g, a, s, env, stats, d)? || eval(g, b, s, env, stats, d)?,
        Node::Imp(a, b) => !eval(g, a, s, env, stats, d)? || eval(g, b, s, env, stats, d)?,
        Node::Iff(a, b) => eval(g, a, s, env, stats, d)? == eval(g, b, s, env, stats, d)?,
        Node::Strat(slots, body) => {
            let acts = slots.iter().map(|slot| match slot {
                Slot::Const(a) => *a,
                Slot::Var(level) => env[*level],
            });
            let dec = decision_index(acts, g.action_count());
            let t = g.successor(s, dec)?;
            eval(g, body, t, env, stats, d)?
        }
        Node::Quant(universal, innermost, body) => {
            let mut result = *universal;
            for a in 0..g.action_count() {
                if *innermost {
                    if let Some(st) = stats.as_deref_mut() {
                        st.quantifier_expansions += 1;
                    }
                }
                env.push(a);
                let v = eval(g, body, s, env, stats, d);
                env.pop();
                if v? != *universal {
                    result = !*universal;
                    break;
                }
            }
            result
        }
    })
}

pub(crate) fn unwrap_total<T>(r: Result<T, core::convert::Infallible>) -> T {
    match r {
        Ok(v) => v,
        Err(never) => match never {},
    }
}

/// Truth of `f` at the named state; open formulas are evaluated through
/// their universal closure.
pub fn mc(g: &Cgs, state: &str, f: &Formula) -> Result<bool, McError> {
    let s = g.state(state).map_err(|_| McError::UnknownState(state.to_string()))?;
    mc_at(g, s, f)
}

pub fn mc_at(g: &Cgs, s: StateId, f: &Formula) -> Result<bool, McError> {
    if s.0 >= g.states().len() {
        return Err(McError::UnknownState(alloc::format!("#{}", s.0)));
    }
    Ok(unwrap_total(Compiled::new(g, f)?.eval(g, s.0)))
}

pub fn mc_with_stats(g: &Cgs, state: &str, f: &Formula) -> Result<(bool, McStats), McError> {
    let s = g.state(state).map_err(|_| McError::UnknownState(state.to_string()))?;
    let compiled = Compiled::new(g, f)?;
    let mut stats = McStats::default();
    let v = unwrap_total(compiled.eval_with_stats(g, s.0, &mut stats));
    Ok((v, stats))
}

/// `f` holds at every state of `g`.
pub fn valid_in(g: &Cgs, f: &Formula) -> Result<bool, McError> {
    let compiled = Compiled::new(g, f)?;
    Ok((0..g.states().len()).all(|s| unwrap_total(compiled.eval(g, s))))
}

/// Every member of `fs` holds at the named state.
pub fn satisfies_set(g: &Cgs, state: &str, fs: &[Formula]) -> Result<bool, McError> {
    let s = g.state(state).map_err(|_| McError::UnknownState(state.to_string()))?;
    for f in fs {
        if !mc_at(g, s, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks names and arities of `f` against `g` without evaluating.
pub fn check_against<G: GameView>(g: &G, f: &Formula) -> Result<(), McError> {
    Compiled::new(g, f).map(|_| ())
}

/// Cross-check evaluator: substitution-based, on core forms, with the
/// universal reading of strategic modalities.
pub fn mc_dual(g: &Cgs, state: &str, f: &Formula) -> Result<bool, McError> {
    let s = g.state(state).map_err(|_| McError::UnknownState(state.to_string()))?;
    check_against(g, f)?;
    Ok(unwrap_total(dual_eval(g, s.0, &core_normalize(&closure(f)))))
}

/// [`mc_dual`] over any [`GameView`]; `f` must be a sentence whose names
/// resolve in `g` (see [`check_against`]).
pub fn dual_eval<G: GameView>(g: &G, s: usize, f: &Formula) -> Result<bool, G::Miss> {
    Ok(match f {
        Formula::Top => true,
        Formula::Atom(p) => g.holds(g.atom_index(p).expect("checked atom"), s)?,
        Formula::Not(a) => !dual_eval(g, s, a)?,
        Formula::And(a, b) => dual_eval(g, s, a)? && dual_eval(g, s, b)?,
        Formula::Strat(ts, body) => {
            let acts = ts.iter().map(|t| match t {
                Term::Const(c) => g.action_index(c).expect("checked constant"),
                Term::Var(x) => panic!("free variable `{x}` in a sentence"),
            });
            let dec = decision_index(acts, g.action_count());
            let mut all = true;
            for t in 0..g.state_count() {
                if g.successor(s, dec)? == t && !dual_eval(g, t, body)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Formula::Forall(x, body) => {
            let mut all = true;
            for a in 0..g.action_count() {
                let name = g.action_name(a).to_string();
                let inst = substitute(body, x, &Term::Const(name)).expect("constants are never captured");
                if !dual_eval(g, s, &inst)? {
                    all = false;
                    break;
                }
            }
            all
        }
        other => dual_eval(g, s, &core_normalize(other))?,
    })
}

#[cfg(test)]
mod tests;
