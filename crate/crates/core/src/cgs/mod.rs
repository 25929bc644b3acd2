//! Finite concurrent game structures.
//!
//! The transition relation is stored as a total function from
//! `(state, decision)` to the successor state, where the decision set is
//! the full product `Ac^n`. Relational input is converted by
//! [`RelationalCgs::validate`], which reports seriality and functionality
//! violations with witnesses.

mod fixtures;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::syntax::{is_identifier, Signature, SignatureError};

pub use fixtures::{g1, g2, gstar_truncated, qbf_fig3};

/// Decisions above this count are refused; the table would not fit anyway.
pub const MAX_DECISIONS: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

/// One action per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decision(pub Vec<ActionId>);

impl Decision {
    /// Mixed-radix index with agent 1 as the most significant digit.
    pub fn index(&self, action_count: usize) -> usize {
        decision_index(self.0.iter().map(|a| a.0), action_count)
    }

    pub fn from_index(mut index: usize, agents: usize, action_count: usize) -> Self {
        let mut acts = vec![ActionId(0); agents];
        for slot in acts.iter_mut().rev() {
            *slot = ActionId(index % action_count);
            index /= action_count;
        }
        Decision(acts)
    }
}

pub fn decision_index(actions: impl IntoIterator<Item = usize>, action_count: usize) -> usize {
    actions.into_iter().fold(0, |acc, a| acc * action_count + a)
}

/// Read access to a (possibly partially specified) game structure.
///
/// The evaluators in this crate are written against this trait so that the
/// bounded search in [`crate::enumerate`] can run them on partial models,
/// where a lookup of an unassigned entry reports `Miss`.
pub trait GameView {
    type Miss;
    fn agents(&self) -> usize;
    fn action_count(&self) -> usize;
    fn state_count(&self) -> usize;
    fn successor(&self, state: usize, decision: usize) -> Result<usize, Self::Miss>;
    fn holds(&self, atom: usize, state: usize) -> Result<bool, Self::Miss>;
    fn action_index(&self, name: &str) -> Option<usize>;
    fn action_name(&self, action: usize) -> &str;
    fn atom_index(&self, name: &str) -> Option<usize>;

    fn decision_count(&self) -> usize {
        self.action_count().pow(self.agents() as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("a game structure needs at least one agent")]
    NoAgents,
    #[error("no actions declared")]
    NoActions,
    #[error("no states declared")]
    NoStates,
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("action `{0}` declared twice")]
    DuplicateAction(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("atom `{0}` has two valuation entries")]
    DuplicateAtom(String),
    #[error("`{0}` is used both as an action and as a state")]
    ActionStateOverlap(String),
    #[error("`{0}` is used both as an action and as an atom")]
    ActionAtomOverlap(String),
    #[error("{count} decisions exceed the supported maximum")]
    TooManyDecisions { count: u128 },
    #[error("transition {index} mentions unknown state `{state}`")]
    UnknownState { index: usize, state: String },
    #[error("transition {index} mentions unknown action `{action}`")]
    UnknownAction { index: usize, action: String },
    #[error("transition {index} has {found} actions, expected {expected}")]
    DecisionArity { index: usize, expected: usize, found: usize },
    #[error("seriality: no successor for state `{state}` under decision ({})", .decision.join(","))]
    Seriality { state: String, decision: Vec<String> },
    #[error("functionality: state `{state}` under decision ({}) has successors {}", .decision.join(","), .targets.join(", "))]
    Functionality { state: String, decision: Vec<String>, targets: Vec<String> },
    #[error("valuation of `{atom}` mentions unknown state `{state}`")]
    UnknownValuationState { atom: String, state: String },
}

/// A game structure in the relational form used by model files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalCgs {
    pub agents: usize,
    pub actions: Vec<String>,
    pub states: Vec<String>,
    pub transitions: Vec<(String, Vec<String>, String)>,
    /// Atom name and the states where it holds, in declaration order.
    pub valuation: Vec<(String, Vec<String>)>,
}

impl RelationalCgs {
    /// Checks every frame invariant and converts to the total-map form.
    /// All violations are collected rather than stopping at the first.
    pub fn validate(&self) -> Result<Cgs, Vec<Violation>> {
        let mut errs = Vec::new();
        if self.agents == 0 {
            errs.push(Violation::NoAgents);
        }
        if self.actions.is_empty() {
            errs.push(Violation::NoActions);
        }
        if self.states.is_empty() {
            errs.push(Violation::NoStates);
        }
        let mut action_ix = BTreeMap::new();
        for (i, a) in self.actions.iter().enumerate() {
            if !is_identifier(a) {
                errs.push(Violation::BadIdentifier(a.clone()));
            }
            if action_ix.insert(a.as_str(), i).is_some() {
                errs.push(Violation::DuplicateAction(a.clone()));
            }
        }
        let mut state_ix = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if !is_identifier(s) {
                errs.push(Violation::BadIdentifier(s.clone()));
            }
            if state_ix.insert(s.as_str(), i).is_some() {
                errs.push(Violation::DuplicateState(s.clone()));
            }
            if action_ix.contains_key(s.as_str()) {
                errs.push(Violation::ActionStateOverlap(s.clone()));
            }
        }
        let mut atoms = BTreeSet::new();
        for (p, _) in &self.valuation {
            if !is_identifier(p) {
                errs.push(Violation::BadIdentifier(p.clone()));
            }
            if !atoms.insert(p.as_str()) {
                errs.push(Violation::DuplicateAtom(p.clone()));
            }
            if action_ix.contains_key(p.as_str()) {
                errs.push(Violation::ActionAtomOverlap(p.clone()));
            }
        }
        let count = (self.actions.len() as u128).checked_pow(self.agents as u32);
        match count {
            Some(c) if c <= MAX_DECISIONS as u128 => {}
            other => {
                errs.push(Violation::TooManyDecisions { count: other.unwrap_or(u128::MAX) });
                return Err(errs);
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        let n_act = self.actions.len();
        let n_dec = n_act.pow(self.agents as u32);
        let mut targets: Vec<Vec<usize>> = vec![Vec::new(); self.states.len() * n_dec];
        for (index, (from, acts, to)) in self.transitions.iter().enumerate() {
            let src = state_ix.get(from.as_str());
            let dst = state_ix.get(to.as_str());
            for (name, found) in [(from, src), (to, dst)] {
                if found.is_none() {
                    errs.push(Violation::UnknownState { index, state: name.clone() });
                }
            }
            if acts.len() != self.agents {
                errs.push(Violation::DecisionArity { index, expected: self.agents, found: acts.len() });
                continue;
            }
            let mut ids = Vec::with_capacity(acts.len());
            for a in acts {
                match action_ix.get(a.as_str()) {
                    Some(&i) => ids.push(i),
                    None => errs.push(Violation::UnknownAction { index, action: a.clone() }),
                }
            }
            if let (Some(&s), Some(&t), true) = (src, dst, ids.len() == acts.len()) {
                let slot = &mut targets[s * n_dec + decision_index(ids, n_act)];
                if !slot.contains(&t) {
                    slot.push(t);
                }
            }
        }
        for (atom, holds_at) in &self.valuation {
            for s in holds_at {
                if !state_ix.contains_key(s.as_str()) {
                    errs.push(Violation::UnknownValuationState { atom: atom.clone(), state: s.clone() });
                }
            }
        }
        let decision_names = |d: usize| -> Vec<String> {
            Decision::from_index(d, self.agents, n_act)
                .0
                .iter()
                .map(|a| self.actions[a.0].clone())
                .collect()
        };
        let mut next = Vec::with_capacity(targets.len());
        for (slot, ts) in targets.iter().enumerate() {
            let (s, d) = (slot / n_dec, slot % n_dec);
            match ts.as_slice() {
                [t] => next.push(*t),
                [] => {
                    errs.push(Violation::Seriality { state: self.states[s].clone(), decision: decision_names(d) });
                    next.push(0);
                }
                many => {
                    errs.push(Violation::Functionality {
                        state: self.states[s].clone(),
                        decision: decision_names(d),
                        targets: many.iter().map(|&t| self.states[t].clone()).collect(),
                    });
                    next.push(many[0]);
                }
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        let n_states = self.states.len();
        let mut truth = vec![false; self.valuation.len() * n_states];
        for (p, (_, holds_at)) in self.valuation.iter().enumerate() {
            for s in holds_at {
                truth[p * n_states + state_ix[s.as_str()]] = true;
            }
        }
        Ok(Cgs {
            agents: self.agents,
            actions: self.actions.clone(),
            states: self.states.clone(),
            atoms: self.valuation.iter().map(|(p, _)| p.clone()).collect(),
            next,
            truth,
        })
    }
}

/// A validated finite game structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cgs {
    agents: usize,
    actions: Vec<String>,
    states: Vec<String>,
    atoms: Vec<String>,
    /// `next[s * |D| + d]`
    next: Vec<usize>,
    /// `truth[p * |S| + s]`
    truth: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown state `{0}`")]
    State(String),
    #[error("unknown action `{0}`")]
    Action(String),
    #[error("decision has {found} actions, expected {expected}")]
    Arity { expected: usize, found: usize },
}

impl Cgs {
    /// Builds a structure from a successor function over indices. The
    /// function is called once per `(state, decision)` pair.
    pub fn from_fn<S: Into<String>>(
        agents: usize,
        actions: Vec<String>,
        states: Vec<String>,
        valuation: Vec<(S, Vec<usize>)>,
        successor: impl Fn(usize, &[usize]) -> usize,
    ) -> Result<Cgs, Vec<Violation>> {
        let n_act = actions.len().max(1);
        let n_dec = n_act.checked_pow(agents as u32).unwrap_or(usize::MAX);
        let mut transitions = Vec::new();
        if n_dec <= MAX_DECISIONS {
            for s in 0..states.len() {
                for d in 0..n_dec {
                    let dec = Decision::from_index(d, agents, n_act);
                    let ids: Vec<usize> = dec.0.iter().map(|a| a.0).collect();
                    let t = successor(s, &ids);
                    let target = states.get(t).cloned().unwrap_or_else(|| alloc::format!("#{t}"));
                    let names = ids.iter().map(|&a| actions.get(a).cloned().unwrap_or_default()).collect();
                    transitions.push((states[s].clone(), names, target));
                }
            }
        }
        let valuation = valuation
            .into_iter()
            .map(|(p, at)| {
                let names = at
                    .into_iter()
                    .map(|s| states.get(s).cloned().unwrap_or_else(|| alloc::format!("#{s}")))
                    .collect();
                (p.into(), names)
            })
            .collect();
        RelationalCgs { agents, actions, states, transitions, valuation }.validate()
    }

    /// Assembles a structure from raw tables whose names are known to be
    /// valid and pairwise distinct (generated labels).
    pub(crate) fn from_tables(
        agents: usize,
        actions: Vec<String>,
        states: Vec<String>,
        atoms: Vec<String>,
        next: Vec<usize>,
        truth: Vec<bool>,
    ) -> Cgs {
        let n_dec = actions.len().pow(agents as u32);
        debug_assert_eq!(next.len(), states.len() * n_dec);
        debug_assert_eq!(truth.len(), atoms.len() * states.len());
        debug_assert!(next.iter().all(|&t| t < states.len()));
        Cgs { agents, actions, states, atoms, next, truth }
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn decision_count(&self) -> usize {
        self.actions.len().pow(self.agents as u32)
    }

    pub fn state(&self, name: &str) -> Result<StateId, LookupError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| LookupError::State(name.to_string()))
    }

    pub fn action(&self, name: &str) -> Result<ActionId, LookupError> {
        self.actions
            .iter()
            .position(|a| a == name)
            .map(ActionId)
            .ok_or_else(|| LookupError::Action(name.to_string()))
    }

    pub fn decision(&self, names: &[&str]) -> Result<Decision, LookupError> {
        if names.len() != self.agents {
            return Err(LookupError::Arity { expected: self.agents, found: names.len() });
        }
        names.iter().map(|a| self.action(a)).collect::<Result<_, _>>().map(Decision)
    }

    /// The unique `t` with `(s, d, t)` in the transition relation.
    pub fn successor(&self, s: StateId, d: &Decision) -> StateId {
        StateId(self.next[s.0 * self.decision_count() + d.index(self.actions.len())])
    }

    /// Convenience lookup by names.
    pub fn successor_by_name(&self, state: &str, decision: &[&str]) -> Result<&str, LookupError> {
        let s = self.state(state)?;
        let d = self.decision(decision)?;
        Ok(&self.states[self.successor(s, &d).0])
    }

    /// All `(decision, target)` edges leaving `s`, in decision order.
    pub fn edges_from(&self, s: StateId) -> impl Iterator<Item = (Decision, StateId)> + '_ {
        let n_dec = self.decision_count();
        (0..n_dec).map(move |d| {
            (Decision::from_index(d, self.agents, self.actions.len()), StateId(self.next[s.0 * n_dec + d]))
        })
    }

    pub fn atom_holds(&self, atom: &str, s: StateId) -> Option<bool> {
        let p = self.atoms.iter().position(|q| q == atom)?;
        Some(self.truth[p * self.states.len() + s.0])
    }

    /// Atoms true at `s`.
    pub fn prop(&self, s: StateId) -> Vec<&str> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(p, _)| self.truth[p * self.states.len() + s.0])
            .map(|(_, q)| q.as_str())
            .collect()
    }

    /// `n + |Ac| + |Ac|^n + |S| + |R| + sum over states of |Prop(s)|`.
    pub fn size(&self) -> usize {
        let relation = self.states.len() * self.decision_count();
        let props: usize = self.truth.iter().filter(|b| **b).count();
        self.agents + self.actions.len() + self.decision_count() + self.states.len() + relation + props
    }

    /// The signature this structure is constructed over. Fails when the
    /// structure interprets no atoms.
    pub fn signature(&self) -> Result<Signature, SignatureError> {
        Signature::new(self.agents, self.actions.clone(), self.atoms.clone())
    }

    /// Agent counts agree and the signature's constants are exactly the actions.
    pub fn constructed_over(&self, sig: &Signature) -> bool {
        let ours: BTreeSet<&str> = self.actions.iter().map(String::as_str).collect();
        let theirs: BTreeSet<&str> = sig.constants().iter().map(String::as_str).collect();
        self.agents == sig.agents() && ours == theirs
    }

    pub fn to_relational(&self) -> RelationalCgs {
        let transitions = (0..self.states.len())
            .flat_map(|s| {
                self.edges_from(StateId(s)).map(move |(d, t)| {
                    let names = d.0.iter().map(|a| self.actions[a.0].clone()).collect();
                    (self.states[s].clone(), names, self.states[t.0].clone())
                })
            })
            .collect();
        let valuation = self
            .atoms
            .iter()
            .enumerate()
            .map(|(p, name)| {
                let at = (0..self.states.len())
                    .filter(|&s| self.truth[p * self.states.len() + s])
                    .map(|s| self.states[s].clone())
                    .collect();
                (name.clone(), at)
            })
            .collect();
        RelationalCgs {
            agents: self.agents,
            actions: self.actions.clone(),
            states: self.states.clone(),
            transitions,
            valuation,
        }
    }
}

impl GameView for Cgs {
    type Miss = core::convert::Infallible;

    fn agents(&self) -> usize {
        self.agents
    }

    fn action_count(&self) -> usize {
        self.actions.len()
    }

    fn state_count(&self) -> usize {
        self.states.len()
    }

    fn successor(&self, state: usize, decision: usize) -> Result<usize, Self::Miss> {
        Ok(self.next[state * self.decision_count() + decision])
    }

    fn holds(&self, atom: usize, state: usize) -> Result<bool, Self::Miss> {
        Ok(self.truth[atom * self.states.len() + state])
    }

    fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == name)
    }

    fn action_name(&self, action: usize) -> &str {
        &self.actions[action]
    }

    fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|p| p == name)
    }

    fn decision_count(&self) -> usize {
        self.actions.len().pow(self.agents as u32)
    }
}

impl fmt::Display for Cgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "agents {}; actions {}; states {}", self.agents, self.actions.join(","), self.states.join(","))?;
        for s in 0..self.states.len() {
            write!(f, "  {} [{}]:", self.states[s], self.prop(StateId(s)).join(","))?;
            for (d, t) in self.edges_from(StateId(s)) {
                let names: Vec<&str> = d.0.iter().map(|a| self.actions[a.0].as_str()).collect();
                write!(f, " {}->{}", names.join(""), self.states[t.0])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
