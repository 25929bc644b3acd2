//! Exhaustive search over small game structures.
//!
//! [`enum_cgs`] yields every structure within [`Bounds`] one by one. The
//! searches ([`find_countermodel`], [`bounded_valid`], ...) never build whole
//! candidates: they run the evaluator on a [`Partial`] structure and branch
//! only on the transition or valuation entries it actually reads. A leaf of
//! that tree stands for every completion of the entries left unread, so the
//! covered counts add up to the closed-form size of each cell, which the
//! [`Report`] records for checking.
//!
//! Structures use generated labels `s0, s1, ..` and `a0, a1, ..`. The atom
//! set defaults to the atoms of the query: truth of a formula depends only
//! on the atoms it mentions, so nothing is lost.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cgs::{Cgs, GameView, StateId};
use crate::mc::{Compiled, McError};
use crate::syntax::Formula;

/// Default refusal threshold for [`enum_cgs`].
pub const DEFAULT_GUARD: u128 = 10_000_000;
/// Default cap on search-tree nodes for the lazy searches.
pub const DEFAULT_NODE_BUDGET: u64 = 500_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("agent, action and state bounds must be positive")]
    ZeroBound,
    #[error("{count} candidate structures exceed the guard of {guard}")]
    TooMany { count: u128, guard: u128 },
    #[error("cell with {states} states and {actions} actions is too large to count")]
    Overflow { states: usize, actions: usize },
    #[error("search gave up after {0} nodes")]
    Budget(u64),
    #[error("atom `{0}` collides with a generated label")]
    LabelClash(String),
    #[error(transparent)]
    Mc(#[from] McError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub agents: usize,
    pub max_actions: usize,
    pub max_states: usize,
    /// `None` takes the atoms of the query.
    pub atoms: Option<Vec<String>>,
    /// Refusal threshold for [`enum_cgs`]; `None` disables it.
    pub guard: Option<u128>,
    pub node_budget: u64,
}

impl Bounds {
    pub fn new(agents: usize, max_actions: usize, max_states: usize) -> Self {
        Bounds {
            agents,
            max_actions,
            max_states,
            atoms: None,
            guard: Some(DEFAULT_GUARD),
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn with_atoms<S: Into<String>>(mut self, atoms: impl IntoIterator<Item = S>) -> Self {
        self.atoms = Some(atoms.into_iter().map(Into::into).collect());
        self
    }

    /// Lifts the candidate guard of [`enum_cgs`].
    pub fn unguarded(mut self) -> Self {
        self.guard = None;
        self
    }

    fn check(&self) -> Result<(), EnumError> {
        if self.agents == 0 || self.max_actions == 0 || self.max_states == 0 {
            return Err(EnumError::ZeroBound);
        }
        Ok(())
    }

    fn atoms_for(&self, queries: &[&Formula]) -> Vec<String> {
        match &self.atoms {
            Some(a) => a.clone(),
            None => {
                let mut out: Vec<String> = Vec::new();
                for f in queries {
                    for p in f.atoms() {
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
                out
            }
        }
    }

    /// Cells in search order: increasing state count, then action count.
    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.max_states).flat_map(move |s| (1..=self.max_actions).map(move |a| (s, a)))
    }
}

pub fn state_label(i: usize) -> String {
    alloc::format!("s{i}")
}

pub fn action_label(i: usize) -> String {
    alloc::format!("a{i}")
}

/// `|S|^(|S|·|Ac|^n) · 2^(|S|·|atoms|)`, or `None` on overflow.
pub fn cell_count(agents: usize, actions: usize, states: usize, atoms: usize) -> Option<u128> {
    let decisions = u32::try_from(actions).ok()?.checked_pow(u32::try_from(agents).ok()?)?;
    let entries = u32::try_from(states).ok()?.checked_mul(decisions)?;
    let trans = (states as u128).checked_pow(entries)?;
    let vals = 2u128.checked_pow(u32::try_from(states.checked_mul(atoms)?).ok()?)?;
    trans.checked_mul(vals)
}

fn check_labels(atoms: &[String], b: &Bounds) -> Result<(), EnumError> {
    for p in atoms {
        let clash = (0..b.max_actions).any(|i| *p == action_label(i)) || (0..b.max_states).any(|i| *p == state_label(i));
        if clash {
            return Err(EnumError::LabelClash(p.clone()));
        }
    }
    Ok(())
}

/// Every structure within `b`, cell by cell, transition table then
/// valuation in lexicographic order.
pub fn enum_cgs(b: &Bounds) -> Result<CgsIter, EnumError> {
    b.check()?;
    let atoms = b.atoms.clone().unwrap_or_default();
    check_labels(&atoms, b)?;
    let mut total: u128 = 0;
    for (s, a) in b.cells() {
        let c = cell_count(b.agents, a, s, atoms.len()).ok_or(EnumError::Overflow { states: s, actions: a })?;
        total = total.checked_add(c).ok_or(EnumError::Overflow { states: s, actions: a })?;
    }
    if let Some(guard) = b.guard {
        if total > guard {
            return Err(EnumError::TooMany { count: total, guard });
        }
    }
    let mut it = CgsIter {
        agents: b.agents,
        max_actions: b.max_actions,
        max_states: b.max_states,
        atoms,
        states: 1,
        actions: 1,
        next: Vec::new(),
        truth: Vec::new(),
        fresh: true,
        done: false,
    };
    it.reset_cell();
    Ok(it)
}

#[derive(Debug, Clone)]
pub struct CgsIter {
    agents: usize,
    max_actions: usize,
    max_states: usize,
    atoms: Vec<String>,
    states: usize,
    actions: usize,
    next: Vec<usize>,
    truth: Vec<bool>,
    fresh: bool,
    done: bool,
}

impl CgsIter {
    fn reset_cell(&mut self) {
        let decisions = self.actions.pow(self.agents as u32);
        self.next = vec![0; self.states * decisions];
        self.truth = vec![false; self.states * self.atoms.len()];
        self.fresh = true;
    }

    /// Odometer step; `false` once the cell is exhausted.
    fn advance(&mut self) -> bool {
        for v in self.truth.iter_mut().rev() {
            if !*v {
                *v = true;
                return true;
            }
            *v = false;
        }
        for t in self.next.iter_mut().rev() {
            if *t + 1 < self.states {
                *t += 1;
                return true;
            }
            *t = 0;
        }
        false
    }
}

impl Iterator for CgsIter {
    type Item = Cgs;

    fn next(&mut self) -> Option<Cgs> {
        if self.done {
            return None;
        }
        if !self.fresh && !self.advance() {
            if self.actions < self.max_actions {
                self.actions += 1;
            } else if self.states < self.max_states {
                self.states += 1;
                self.actions = 1;
            } else {
                self.done = true;
                return None;
            }
            self.reset_cell();
        }
        self.fresh = false;
        Some(Cgs::from_tables(
            self.agents,
            (0..self.actions).map(action_label).collect(),
            (0..self.states).map(state_label).collect(),
            self.atoms.clone(),
            self.next.clone(),
            self.truth.clone(),
        ))
    }
}

/// An entry of a [`Partial`] structure that has not been fixed yet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    /// Index `s * |D| + d` of the transition table.
    Next(usize),
    /// Index `p * |S| + s` of the valuation table.
    Truth(usize),
}

const UNSET: usize = usize::MAX;

/// A structure of fixed shape whose tables may have holes. Reading a hole
/// through [`GameView`] fails with its [`Key`].
#[derive(Debug, Clone)]
pub struct Partial {
    agents: usize,
    actions: Vec<String>,
    states: usize,
    atoms: Vec<String>,
    decisions: usize,
    next: Vec<usize>,
    truth: Vec<Option<bool>>,
    open_next: u32,
    open_truth: u32,
}

impl Partial {
    pub fn new(agents: usize, actions: usize, states: usize, atoms: Vec<String>) -> Self {
        let decisions = actions.pow(agents as u32);
        let open_truth = states * atoms.len();
        Partial {
            agents,
            actions: (0..actions).map(action_label).collect(),
            states,
            decisions,
            next: vec![UNSET; states * decisions],
            truth: vec![None; open_truth],
            open_next: (states * decisions) as u32,
            open_truth: open_truth as u32,
            atoms,
        }
    }

    fn domain(&self, k: Key) -> usize {
        match k {
            Key::Next(_) => self.states,
            Key::Truth(_) => 2,
        }
    }

    fn set(&mut self, k: Key, v: usize) {
        match k {
            Key::Next(i) => {
                if self.next[i] == UNSET {
                    self.open_next -= 1;
                }
                self.next[i] = v;
            }
            Key::Truth(i) => {
                if self.truth[i].is_none() {
                    self.open_truth -= 1;
                }
                self.truth[i] = Some(v == 1);
            }
        }
    }

    fn unset(&mut self, k: Key) {
        match k {
            Key::Next(i) => {
                if self.next[i] != UNSET {
                    self.open_next += 1;
                }
                self.next[i] = UNSET;
            }
            Key::Truth(i) => {
                if self.truth[i].is_some() {
                    self.open_truth += 1;
                }
                self.truth[i] = None;
            }
        }
    }

    /// Number of total structures extending this one.
    fn completions(&self) -> u128 {
        (self.states as u128).pow(self.open_next) << self.open_truth
    }

    /// Fills every hole with its least value.
    fn complete(&self) -> Cgs {
        Cgs::from_tables(
            self.agents,
            self.actions.clone(),
            (0..self.states).map(state_label).collect(),
            self.atoms.clone(),
            self.next.iter().map(|&t| if t == UNSET { 0 } else { t }).collect(),
            self.truth.iter().map(|v| v.unwrap_or(false)).collect(),
        )
    }
}

impl GameView for Partial {
    type Miss = Key;

    fn agents(&self) -> usize {
        self.agents
    }

    fn action_count(&self) -> usize {
        self.actions.len()
    }

    fn state_count(&self) -> usize {
        self.states
    }

    fn successor(&self, state: usize, decision: usize) -> Result<usize, Key> {
        let i = state * self.decisions + decision;
        match self.next[i] {
            UNSET => Err(Key::Next(i)),
            t => Ok(t),
        }
    }

    fn holds(&self, atom: usize, state: usize) -> Result<bool, Key> {
        let i = atom * self.states + state;
        self.truth[i].ok_or(Key::Truth(i))
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
        self.decisions
    }
}

/// Whether a property is checked per start state or per whole structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Pointed,
    Whole,
}

/// A property of (pointed) structures that can be evaluated lazily.
pub trait Property {
    /// Called once per cell with an empty structure of that shape.
    /// `Ok(false)` skips the cell, e.g. when the query names an action the
    /// cell does not have.
    fn prepare(&mut self, shape: &Partial) -> Result<bool, McError>;

    /// `state` is `Some` under [`Scope::Pointed`] and `None` under
    /// [`Scope::Whole`].
    fn check(&self, g: &Partial, state: Option<usize>) -> Result<bool, Key>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellReport {
    pub states: usize,
    pub actions: usize,
    pub closed_form: u128,
    /// Structures covered by the search, one entry per start state (a
    /// single entry under [`Scope::Whole`]). Empty for skipped cells.
    pub covered: Vec<u128>,
    pub nodes: u64,
    pub skipped: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub cells: Vec<CellReport>,
}

impl Report {
    /// Structures in all searched cells.
    pub fn candidates(&self) -> u128 {
        self.cells.iter().filter(|c| !c.skipped).map(|c| c.closed_form).sum()
    }

    /// Pointed structures in all searched cells.
    pub fn pointed_candidates(&self) -> u128 {
        self.cells.iter().filter(|c| !c.skipped).map(|c| c.closed_form * c.states as u128).sum()
    }

    pub fn nodes(&self) -> u64 {
        self.cells.iter().map(|c| c.nodes).sum()
    }

    /// Every searched cell was covered exactly once per start state.
    pub fn is_complete(&self) -> bool {
        self.cells.iter().filter(|c| !c.skipped).all(|c| c.covered.iter().all(|&n| n == c.closed_form))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub model: Cgs,
    /// The start state under [`Scope::Pointed`].
    pub state: Option<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// A structure violating the property. The report covers the cells
    /// searched up to and including the one holding the witness.
    Found(Witness, Report),
    Exhausted(Report),
}

impl Outcome {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Outcome::Found(w, _) => Some(w),
            Outcome::Exhausted(_) => None,
        }
    }

    pub fn report(&self) -> &Report {
        match self {
            Outcome::Found(_, r) | Outcome::Exhausted(r) => r,
        }
    }
}

struct Tally {
    covered: u128,
    nodes: u64,
    budget: u64,
}

fn dfs<P: Property>(p: &mut Partial, prop: &P, state: Option<usize>, tally: &mut Tally) -> Result<bool, EnumError> {
    tally.nodes += 1;
    if tally.nodes > tally.budget {
        return Err(EnumError::Budget(tally.budget));
    }
    match prop.check(p, state) {
        Ok(true) => {
            tally.covered += p.completions();
            Ok(false)
        }
        Ok(false) => Ok(true),
        Err(key) => {
            for v in 0..p.domain(key) {
                p.set(key, v);
                if dfs(p, prop, state, tally)? {
                    return Ok(true);
                }
            }
            p.unset(key);
            Ok(false)
        }
    }
}

/// Searches every cell of `b` for a structure on which `prop` fails.
pub fn exhaust<P: Property>(b: &Bounds, atoms: Vec<String>, scope: Scope, prop: &mut P) -> Result<Outcome, EnumError> {
    b.check()?;
    check_labels(&atoms, b)?;
    let mut report = Report::default();
    let mut nodes = 0u64;
    for (s, a) in b.cells() {
        let closed_form = cell_count(b.agents, a, s, atoms.len()).ok_or(EnumError::Overflow { states: s, actions: a })?;
        let mut partial = Partial::new(b.agents, a, s, atoms.clone());
        let mut cell = CellReport { states: s, actions: a, closed_form, covered: Vec::new(), nodes: 0, skipped: false };
        if !prop.prepare(&partial)? {
            cell.skipped = true;
            report.cells.push(cell);
            continue;
        }
        let starts: Vec<Option<usize>> = match scope {
            Scope::Pointed => (0..s).map(Some).collect(),
            Scope::Whole => vec![None],
        };
        for start in starts {
            let mut tally = Tally { covered: 0, nodes: 0, budget: b.node_budget.saturating_sub(nodes) };
            let found = dfs(&mut partial, prop, start, &mut tally)?;
            nodes += tally.nodes;
            cell.nodes += tally.nodes;
            cell.covered.push(tally.covered);
            if found {
                let w = Witness { model: partial.complete(), state: start.map(StateId) };
                report.cells.push(cell);
                return Ok(Outcome::Found(w, report));
            }
        }
        report.cells.push(cell);
    }
    Ok(Outcome::Exhausted(report))
}

/// Compiles a formula per cell, skipping cells that lack one of its
/// constants.
fn prepare_formula(shape: &Partial, f: &Formula) -> Result<Option<Compiled>, McError> {
    match Compiled::new(shape, f) {
        Ok(c) => Ok(Some(c)),
        Err(McError::UnknownConstant(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn eval_scope(c: &Compiled, g: &Partial, state: Option<usize>) -> Result<bool, Key> {
    match state {
        Some(s) => c.eval(g, s),
        None => {
            for s in 0..g.state_count() {
                if !c.eval(g, s)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Truth of a formula (through its closure), optionally negated.
pub struct Holds {
    f: Formula,
    expect: bool,
    compiled: Option<Compiled>,
}

impl Holds {
    pub fn new(f: &Formula) -> Self {
        Holds { f: f.clone(), expect: true, compiled: None }
    }

    pub fn fails(f: &Formula) -> Self {
        Holds { f: f.clone(), expect: false, compiled: None }
    }
}

impl Property for Holds {
    fn prepare(&mut self, shape: &Partial) -> Result<bool, McError> {
        self.compiled = prepare_formula(shape, &self.f)?;
        Ok(self.compiled.is_some())
    }

    fn check(&self, g: &Partial, state: Option<usize>) -> Result<bool, Key> {
        let c = self.compiled.as_ref().expect("prepared");
        Ok(eval_scope(c, g, state)? == self.expect)
    }
}

struct Equiv {
    fs: [Formula; 2],
    compiled: Option<[Compiled; 2]>,
}

impl Property for Equiv {
    fn prepare(&mut self, shape: &Partial) -> Result<bool, McError> {
        let a = prepare_formula(shape, &self.fs[0])?;
        let b = prepare_formula(shape, &self.fs[1])?;
        self.compiled = a.zip(b).map(|(a, b)| [a, b]);
        Ok(self.compiled.is_some())
    }

    fn check(&self, g: &Partial, state: Option<usize>) -> Result<bool, Key> {
        let [a, b] = self.compiled.as_ref().expect("prepared");
        Ok(eval_scope(a, g, state)? == eval_scope(b, g, state)?)
    }
}

struct Consequence {
    premises: Vec<Formula>,
    goal: Formula,
    compiled: Option<(Vec<Compiled>, Compiled)>,
}

impl Property for Consequence {
    fn prepare(&mut self, shape: &Partial) -> Result<bool, McError> {
        let mut ps = Vec::new();
        for f in &self.premises {
            match prepare_formula(shape, f)? {
                Some(c) => ps.push(c),
                None => {
                    self.compiled = None;
                    return Ok(false);
                }
            }
        }
        self.compiled = prepare_formula(shape, &self.goal)?.map(|g| (ps, g));
        Ok(self.compiled.is_some())
    }

    fn check(&self, g: &Partial, _: Option<usize>) -> Result<bool, Key> {
        let (ps, goal) = self.compiled.as_ref().expect("prepared");
        for p in ps {
            if !eval_scope(p, g, None)? {
                return Ok(true);
            }
        }
        eval_scope(goal, g, None)
    }
}

/// First pointed structure (in search order) falsifying `f`.
pub fn find_countermodel(f: &Formula, b: &Bounds) -> Result<Outcome, EnumError> {
    exhaust(b, b.atoms_for(&[f]), Scope::Pointed, &mut Holds::new(f))
}

/// First pointed structure (in search order) satisfying `f`.
pub fn find_model(f: &Formula, b: &Bounds) -> Result<Outcome, EnumError> {
    exhaust(b, b.atoms_for(&[f]), Scope::Pointed, &mut Holds::fails(f))
}

pub fn bounded_valid(f: &Formula, b: &Bounds) -> Result<bool, EnumError> {
    Ok(find_countermodel(f, b)?.witness().is_none())
}

/// `f` and `g` agree at every pointed structure within `b`.
pub fn bounded_equiv(f: &Formula, g: &Formula, b: &Bounds) -> Result<bool, EnumError> {
    let mut prop = Equiv { fs: [f.clone(), g.clone()], compiled: None };
    Ok(exhaust(b, b.atoms_for(&[f, g]), Scope::Pointed, &mut prop)?.witness().is_none())
}

/// Every structure within `b` in which all of `premises` are valid also
/// validates `goal`.
pub fn bounded_consequence(premises: &[Formula], goal: &Formula, b: &Bounds) -> Result<bool, EnumError> {
    let mut queries: Vec<&Formula> = premises.iter().collect();
    queries.push(goal);
    let atoms = b.atoms_for(&queries);
    let mut prop = Consequence { premises: premises.to_vec(), goal: goal.clone(), compiled: None };
    Ok(exhaust(b, atoms, Scope::Whole, &mut prop)?.witness().is_none())
}

impl core::fmt::Display for Report {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for c in &self.cells {
            if c.skipped {
                writeln!(f, "|S|={} |Ac|={}: skipped", c.states, c.actions)?;
            } else {
                let covered: Vec<String> = c.covered.iter().map(ToString::to_string).collect();
                writeln!(
                    f,
                    "|S|={} |Ac|={}: {} structures, covered [{}], {} nodes",
                    c.states,
                    c.actions,
                    c.closed_form,
                    covered.join(","),
                    c.nodes
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
