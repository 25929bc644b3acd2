//! Coalition logic (CL), modality-marker logic (AL) and strategic
//! coalition logic with enabling goals (SFCL): direct semantics, CSL
//! translations, the two game-theoretic example formulas, and bounded
//! distinguishability of pointed structures.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::marker::PhantomData;

use thiserror::Error;

use crate::cgs::{Cgs, GameView};
use crate::enumerate::EnumError;
use crate::mc::unwrap_total;
use crate::syntax::{BinOp, Formula, Grammar, ParseError, ParseErrorKind, Parser, Signature};

mod al;
mod cl;
mod distinguish;
mod games;
mod search;
mod sfcl;

pub use al::{al_formulas, al_mc, parse_al, tr_al, AlFormula, Entry, Marker};
pub use cl::{cl_formulas, cl_mc, parse_cl, tr_cl, tr_cl_avoiding, ClFormula, Coal};
pub use distinguish::{distinguishability_report, AnyFormula, DistReport, Logic};
pub use games::{nash_formula, stackelberg_formula};
pub use search::find_disagreement;
pub use sfcl::{parse_sfcl, sfcl_formulas, sfcl_mc, tr_sfcl, SfCoal, SfclFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("agent {index} is out of range 1..={agents}")]
    Agent { index: usize, agents: usize },
    #[error("marker has {found} entries but the model has {expected} agents")]
    Arity { expected: usize, found: usize },
    #[error("variable `{0}` is quantified twice in one marker")]
    RepeatedVariable(String),
    #[error("variable `{0}` clashes with an action or atom name of the model")]
    VariableClash(String),
    #[error("atom `{0}` is not interpreted by the model")]
    UnknownAtom(String),
    #[error("action `{0}` is not an action of the model")]
    UnknownAction(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("an enabling modality needs at least one enabled goal")]
    EmptyEnable,
    #[error("expected {expected} goals, got {found}")]
    GoalCount { expected: usize, found: usize },
    #[error("the compared structures differ in {0}")]
    Mismatch(&'static str),
    #[error("structures too large for the distinguishability search")]
    TooLarge,
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// Propositional formulas over a modality `M`; `M` owns its subformulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ext<M> {
    Top,
    Bottom,
    Atom(String),
    Not(Box<Ext<M>>),
    And(Box<Ext<M>>, Box<Ext<M>>),
    Or(Box<Ext<M>>, Box<Ext<M>>),
    Imp(Box<Ext<M>>, Box<Ext<M>>),
    Iff(Box<Ext<M>>, Box<Ext<M>>),
    Modal(M),
}

/// What a logic adds on top of the propositional shell.
pub trait Modality: Clone + PartialEq + fmt::Debug + fmt::Display + Sized {
    fn subformulas(&self) -> Vec<&Ext<Self>>;

    /// Nodes contributed by the modality itself, subformulas excluded.
    fn own_size(&self) -> usize {
        1
    }

    /// Checks agent indices, marker shape and action names against `g`.
    fn check<G: GameView>(&self, g: &G) -> Result<(), TranslateError>;

    /// Truth at `s`; names must have been checked.
    fn holds<G: GameView>(&self, g: &G, s: usize) -> Result<bool, G::Miss>;

    /// The CSL counterpart; fresh variables avoid `reserved`.
    fn to_csl(&self, agents: usize, reserved: &dyn Fn(&str) -> bool) -> Formula;
}

pub(crate) trait ModalSyntax: Modality {
    /// Parses the modality at the current token, or `None` when absent.
    fn parse(p: &mut Parser, g: &LogicGrammar<'_, Self>) -> Result<Option<Ext<Self>>, ParseError>;
}

impl<M> Ext<M> {
    pub fn atom(name: impl Into<String>) -> Self {
        Ext::Atom(name.into())
    }

    pub fn not(f: Self) -> Self {
        Ext::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Ext::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Ext::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Self, b: Self) -> Self {
        Ext::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        Ext::Iff(Box::new(a), Box::new(b))
    }
}

impl<M: Modality> Ext<M> {
    pub fn children(&self) -> Vec<&Ext<M>> {
        match self {
            Ext::Top | Ext::Bottom | Ext::Atom(_) => Vec::new(),
            Ext::Not(a) => alloc::vec![&**a],
            Ext::And(a, b) | Ext::Or(a, b) | Ext::Imp(a, b) | Ext::Iff(a, b) => alloc::vec![&**a, &**b],
            Ext::Modal(m) => m.subformulas(),
        }
    }

    /// Node count; a modality counts once plus its subformulas.
    pub fn size(&self) -> usize {
        let own = match self {
            Ext::Modal(m) => m.own_size(),
            _ => 1,
        };
        own + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        if let Ext::Atom(p) = self {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn check<G: GameView>(&self, g: &G) -> Result<(), TranslateError> {
        match self {
            Ext::Atom(p) if g.atom_index(p).is_none() => return Err(TranslateError::UnknownAtom(p.clone())),
            Ext::Modal(m) => m.check(g)?,
            _ => {}
        }
        self.children().into_iter().try_for_each(|c| c.check(g))
    }

    /// Direct semantics at `s`. Call [`Ext::check`] first.
    pub fn eval<G: GameView>(&self, g: &G, s: usize) -> Result<bool, G::Miss> {
        Ok(match self {
            Ext::Top => true,
            Ext::Bottom => false,
            Ext::Atom(p) => g.holds(g.atom_index(p).expect("checked atom"), s)?,
            Ext::Not(a) => !a.eval(g, s)?,
            Ext::And(a, b) => a.eval(g, s)? && b.eval(g, s)?,
            Ext::Or(a, b) => a.eval(g, s)? || b.eval(g, s)?,
            Ext::Imp(a, b) => !a.eval(g, s)? || b.eval(g, s)?,
            Ext::Iff(a, b) => a.eval(g, s)? == b.eval(g, s)?,
            Ext::Modal(m) => m.holds(g, s)?,
        })
    }

    /// Translation into CSL with fresh variables avoiding `reserved` and
    /// the atoms of the formula.
    pub fn to_csl(&self, agents: usize, reserved: &dyn Fn(&str) -> bool) -> Formula {
        let atoms = self.atoms();
        let avoid = |n: &str| reserved(n) || atoms.iter().any(|a| a == n);
        self.tr(agents, &avoid)
    }

    fn tr(&self, agents: usize, avoid: &dyn Fn(&str) -> bool) -> Formula {
        let bin = |a: &Self, b: &Self| (a.tr(agents, avoid), b.tr(agents, avoid));
        match self {
            Ext::Top => Formula::Top,
            Ext::Bottom => Formula::Bottom,
            Ext::Atom(p) => Formula::atom(p.clone()),
            Ext::Not(a) => Formula::not(a.tr(agents, avoid)),
            Ext::And(a, b) => {
                let (a, b) = bin(a, b);
                Formula::and(a, b)
            }
            Ext::Or(a, b) => {
                let (a, b) = bin(a, b);
                Formula::or(a, b)
            }
            Ext::Imp(a, b) => {
                let (a, b) = bin(a, b);
                Formula::imp(a, b)
            }
            Ext::Iff(a, b) => {
                let (a, b) = bin(a, b);
                Formula::iff(a, b)
            }
            Ext::Modal(m) => m.to_csl(agents, avoid),
        }
    }
}

impl<M: fmt::Display> fmt::Display for Ext<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Top => f.write_str("true"),
            Ext::Bottom => f.write_str("false"),
            Ext::Atom(p) => f.write_str(p),
            Ext::Not(a) => write!(f, "~{a}"),
            Ext::And(a, b) => write!(f, "({a} & {b})"),
            Ext::Or(a, b) => write!(f, "({a} | {b})"),
            Ext::Imp(a, b) => write!(f, "({a} -> {b})"),
            Ext::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Ext::Modal(m) => write!(f, "{m}"),
        }
    }
}

/// Shared parser state for the three logics.
pub(crate) struct LogicGrammar<'s, M> {
    pub(crate) sig: &'s Signature,
    _m: PhantomData<M>,
}

impl<M: ModalSyntax> Grammar for LogicGrammar<'_, M> {
    type Out = Ext<M>;

    fn atom(&self, name: &str, pos: usize) -> Result<Ext<M>, ParseError> {
        if self.sig.is_atom(name) {
            Ok(Ext::atom(name))
        } else {
            Err(ParseError::new(pos, ParseErrorKind::UnknownAtom(name.into())))
        }
    }

    fn top(&self) -> Ext<M> {
        Ext::Top
    }

    fn bottom(&self) -> Ext<M> {
        Ext::Bottom
    }

    fn negate(&self, f: Ext<M>) -> Ext<M> {
        Ext::not(f)
    }

    fn binary(&self, op: BinOp, a: Ext<M>, b: Ext<M>) -> Ext<M> {
        match op {
            BinOp::And => Ext::and(a, b),
            BinOp::Or => Ext::or(a, b),
            BinOp::Imp => Ext::imp(a, b),
            BinOp::Iff => Ext::iff(a, b),
        }
    }

    fn prefix(&self, p: &mut Parser) -> Result<Option<Ext<M>>, ParseError> {
        M::parse(p, self)
    }
}

pub(crate) fn parse_logic<M: ModalSyntax>(text: &str, sig: &Signature) -> Result<Ext<M>, ParseError> {
    let g = LogicGrammar { sig, _m: PhantomData };
    Parser::new(text)?.finish(&g)
}

/// Parses `[[1,3]]`-style agent lists after the opening brackets.
pub(crate) fn parse_coalition(p: &mut Parser, agents: usize) -> Result<Vec<usize>, ParseError> {
    use crate::syntax::TokenKind;
    let mut c = p.list(TokenKind::RBracket, "`,` or `]`", |p| {
        let (name, pos) = p.ident("an agent index")?;
        match name.parse::<usize>() {
            Ok(i) if (1..=agents).contains(&i) => Ok(i),
            _ => Err(ParseError::new(pos, ParseErrorKind::Other(alloc::format!("`{name}` is not an agent 1..={agents}")))),
        }
    })?;
    p.expect(TokenKind::RBracket, "`]`")?;
    c.sort_unstable();
    c.dedup();
    Ok(c)
}

pub(crate) fn check_coalition(c: &[usize], agents: usize) -> Result<(), TranslateError> {
    match c.iter().find(|&&i| i == 0 || i > agents) {
        Some(&index) => Err(TranslateError::Agent { index, agents }),
        None => Ok(()),
    }
}

/// Position of an agent in a joint decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    /// Chosen by the outer (existential) player.
    Outer,
    /// Chosen by the inner (universal) player.
    Inner,
    Fixed(usize),
}

pub(crate) fn coalition_slots(c: &[usize], agents: usize) -> Vec<Slot> {
    (1..=agents).map(|i| if c.contains(&i) { Slot::Outer } else { Slot::Inner }).collect()
}

pub(crate) fn count(slots: &[Slot], which: Slot, actions: usize) -> usize {
    actions.pow(slots.iter().filter(|s| **s == which).count() as u32)
}

/// Decision index for outer choice `outer` and inner choice `inner`, both
/// read as base-`actions` digit strings over their slots.
pub(crate) fn assemble(slots: &[Slot], outer: usize, inner: usize, actions: usize) -> usize {
    let (mut o, mut i) = (outer, inner);
    let mut digits = Vec::with_capacity(slots.len());
    for s in slots.iter().rev() {
        digits.push(match s {
            Slot::Outer => {
                let d = o % actions;
                o /= actions;
                d
            }
            Slot::Inner => {
                let d = i % actions;
                i /= actions;
                d
            }
            Slot::Fixed(a) => *a,
        });
    }
    digits.iter().rev().fold(0, |acc, d| acc * actions + d)
}

/// `exists outer. forall inner. body` at the successor of `s`.
pub(crate) fn exists_forall<G: GameView>(
    g: &G,
    s: usize,
    slots: &[Slot],
    mut body: impl FnMut(usize) -> Result<bool, G::Miss>,
) -> Result<bool, G::Miss> {
    let n = g.action_count();
    for o in 0..count(slots, Slot::Outer, n) {
        let mut all = true;
        for i in 0..count(slots, Slot::Inner, n) {
            if !body(g.successor(s, assemble(slots, o, i, n))?)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks `f` against `g` and evaluates it at the named state.
pub(crate) fn direct<M: Modality>(g: &Cgs, state: &str, f: &Ext<M>) -> Result<bool, TranslateError> {
    let s = g.state(state).map_err(|_| TranslateError::UnknownState(state.into()))?;
    f.check(g)?;
    Ok(unwrap_total(f.eval(g, s.0)))
}

/// Formulas of each exact size from 1 to `max`, in constructor order:
/// constants, atoms, negation, the binary connectives, then modalities.
pub(crate) fn by_size<M: Modality>(
    atoms: &[String],
    max: usize,
    modal: impl Fn(&[Vec<Ext<M>>], usize) -> Vec<Ext<M>>,
) -> Vec<Vec<Ext<M>>> {
    let mut levels: Vec<Vec<Ext<M>>> = alloc::vec![Vec::new()];
    for n in 1..=max {
        let mut here = Vec::new();
        if n == 1 {
            here.push(Ext::Top);
            here.push(Ext::Bottom);
            here.extend(atoms.iter().map(Ext::atom));
        } else {
            here.extend(levels[n - 1].iter().cloned().map(Ext::not));
            for op in 0..4 {
                for i in 1..n - 1 {
                    for a in &levels[i] {
                        for b in &levels[n - 1 - i] {
                            let (a, b) = (a.clone(), b.clone());
                            here.push(match op {
                                0 => Ext::and(a, b),
                                1 => Ext::or(a, b),
                                2 => Ext::imp(a, b),
                                _ => Ext::iff(a, b),
                            });
                        }
                    }
                }
            }
            here.extend(modal(&levels, n));
        }
        levels.push(here);
    }
    levels
}

/// Subsets of `1..=agents` in increasing bitmask order.
pub(crate) fn coalitions(agents: usize) -> Vec<Vec<usize>> {
    (0..1usize << agents).map(|m| (1..=agents).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect()
}

#[cfg(test)]
mod tests;
