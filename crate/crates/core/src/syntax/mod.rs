//! Formulas of first-order coalition logic, signatures, and the purely
//! syntactic operations on them (free variables, substitution, closure,
//! size, negation normal form, abbreviation elimination).

mod lexer;
mod parser;
mod print;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use lexer::{Lexer, Token, TokenKind};
pub use parser::{parse, ParseError, ParseErrorKind};
pub(crate) use parser::{BinOp, Grammar, Parser};

const KEYWORDS: [&str; 4] = ["forall", "exists", "true", "false"];

/// True when `name` can be written in the concrete formula grammar.
pub fn is_identifier(name: &str) -> bool {
    !name.is_empty()
        && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
        && !KEYWORDS.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("signature needs at least one agent")]
    NoAgents,
    #[error("signature needs at least one constant")]
    NoConstants,
    #[error("signature needs at least one atom")]
    NoAtoms,
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` is declared both as a constant and as an atom")]
    ConstantAtomOverlap(String),
}

/// The context a formula lives in: agent count, constants (action names)
/// and atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    agents: usize,
    constants: Vec<String>,
    atoms: Vec<String>,
}

impl Signature {
    pub fn new<C, A>(agents: usize, constants: C, atoms: A) -> Result<Self, SignatureError>
    where
        C: IntoIterator,
        C::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if agents == 0 {
            return Err(SignatureError::NoAgents);
        }
        if constants.is_empty() {
            return Err(SignatureError::NoConstants);
        }
        if atoms.is_empty() {
            return Err(SignatureError::NoAtoms);
        }
        let mut seen = BTreeSet::new();
        for c in &constants {
            if !is_identifier(c) {
                return Err(SignatureError::BadIdentifier(c.clone()));
            }
            if !seen.insert(c.as_str()) {
                return Err(SignatureError::Duplicate(c.clone()));
            }
        }
        let mut seen_atoms = BTreeSet::new();
        for p in &atoms {
            if !is_identifier(p) {
                return Err(SignatureError::BadIdentifier(p.clone()));
            }
            if seen.contains(p.as_str()) {
                return Err(SignatureError::ConstantAtomOverlap(p.clone()));
            }
            if !seen_atoms.insert(p.as_str()) {
                return Err(SignatureError::Duplicate(p.clone()));
            }
        }
        Ok(Signature { agents, constants, atoms })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }

    pub fn is_atom(&self, name: &str) -> bool {
        self.atoms.iter().any(|p| p == name)
    }

    /// Identifiers that are neither constants nor atoms denote variables.
    pub fn is_variable_name(&self, name: &str) -> bool {
        is_identifier(name) && !self.is_constant(name) && !self.is_atom(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

/// A formula of the language. `Or`, `Imp`, `Iff`, `Exists` and `Bottom` are
/// abbreviations kept for faithful printing; [`core_normalize`] removes them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Strat(Vec<Term>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn strat(terms: Vec<Term>, f: Formula) -> Self {
        Formula::Strat(terms, Box::new(f))
    }

    pub fn forall(x: impl Into<String>, f: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(f))
    }

    pub fn exists(x: impl Into<String>, f: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(f))
    }

    /// Left-nested conjunction; `Top` for an empty sequence.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `Bottom` for an empty sequence.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::Bottom)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => Vec::new(),
            Formula::Not(f) | Formula::Strat(_, f) | Formula::Forall(_, f) | Formula::Exists(_, f) => {
                alloc::vec![&**f]
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                alloc::vec![&**a, &**b]
            }
        }
    }

    /// Number of symbols: one per node, plus one per modality term and per
    /// bound-variable occurrence at a quantifier.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Strat(ts, f) => 1 + ts.len() + f.size(),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 2 + f.size(),
        }
    }

    /// Nesting depth of strategic modalities.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Strat(_, f) => 1 + f.modal_depth(),
            other => other.children().into_iter().map(Formula::modal_depth).max().unwrap_or(0),
        }
    }

    /// Number of quantifier nodes.
    pub fn quantifier_count(&self) -> usize {
        let own = matches!(self, Formula::Forall(..) | Formula::Exists(..)) as usize;
        own + self.children().into_iter().map(Formula::quantifier_count).sum::<usize>()
    }

    /// Atom names in order of first occurrence.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Atom(p) = f {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        });
        out
    }

    /// Constant names in order of first occurrence.
    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Strat(ts, _) = f {
                for t in ts {
                    if let Term::Const(c) = t {
                        if !out.contains(c) {
                            out.push(c.clone());
                        }
                    }
                }
            }
        });
        out
    }

    /// Every variable name that occurs anywhere (free, bound, or at a binder).
    pub fn variable_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Strat(ts, _) => {
                for t in ts {
                    if let Term::Var(x) = t {
                        out.insert(x.clone());
                    }
                }
            }
            Formula::Forall(x, _) | Formula::Exists(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// True if `name` occurs as a term or binder anywhere in the formula.
    pub fn mentions(&self, name: &str) -> bool {
        let mut found = false;
        self.walk(&mut |f| match f {
            Formula::Strat(ts, _) => found |= ts.iter().any(|t| t.name() == name),
            Formula::Forall(x, _) | Formula::Exists(x, _) => found |= x == name,
            _ => {}
        });
        found
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    pub fn is_core(&self) -> bool {
        match self {
            Formula::Top | Formula::Atom(_) => true,
            Formula::Not(f) | Formula::Strat(_, f) | Formula::Forall(_, f) => f.is_core(),
            Formula::And(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    /// Negations occur only directly above atoms.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            other => other.children().into_iter().all(Formula::is_nnf),
        }
    }

    /// Checks the formula against a signature: known atoms, constants drawn
    /// from the signature, variables disjoint from it, and modality arity.
    pub fn check(&self, sig: &Signature) -> Result<(), WellFormedError> {
        match self {
            Formula::Top | Formula::Bottom => Ok(()),
            Formula::Atom(p) => {
                if sig.is_atom(p) {
                    Ok(())
                } else {
                    Err(WellFormedError::UnknownAtom(p.clone()))
                }
            }
            Formula::Strat(ts, f) => {
                if ts.len() != sig.agents() {
                    return Err(WellFormedError::Arity { expected: sig.agents(), found: ts.len() });
                }
                for t in ts {
                    match t {
                        Term::Const(c) if !sig.is_constant(c) => {
                            return Err(WellFormedError::UnknownConstant(c.clone()))
                        }
                        Term::Var(x) if !sig.is_variable_name(x) => {
                            return Err(WellFormedError::VariableClash(x.clone()))
                        }
                        _ => {}
                    }
                }
                f.check(sig)
            }
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                if !sig.is_variable_name(x) {
                    return Err(WellFormedError::VariableClash(x.clone()));
                }
                f.check(sig)
            }
            other => other.children().into_iter().try_for_each(|c| c.check(sig)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFormedError {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("variable `{0}` clashes with a constant or atom name")]
    VariableClash(String),
    #[error("modality lists {found} terms but the signature has {expected} agents")]
    Arity { expected: usize, found: usize },
}

/// A finite set of variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarSet(BTreeSet<String>);

impl VarSet {
    pub fn new() -> Self {
        VarSet(BTreeSet::new())
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, x: impl Into<String>) -> bool {
        self.0.insert(x.into())
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for VarSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        VarSet(iter.into_iter().map(Into::into).collect())
    }
}

pub fn free_vars(f: &Formula) -> VarSet {
    free_vars_ordered(f).into_iter().collect()
}

/// Free variables in order of first textual occurrence.
pub fn free_vars_ordered(f: &Formula) -> Vec<String> {
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match f {
            Formula::Strat(ts, body) => {
                for t in ts {
                    if let Term::Var(x) = t {
                        if !bound.contains(x) && !out.contains(x) {
                            out.push(x.clone());
                        }
                    }
                }
                go(body, bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
            other => {
                for c in other.children() {
                    go(c, bound, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

pub fn is_sentence(f: &Formula) -> bool {
    free_vars_ordered(f).is_empty()
}

pub fn is_free_in(x: &str, f: &Formula) -> bool {
    match f {
        Formula::Strat(ts, body) => ts.iter().any(|t| matches!(t, Term::Var(v) if v == x)) || is_free_in(x, body),
        Formula::Forall(y, body) | Formula::Exists(y, body) => y != x && is_free_in(x, body),
        other => other.children().into_iter().any(|c| is_free_in(x, c)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting `{term}` for `{var}` would be captured by the binder of `{term}`")]
pub struct CaptureError {
    pub var: String,
    pub term: String,
}

/// `f[t/x]`: replaces every free occurrence of `x` by `t`. Fails when `t` is
/// a variable that some binder in `f` would capture.
pub fn substitute(f: &Formula, x: &str, t: &Term) -> Result<Formula, CaptureError> {
    Ok(match f {
        Formula::Top | Formula::Bottom | Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(substitute(a, x, t)?),
        Formula::And(a, b) => Formula::and(substitute(a, x, t)?, substitute(b, x, t)?),
        Formula::Or(a, b) => Formula::or(substitute(a, x, t)?, substitute(b, x, t)?),
        Formula::Imp(a, b) => Formula::imp(substitute(a, x, t)?, substitute(b, x, t)?),
        Formula::Iff(a, b) => Formula::iff(substitute(a, x, t)?, substitute(b, x, t)?),
        Formula::Strat(ts, body) => {
            let ts = ts
                .iter()
                .map(|u| match u {
                    Term::Var(v) if v == x => t.clone(),
                    other => other.clone(),
                })
                .collect();
            Formula::Strat(ts, Box::new(substitute(body, x, t)?))
        }
        Formula::Forall(y, body) | Formula::Exists(y, body) => {
            if y == x {
                return Ok(f.clone());
            }
            if let Term::Var(v) = t {
                if v == y && is_free_in(x, body) {
                    return Err(CaptureError { var: x.to_string(), term: v.clone() });
                }
            }
            let body = Box::new(substitute(body, x, t)?);
            match f {
                Formula::Forall(..) => Formula::Forall(y.clone(), body),
                _ => Formula::Exists(y.clone(), body),
            }
        }
    })
}

/// Universal closure, quantifying free variables in first-occurrence order
/// (the first free variable becomes the outermost quantifier).
pub fn closure(f: &Formula) -> Formula {
    free_vars_ordered(f)
        .into_iter()
        .rev()
        .fold(f.clone(), |acc, x| Formula::forall(x, acc))
}

/// Eliminates `Or`, `Imp`, `Iff`, `Exists` and `Bottom` through their
/// defining abbreviations.
pub fn core_normalize(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Atom(_) => f.clone(),
        Formula::Bottom => Formula::not(Formula::Top),
        Formula::Not(a) => Formula::not(core_normalize(a)),
        Formula::And(a, b) => Formula::and(core_normalize(a), core_normalize(b)),
        Formula::Or(a, b) => Formula::not(Formula::and(
            Formula::not(core_normalize(a)),
            Formula::not(core_normalize(b)),
        )),
        Formula::Imp(a, b) => {
            Formula::not(Formula::and(core_normalize(a), Formula::not(core_normalize(b))))
        }
        Formula::Iff(a, b) => {
            let (a, b) = (core_normalize(a), core_normalize(b));
            Formula::and(
                Formula::not(Formula::and(a.clone(), Formula::not(b.clone()))),
                Formula::not(Formula::and(b, Formula::not(a))),
            )
        }
        Formula::Strat(ts, a) => Formula::strat(ts.clone(), core_normalize(a)),
        Formula::Forall(x, a) => Formula::forall(x.clone(), core_normalize(a)),
        Formula::Exists(x, a) => {
            Formula::not(Formula::forall(x.clone(), Formula::not(core_normalize(a))))
        }
    }
}

/// Negation normal form. Negations are pushed through the Boolean
/// connectives, quantifiers, and strategic modalities (which are self-dual on
/// serial functional frames). A biconditional keeps its shape and absorbs a
/// negation into its right operand, so the result never exceeds twice the
/// input size.
pub fn nnf(f: &Formula) -> Formula {
    nnf_pol(f, true)
}

fn nnf_pol(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Top => {
            if positive {
                Formula::Top
            } else {
                Formula::Bottom
            }
        }
        Formula::Bottom => {
            if positive {
                Formula::Bottom
            } else {
                Formula::Top
            }
        }
        Formula::Atom(_) => {
            if positive {
                f.clone()
            } else {
                Formula::not(f.clone())
            }
        }
        Formula::Not(a) => nnf_pol(a, !positive),
        Formula::And(a, b) => {
            let (a, b) = (nnf_pol(a, positive), nnf_pol(b, positive));
            if positive {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (nnf_pol(a, positive), nnf_pol(b, positive));
            if positive {
                Formula::or(a, b)
            } else {
                Formula::and(a, b)
            }
        }
        Formula::Imp(a, b) => {
            if positive {
                Formula::or(nnf_pol(a, false), nnf_pol(b, true))
            } else {
                Formula::and(nnf_pol(a, true), nnf_pol(b, false))
            }
        }
        Formula::Iff(a, b) => Formula::iff(nnf_pol(a, true), nnf_pol(b, positive)),
        Formula::Strat(ts, a) => Formula::strat(ts.clone(), nnf_pol(a, positive)),
        Formula::Forall(x, a) => {
            if positive {
                Formula::forall(x.clone(), nnf_pol(a, true))
            } else {
                Formula::exists(x.clone(), nnf_pol(a, false))
            }
        }
        Formula::Exists(x, a) => {
            if positive {
                Formula::exists(x.clone(), nnf_pol(a, true))
            } else {
                Formula::forall(x.clone(), nnf_pol(a, false))
            }
        }
    }
}

/// A variable name based on `base` that does not occur in `avoid`.
pub fn fresh_name(base: &str, avoid: impl Fn(&str) -> bool) -> String {
    if !avoid(base) {
        return base.to_string();
    }
    (1usize..)
        .map(|i| alloc::format!("{base}_{i}"))
        .find(|c| !avoid(c))
        .expect("unbounded supply of names")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests;
