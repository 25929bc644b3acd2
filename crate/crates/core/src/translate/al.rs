use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::cl::wrap;
use super::{
    by_size, direct, exists_forall, parse_logic, Ext, LogicGrammar, ModalSyntax, Modality, Slot, TranslateError,
};
use crate::cgs::{Cgs, GameView};
use crate::syntax::{Formula, ParseError, ParseErrorKind, Parser, Signature, Term, TokenKind};

/// One position of a modality marker.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Entry {
    /// `Ex`: chosen existentially, before the universal positions.
    Exists(String),
    /// `Ax`
    Forall(String),
    Action(String),
}

/// `[M] f` for a marker `M` with one entry per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Marker {
    pub entries: Vec<Entry>,
    pub body: Box<AlFormula>,
}

pub type AlFormula = Ext<Marker>;

impl Marker {
    pub fn new(entries: Vec<Entry>, body: AlFormula) -> AlFormula {
        Ext::Modal(Marker { entries, body: Box::new(body) })
    }

    fn variables(&self) -> impl Iterator<Item = &String> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Exists(x) | Entry::Forall(x) => Some(x),
            Entry::Action(_) => None,
        })
    }

    fn repeated(&self) -> Option<&String> {
        let vars: Vec<&String> = self.variables().collect();
        vars.iter().enumerate().find(|(i, x)| vars[..*i].contains(x)).map(|(_, x)| *x)
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match e {
                Entry::Exists(x) => write!(f, "E{x}")?,
                Entry::Forall(x) => write!(f, "A{x}")?,
                Entry::Action(a) => f.write_str(a)?,
            }
        }
        write!(f, "] {}", self.body)
    }
}

impl Modality for Marker {
    fn subformulas(&self) -> Vec<&AlFormula> {
        alloc::vec![&*self.body]
    }

    fn check<G: GameView>(&self, g: &G) -> Result<(), TranslateError> {
        if self.entries.len() != g.agents() {
            return Err(TranslateError::Arity { expected: g.agents(), found: self.entries.len() });
        }
        if let Some(x) = self.repeated() {
            return Err(TranslateError::RepeatedVariable(x.clone()));
        }
        for e in &self.entries {
            match e {
                Entry::Action(a) if g.action_index(a).is_none() => return Err(TranslateError::UnknownAction(a.clone())),
                Entry::Exists(x) | Entry::Forall(x) if g.action_index(x).is_some() || g.atom_index(x).is_some() => {
                    return Err(TranslateError::VariableClash(x.clone()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn holds<G: GameView>(&self, g: &G, s: usize) -> Result<bool, G::Miss> {
        let slots: Vec<Slot> = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Exists(_) => Slot::Outer,
                Entry::Forall(_) => Slot::Inner,
                Entry::Action(a) => Slot::Fixed(g.action_index(a).expect("checked action")),
            })
            .collect();
        exists_forall(g, s, &slots, |t| self.body.eval(g, t))
    }

    /// Marker variables keep their names; they are bound right here and
    /// the body has no free variables, so nothing can be captured.
    fn to_csl(&self, agents: usize, avoid: &dyn Fn(&str) -> bool) -> Formula {
        let mut binders: Vec<(bool, String)> = Vec::new();
        let terms = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Exists(x) => {
                    binders.push((true, x.clone()));
                    Term::var(x.clone())
                }
                Entry::Forall(x) => {
                    binders.push((false, x.clone()));
                    Term::var(x.clone())
                }
                Entry::Action(a) => Term::constant(a.clone()),
            })
            .collect();
        binders.sort_by_key(|(outer, _)| !*outer);
        wrap(&binders, Formula::strat(terms, self.body.tr(agents, avoid)))
    }
}

impl ModalSyntax for Marker {
    fn parse(p: &mut Parser, g: &LogicGrammar<'_, Self>) -> Result<Option<AlFormula>, ParseError> {
        if *p.peek() != TokenKind::LBracket {
            return Ok(None);
        }
        let open = p.pos();
        p.bump();
        let sig = g.sig;
        let entries = p.list(TokenKind::RBracket, "`,` or `]`", |p| {
            let (name, pos) = p.ident("a marker entry")?;
            if sig.is_constant(&name) {
                return Ok(Entry::Action(name));
            }
            let var = |rest: &str| -> Result<String, ParseError> {
                if sig.is_variable_name(rest) {
                    Ok(rest.into())
                } else {
                    Err(ParseError::new(pos, ParseErrorKind::Clash(rest.into())))
                }
            };
            match name.split_at(1) {
                ("E", rest) if !rest.is_empty() => Ok(Entry::Exists(var(rest)?)),
                ("A", rest) if !rest.is_empty() => Ok(Entry::Forall(var(rest)?)),
                _ => Err(ParseError::new(
                    pos,
                    ParseErrorKind::Other(format!("`{name}` is neither an action nor `E<var>`/`A<var>`")),
                )),
            }
        })?;
        if entries.len() != sig.agents() {
            return Err(ParseError::new(open, ParseErrorKind::Arity { expected: sig.agents(), found: entries.len() }));
        }
        let m = Marker { entries, body: Box::new(Ext::Top) };
        if let Some(x) = m.repeated() {
            return Err(ParseError::new(open, ParseErrorKind::Other(format!("variable `{x}` repeats in the marker"))));
        }
        Ok(Some(Marker::new(m.entries, p.unary(g)?)))
    }
}

/// Parses the formula grammar with markers `[Ex, a, Ay] f`.
pub fn parse_al(text: &str, sig: &Signature) -> Result<AlFormula, ParseError> {
    parse_logic(text, sig)
}

pub fn al_mc(g: &Cgs, state: &str, f: &AlFormula) -> Result<bool, TranslateError> {
    direct(g, state, f)
}

/// `[M] f` becomes `exists (E vars) forall (A vars) <t> tr(f)` with the
/// action entries as constants.
pub fn tr_al(f: &AlFormula) -> Formula {
    let agents = match f {
        Ext::Modal(m) => m.entries.len(),
        _ => 0,
    };
    f.to_csl(agents, &|_| false)
}

/// Every marker over `actions` with variables named by position:
/// `E` entries use `x<i>`, `A` entries `y<i>`.
pub(crate) fn markers(agents: usize, actions: &[String]) -> Vec<Vec<Entry>> {
    let choices = actions.len() + 2;
    let total = choices.pow(agents as u32);
    (0..total)
        .map(|mut code| {
            let mut digits = alloc::vec![0; agents];
            for d in digits.iter_mut().rev() {
                *d = code % choices;
                code /= choices;
            }
            digits
                .iter()
                .enumerate()
                .map(|(i, &d)| match d {
                    0 => Entry::Exists(format!("x{}", i + 1)),
                    1 => Entry::Forall(format!("y{}", i + 1)),
                    k => Entry::Action(actions[k - 2].clone()),
                })
                .collect()
        })
        .collect()
}

/// All AL formulas of size `1..=max`; marker variables are named by
/// position, `x<i>` for `E` entries and `y<i>` for `A` entries.
pub fn al_formulas(agents: usize, actions: &[String], atoms: &[String], max: usize) -> Vec<Vec<AlFormula>> {
    let ms = markers(agents, actions);
    by_size(atoms, max, |levels, n| {
        let mut out = Vec::new();
        for m in &ms {
            out.extend(levels[n - 1].iter().map(|b| Marker::new(m.clone(), b.clone())));
        }
        out
    })
}
