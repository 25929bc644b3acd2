use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::cl::{coalition_prefix, wrap};
use super::{
    by_size, check_coalition, coalition_slots, coalitions, count, direct, parse_coalition, parse_logic, assemble, Ext,
    LogicGrammar, ModalSyntax, Modality, Slot, TranslateError,
};
use crate::cgs::{Cgs, GameView};
use crate::syntax::{Formula, ParseError, ParseErrorKind, Parser, Signature, TokenKind};

/// `[[C]](f; g1, .., gk)`: one choice of `C` forces `f` and leaves each
/// `gi` reachable by some answer of the other agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SfCoal {
    pub coalition: Vec<usize>,
    pub goal: Box<SfclFormula>,
    /// Never empty.
    pub enable: Vec<SfclFormula>,
}

pub type SfclFormula = Ext<SfCoal>;

impl SfCoal {
    pub fn new(mut coalition: Vec<usize>, goal: SfclFormula, enable: Vec<SfclFormula>) -> Result<SfclFormula, TranslateError> {
        if enable.is_empty() {
            return Err(TranslateError::EmptyEnable);
        }
        coalition.sort_unstable();
        coalition.dedup();
        Ok(Ext::Modal(SfCoal { coalition, goal: Box::new(goal), enable }))
    }
}

impl fmt::Display for SfCoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[[")?;
        for (k, i) in self.coalition.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]]({}; ", self.goal)?;
        for (k, g) in self.enable.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

impl Modality for SfCoal {
    fn subformulas(&self) -> Vec<&SfclFormula> {
        core::iter::once(&*self.goal).chain(self.enable.iter()).collect()
    }

    fn check<G: GameView>(&self, g: &G) -> Result<(), TranslateError> {
        if self.enable.is_empty() {
            return Err(TranslateError::EmptyEnable);
        }
        check_coalition(&self.coalition, g.agents())
    }

    fn holds<G: GameView>(&self, g: &G, s: usize) -> Result<bool, G::Miss> {
        let slots = coalition_slots(&self.coalition, g.agents());
        let n = g.action_count();
        let outer = count(&slots, Slot::Outer, n);
        let inner = count(&slots, Slot::Inner, n);
        'choice: for o in 0..outer {
            for i in 0..inner {
                if !self.goal.eval(g, g.successor(s, assemble(&slots, o, i, n))?)? {
                    continue 'choice;
                }
            }
            for psi in &self.enable {
                let mut some = false;
                for i in 0..inner {
                    if psi.eval(g, g.successor(s, assemble(&slots, o, i, n))?)? {
                        some = true;
                        break;
                    }
                }
                if !some {
                    continue 'choice;
                }
            }
            return Ok(true);
        }
        Ok(false)
    }

    /// `exists x_C (forall y <x,y> f & exists y <x,y> g1 & ..)`, with the
    /// enabling blocks reusing the names of the universal block.
    fn to_csl(&self, agents: usize, avoid: &dyn Fn(&str) -> bool) -> Formula {
        let (binders, terms) = coalition_prefix(&self.coalition, agents, avoid);
        let (outer, inner): (Vec<_>, Vec<_>) = binders.into_iter().partition(|(o, _)| *o);
        let flip = |inner: &[(bool, String)]| -> Vec<(bool, String)> {
            inner.iter().map(|(_, x)| (true, x.clone())).collect()
        };
        let guarantee = wrap(&inner, Formula::strat(terms.clone(), self.goal.tr(agents, avoid)));
        let enabled = self
            .enable
            .iter()
            .map(|psi| wrap(&flip(&inner), Formula::strat(terms.clone(), psi.tr(agents, avoid))));
        wrap(&outer, Formula::conj(core::iter::once(guarantee).chain(enabled)))
    }
}

impl ModalSyntax for SfCoal {
    fn parse(p: &mut Parser, g: &LogicGrammar<'_, Self>) -> Result<Option<SfclFormula>, ParseError> {
        if *p.peek() != TokenKind::LBracket {
            return Ok(None);
        }
        p.bump();
        p.expect(TokenKind::LBracket, "`[`")?;
        let c = parse_coalition(p, g.sig.agents())?;
        p.expect(TokenKind::LParen, "`(`")?;
        let goal = p.formula(g)?;
        let semi = p.pos();
        p.expect(TokenKind::Semi, "`;`")?;
        let enable = p.list(TokenKind::RParen, "`,` or `)`", |p| p.formula(g))?;
        SfCoal::new(c, goal, enable)
            .map(Some)
            .map_err(|e| ParseError::new(semi, ParseErrorKind::Other(alloc::format!("{e}"))))
    }
}

/// Parses the formula grammar with `[[C]](f; g1, .., gk)`.
pub fn parse_sfcl(text: &str, sig: &Signature) -> Result<SfclFormula, ParseError> {
    parse_logic(text, sig)
}

pub fn sfcl_mc(g: &Cgs, state: &str, f: &SfclFormula) -> Result<bool, TranslateError> {
    direct(g, state, f)
}

/// CSL rendering of the guarantee-and-enable reading.
pub fn tr_sfcl(f: &SfclFormula, agents: usize) -> Formula {
    f.to_csl(agents, &|_| false)
}

/// All SFCL formulas of size `1..=max`. The modality counts one node
/// plus its goal and every enabled formula.
pub fn sfcl_formulas(agents: usize, atoms: &[String], max: usize) -> Vec<Vec<SfclFormula>> {
    let cs = coalitions(agents);
    by_size(atoms, max, |levels, n| {
        let mut out = Vec::new();
        for c in &cs {
            for goal_size in 1..n - 1 {
                for list in lists(levels, n - 1 - goal_size) {
                    for goal in &levels[goal_size] {
                        out.push(SfCoal::new(c.clone(), goal.clone(), list.clone()).expect("nonempty list"));
                    }
                }
            }
        }
        out
    })
}

/// Nonempty sequences of formulas with total size `total`.
fn lists(levels: &[Vec<SfclFormula>], total: usize) -> Vec<Vec<SfclFormula>> {
    let mut out = Vec::new();
    for head in 1..=total {
        for f in &levels[head] {
            if head == total {
                out.push(alloc::vec![f.clone()]);
            } else {
                for mut tail in lists(levels, total - head) {
                    tail.insert(0, f.clone());
                    out.push(tail);
                }
            }
        }
    }
    out
}
