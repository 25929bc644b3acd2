use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{
    by_size, check_coalition, coalition_slots, coalitions, direct, exists_forall, parse_coalition, parse_logic, Ext,
    LogicGrammar, ModalSyntax, Modality, TranslateError,
};
use crate::cgs::{Cgs, GameView};
use crate::syntax::{fresh_name, Formula, ParseError, Parser, Signature, Term, TokenKind};

/// `[[C]] f`: the agents in `C` can together force `f` in one step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coal {
    /// Sorted, 1-based agent indices.
    pub coalition: Vec<usize>,
    pub body: Box<ClFormula>,
}

pub type ClFormula = Ext<Coal>;

impl Coal {
    pub fn new(mut coalition: Vec<usize>, body: ClFormula) -> ClFormula {
        coalition.sort_unstable();
        coalition.dedup();
        Ext::Modal(Coal { coalition, body: Box::new(body) })
    }
}

impl fmt::Display for Coal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[[")?;
        for (k, i) in self.coalition.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]] {}", self.body)
    }
}

/// Quantifier block `exists x_i (i in C) forall y_j (j not in C) <t>`
/// shared by the coalition translations; returns the prefix and terms.
pub(crate) fn coalition_prefix(
    coalition: &[usize],
    agents: usize,
    avoid: &dyn Fn(&str) -> bool,
) -> (Vec<(bool, String)>, Vec<Term>) {
    let mut binders = Vec::new();
    let mut terms = Vec::new();
    for i in 1..=agents {
        let outer = coalition.contains(&i);
        let base = if outer { format!("x{i}") } else { format!("y{i}") };
        let name = fresh_name(&base, avoid);
        terms.push(Term::var(name.clone()));
        binders.push((outer, name));
    }
    // existential block first, then universal, each in agent order
    binders.sort_by_key(|(outer, _)| !*outer);
    (binders, terms)
}

pub(crate) fn wrap(binders: &[(bool, String)], body: Formula) -> Formula {
    binders.iter().rev().fold(body, |f, (outer, x)| {
        if *outer {
            Formula::exists(x.clone(), f)
        } else {
            Formula::forall(x.clone(), f)
        }
    })
}

impl Modality for Coal {
    fn subformulas(&self) -> Vec<&ClFormula> {
        alloc::vec![&*self.body]
    }

    fn check<G: GameView>(&self, g: &G) -> Result<(), TranslateError> {
        check_coalition(&self.coalition, g.agents())
    }

    fn holds<G: GameView>(&self, g: &G, s: usize) -> Result<bool, G::Miss> {
        let slots = coalition_slots(&self.coalition, g.agents());
        exists_forall(g, s, &slots, |t| self.body.eval(g, t))
    }

    fn to_csl(&self, agents: usize, avoid: &dyn Fn(&str) -> bool) -> Formula {
        let (binders, terms) = coalition_prefix(&self.coalition, agents, avoid);
        wrap(&binders, Formula::strat(terms, self.body.tr(agents, avoid)))
    }
}

impl ModalSyntax for Coal {
    fn parse(p: &mut Parser, g: &LogicGrammar<'_, Self>) -> Result<Option<ClFormula>, ParseError> {
        if *p.peek() != TokenKind::LBracket {
            return Ok(None);
        }
        p.bump();
        p.expect(TokenKind::LBracket, "`[`")?;
        let c = parse_coalition(p, g.sig.agents())?;
        Ok(Some(Coal::new(c, p.unary(g)?)))
    }
}

/// Parses the CSL grammar with `[[1,2]] f` in place of strategic terms.
pub fn parse_cl(text: &str, sig: &Signature) -> Result<ClFormula, ParseError> {
    parse_logic(text, sig)
}

pub fn cl_mc(g: &Cgs, state: &str, f: &ClFormula) -> Result<bool, TranslateError> {
    direct(g, state, f)
}

/// `[[C]] f` becomes `exists x_C forall y_rest <x,y> tr(f)`.
pub fn tr_cl(f: &ClFormula, agents: usize) -> Formula {
    f.to_csl(agents, &|_| false)
}

/// [`tr_cl`] with variable names also avoiding `reserved`, e.g. the
/// action names of a model.
pub fn tr_cl_avoiding(f: &ClFormula, agents: usize, reserved: &[String]) -> Formula {
    f.to_csl(agents, &|n| reserved.iter().any(|r| r == n))
}

/// All CL formulas of size `1..=max` over `atoms`, grouped by size.
pub fn cl_formulas(agents: usize, atoms: &[String], max: usize) -> Vec<Vec<ClFormula>> {
    let cs = coalitions(agents);
    by_size(atoms, max, |levels, n| {
        let mut out = Vec::new();
        for c in &cs {
            out.extend(levels[n - 1].iter().map(|b| Coal::new(c.clone(), b.clone())));
        }
        out
    })
}
