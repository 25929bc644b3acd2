use alloc::vec::Vec;

use super::{Ext, Modality, TranslateError};
use crate::enumerate::{action_label, exhaust, Bounds, Key, Outcome, Partial, Property, Scope};
use crate::mc::{Compiled, McError};
use crate::syntax::Formula;

struct Agrees<'f, M> {
    f: &'f Ext<M>,
    tr: Formula,
    compiled: Option<Compiled>,
}

impl<M: Modality> Property for Agrees<'_, M> {
    fn prepare(&mut self, shape: &Partial) -> Result<bool, McError> {
        self.compiled = None;
        match self.f.check(shape) {
            Ok(()) => {}
            Err(TranslateError::UnknownAction(_)) => return Ok(false),
            Err(e) => unreachable!("validated before the search: {e}"),
        }
        match Compiled::new(shape, &self.tr) {
            Ok(c) => self.compiled = Some(c),
            Err(McError::UnknownConstant(_)) => return Ok(false),
            Err(e) => return Err(e),
        }
        Ok(true)
    }

    fn check(&self, g: &Partial, state: Option<usize>) -> Result<bool, Key> {
        let s = state.expect("pointed search");
        let c = self.compiled.as_ref().expect("prepared");
        Ok(self.f.eval(g, s)? == c.eval(g, s)?)
    }
}

/// Searches the structures within `b` for a pointed one where the direct
/// semantics of `f` and the model checker on its translation disagree.
pub fn find_disagreement<M: Modality>(f: &Ext<M>, b: &Bounds) -> Result<Outcome, TranslateError> {
    let atoms = b.atoms.clone().unwrap_or_else(|| f.atoms());
    // the largest cell knows every action label any cell can have
    f.check(&Partial::new(b.agents, b.max_actions.max(1), 1, atoms.clone()))?;
    let labels: Vec<_> = (0..b.max_actions).map(action_label).collect();
    let tr = f.to_csl(b.agents, &|n| labels.iter().any(|l| l == n));
    let mut prop = Agrees { f, tr, compiled: None };
    Ok(exhaust(b, atoms, Scope::Pointed, &mut prop)?)
}
