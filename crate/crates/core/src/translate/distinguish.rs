//! Which formulas of a logic separate two pointed structures.
//!
//! Truth of a CL, AL or SFCL formula at a state depends only on the sets
//! of states where its immediate subformulas hold. Formulas are therefore
//! grouped by their pair of extensions, one set per structure, and counted
//! per group instead of being listed; a representative of each group is
//! kept so that separating groups can be reported by example.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::al::markers;
use super::{
    assemble, coalition_slots, coalitions, count, exists_forall, AlFormula, ClFormula, Coal, Entry, Ext, Marker,
    Modality, SfCoal, SfclFormula, Slot, TranslateError,
};
use crate::cgs::{Cgs, GameView};
use crate::mc::unwrap_total;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Cl,
    Sfcl,
    Al,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFormula {
    Cl(ClFormula),
    Sfcl(SfclFormula),
    Al(AlFormula),
}

impl AnyFormula {
    pub fn size(&self) -> usize {
        match self {
            AnyFormula::Cl(f) => f.size(),
            AnyFormula::Sfcl(f) => f.size(),
            AnyFormula::Al(f) => f.size(),
        }
    }

    pub fn holds(&self, g: &Cgs, state: &str) -> Result<bool, TranslateError> {
        match self {
            AnyFormula::Cl(f) => super::direct(g, state, f),
            AnyFormula::Sfcl(f) => super::direct(g, state, f),
            AnyFormula::Al(f) => super::direct(g, state, f),
        }
    }
}

impl fmt::Display for AnyFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyFormula::Cl(x) => write!(f, "{x}"),
            AnyFormula::Sfcl(x) => write!(f, "{x}"),
            AnyFormula::Al(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistReport {
    pub logic: Logic,
    pub size_bound: usize,
    /// Formulas of size at most the bound.
    pub examined: u128,
    /// How many of those take different values at the two states.
    pub distinguishing: u128,
    /// A smallest separating formula per group of equivalent formulas.
    pub witnesses: Vec<AnyFormula>,
}

impl DistReport {
    pub fn is_empty(&self) -> bool {
        self.distinguishing == 0
    }
}

const MAX_STATES: usize = 8;

/// Extension in the first and in the second structure.
type Class = (u8, u8);

struct Group<M> {
    count: u128,
    rep: Ext<M>,
}

type Level<M> = BTreeMap<Class, Group<M>>;

fn add<M>(level: &mut Level<M>, c: Class, count: u128, rep: impl FnOnce() -> Ext<M>) {
    level.entry(c).and_modify(|g| g.count += count).or_insert_with(|| Group { count, rep: rep() });
}

struct Pair<'g> {
    a: &'g Cgs,
    b: &'g Cgs,
}

fn full(g: &Cgs) -> u8 {
    ((1u16 << g.states().len()) - 1) as u8
}

fn atom_ext(g: &Cgs, p: &str) -> u8 {
    let i = g.atom_index(p).expect("checked atom");
    (0..g.states().len()).filter(|&s| unwrap_total(GameView::holds(g, i, s))).fold(0, |m, s| m | 1 << s)
}

fn modal_ext(g: &Cgs, slots: &[Slot], ext: u8) -> u8 {
    (0..g.states().len())
        .filter(|&s| unwrap_total(exists_forall(g, s, slots, |t| Ok(ext >> t & 1 == 1))))
        .fold(0, |m, s| m | 1 << s)
}

/// Bit `s * outer + o`: every (`all`) or some answer to outer choice `o`
/// at `s` lands in `ext`.
fn choice_profile(g: &Cgs, slots: &[Slot], ext: u8, all: bool) -> u64 {
    let n = g.action_count();
    let (outer, inner) = (count(slots, Slot::Outer, n), count(slots, Slot::Inner, n));
    let mut bits = 0u64;
    for s in 0..g.states().len() {
        for o in 0..outer {
            let mut hits = (0..inner).map(|i| ext >> unwrap_total(GameView::successor(g, s, assemble(slots, o, i, n))) & 1 == 1);
            let v = if all { hits.all(|h| h) } else { hits.any(|h| h) };
            if v {
                bits |= 1 << (s * outer + o);
            }
        }
    }
    bits
}

fn profile_ext(g: &Cgs, slots: &[Slot], bits: u64) -> u8 {
    let outer = count(slots, Slot::Outer, g.action_count());
    (0..g.states().len())
        .filter(|&s| (0..outer).any(|o| bits >> (s * outer + o) & 1 == 1))
        .fold(0, |m, s| m | 1 << s)
}

impl Pair<'_> {
    fn full(&self) -> Class {
        (full(self.a), full(self.b))
    }

    fn atom(&self, p: &str) -> Class {
        (atom_ext(self.a, p), atom_ext(self.b, p))
    }
}

/// Groups of each exact size; `modal` adds the modal formulas of size `n`.
fn layered<M: Modality>(
    pair: &Pair<'_>,
    atoms: &[String],
    bound: usize,
    mut modal: impl FnMut(&[Level<M>], usize, &mut Level<M>),
) -> Vec<Level<M>> {
    let (fa, fb) = pair.full();
    let mut levels: Vec<Level<M>> = alloc::vec![Level::new()];
    for n in 1..=bound {
        let mut here = Level::new();
        if n == 1 {
            add(&mut here, (fa, fb), 1, || Ext::Top);
            add(&mut here, (0, 0), 1, || Ext::Bottom);
            for p in atoms {
                add(&mut here, pair.atom(p), 1, || Ext::atom(p.clone()));
            }
        } else {
            for (&(a, b), g) in &levels[n - 1] {
                add(&mut here, (!a & fa, !b & fb), g.count, || Ext::not(g.rep.clone()));
            }
            for op in 0..4 {
                for i in 1..n - 1 {
                    for (&(la, lb), l) in &levels[i] {
                        for (&(ra, rb), r) in &levels[n - 1 - i] {
                            let (c, build): (Class, fn(Ext<M>, Ext<M>) -> Ext<M>) = match op {
                                0 => ((la & ra, lb & rb), Ext::and),
                                1 => ((la | ra, lb | rb), Ext::or),
                                2 => (((!la | ra) & fa, (!lb | rb) & fb), Ext::imp),
                                _ => ((!(la ^ ra) & fa, !(lb ^ rb) & fb), Ext::iff),
                            };
                            add(&mut here, c, l.count * r.count, || build(l.rep.clone(), r.rep.clone()));
                        }
                    }
                }
            }
            modal(&levels, n, &mut here);
        }
        levels.push(here);
    }
    levels
}

fn summarize<M: Modality>(
    levels: &[Level<M>],
    sa: usize,
    sb: usize,
    wrap: impl Fn(Ext<M>) -> AnyFormula,
) -> (u128, u128, Vec<AnyFormula>) {
    let (mut examined, mut distinguishing) = (0u128, 0u128);
    let mut seen = BTreeSet::new();
    let mut witnesses = Vec::new();
    for level in levels {
        for (&(a, b), g) in level {
            examined += g.count;
            if (a >> sa & 1) != (b >> sb & 1) {
                distinguishing += g.count;
                if seen.insert((a, b)) {
                    witnesses.push(wrap(g.rep.clone()));
                }
            }
        }
    }
    (examined, distinguishing, witnesses)
}

/// Counts the formulas of `logic` up to `size_bound` nodes over the atoms
/// of `a` and reports those true at exactly one of `(a, sa)`, `(b, sb)`.
pub fn distinguishability_report(
    a: &Cgs,
    sa: &str,
    b: &Cgs,
    sb: &str,
    logic: Logic,
    size_bound: usize,
) -> Result<DistReport, TranslateError> {
    let ia = a.state(sa).map_err(|_| TranslateError::UnknownState(sa.into()))?.0;
    let ib = b.state(sb).map_err(|_| TranslateError::UnknownState(sb.into()))?.0;
    if a.agents() != b.agents() {
        return Err(TranslateError::Mismatch("agents"));
    }
    let atoms: Vec<String> = a.atoms().to_vec();
    if let Some(p) = atoms.iter().find(|p| b.atom_index(p).is_none()) {
        return Err(TranslateError::UnknownAtom(p.clone()));
    }
    if a.states().len() > MAX_STATES || b.states().len() > MAX_STATES {
        return Err(TranslateError::TooLarge);
    }
    let pair = Pair { a, b };
    let agents = a.agents();
    let (examined, distinguishing, witnesses) = match logic {
        Logic::Cl => {
            let cs = coalitions(agents);
            let slots: Vec<_> = cs.iter().map(|c| coalition_slots(c, agents)).collect();
            let levels = layered::<Coal>(&pair, &atoms, size_bound, |levels, n, here| {
                for (c, sl) in cs.iter().zip(&slots) {
                    for (&(x, y), g) in &levels[n - 1] {
                        let cls = (modal_ext(a, sl, x), modal_ext(b, sl, y));
                        add(here, cls, g.count, || Coal::new(c.clone(), g.rep.clone()));
                    }
                }
            });
            summarize(&levels, ia, ib, AnyFormula::Cl)
        }
        Logic::Al => {
            let mut actions = a.actions().to_vec();
            let mut other = b.actions().to_vec();
            actions.sort();
            other.sort();
            if actions != other {
                return Err(TranslateError::Mismatch("actions"));
            }
            let actions = a.actions().to_vec();
            let ms = markers(agents, &actions);
            let slots = |g: &Cgs, m: &[Entry]| -> Vec<Slot> {
                m.iter()
                    .map(|e| match e {
                        Entry::Exists(_) => Slot::Outer,
                        Entry::Forall(_) => Slot::Inner,
                        Entry::Action(x) => Slot::Fixed(g.action_index(x).expect("shared action")),
                    })
                    .collect()
            };
            let sl: Vec<(Vec<Slot>, Vec<Slot>)> = ms.iter().map(|m| (slots(a, m), slots(b, m))).collect();
            let levels = layered::<Marker>(&pair, &atoms, size_bound, |levels, n, here| {
                for (m, (sa_, sb_)) in ms.iter().zip(&sl) {
                    for (&(x, y), g) in &levels[n - 1] {
                        let cls = (modal_ext(a, sa_, x), modal_ext(b, sb_, y));
                        add(here, cls, g.count, || Marker::new(m.clone(), g.rep.clone()));
                    }
                }
            });
            summarize(&levels, ia, ib, AnyFormula::Al)
        }
        Logic::Sfcl => sfcl_levels(&pair, &atoms, agents, size_bound, ia, ib)?,
    };
    Ok(DistReport { logic, size_bound, examined, distinguishing, witnesses })
}

/// Enable lists grouped by their joint profile in both structures.
type Lists = BTreeMap<(u64, u64), (u128, Vec<SfclFormula>)>;

fn sfcl_levels(
    pair: &Pair<'_>,
    atoms: &[String],
    agents: usize,
    bound: usize,
    ia: usize,
    ib: usize,
) -> Result<(u128, u128, Vec<AnyFormula>), TranslateError> {
    let (a, b) = (pair.a, pair.b);
    let cs = coalitions(agents);
    let slots: Vec<Vec<Slot>> = cs.iter().map(|c| coalition_slots(c, agents)).collect();
    for sl in &slots {
        for g in [a, b] {
            if g.states().len() * count(sl, Slot::Outer, g.action_count()) > 64 {
                return Err(TranslateError::TooLarge);
            }
        }
    }
    // lists[k][m]: enable lists of total size m for coalition k
    let mut lists: Vec<Vec<Lists>> = cs.iter().map(|_| alloc::vec![Lists::new()]).collect();
    let levels = layered::<SfCoal>(pair, atoms, bound, |levels, n, here| {
        for (k, c) in cs.iter().enumerate() {
            let sl = &slots[k];
            let known = &mut lists[k];
            while known.len() < n - 1 {
                let m = known.len();
                let mut fresh = Lists::new();
                for head in 1..=m {
                    for (&(x, y), g) in &levels[head] {
                        let p = (choice_profile(a, sl, x, false), choice_profile(b, sl, y, false));
                        if head == m {
                            fresh.entry(p).or_insert_with(|| (0, alloc::vec![g.rep.clone()])).0 += g.count;
                        } else {
                            for (&(ta, tb), (tc, tail)) in &known[m - head] {
                                let q = (p.0 & ta, p.1 & tb);
                                fresh
                                    .entry(q)
                                    .or_insert_with(|| {
                                        let mut l = alloc::vec![g.rep.clone()];
                                        l.extend(tail.iter().cloned());
                                        (0, l)
                                    })
                                    .0 += g.count * tc;
                            }
                        }
                    }
                }
                known.push(fresh);
            }
            for goal_size in 1..n - 1 {
                for (&(x, y), g) in &levels[goal_size] {
                    let guard = (choice_profile(a, sl, x, true), choice_profile(b, sl, y, true));
                    for (&(pa, pb), (lc, list)) in &known[n - 1 - goal_size] {
                        let cls = (profile_ext(a, sl, guard.0 & pa), profile_ext(b, sl, guard.1 & pb));
                        add(here, cls, g.count * lc, || {
                            SfCoal::new(c.clone(), g.rep.clone(), list.clone()).expect("nonempty list")
                        });
                    }
                }
            }
        }
    });
    Ok(summarize(&levels, ia, ib, AnyFormula::Sfcl))
}
