use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::syntax::{closure, fresh_name, is_identifier, Formula, Term};

/// Which ordering a formula talks about.
///
/// `Plain` is the bare two-agent comparison with its witness `y` left
/// free; `H` and `V` bind the witness in the second and first position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Plain,
    H,
    V,
}

/// The order atom every comparison tests.
const ORDER_ATOM: &str = "p";

fn p() -> Formula {
    Formula::atom(ORDER_ATOM)
}

/// `a < b`. For `Plain` the witness is the free variable `y`, or a
/// variant of it when `a` or `b` already uses that name.
pub fn lt_formula(a: &Term, b: &Term, axis: Axis) -> Formula {
    let w = fresh_name("y", |n| n == a.name() || n == b.name());
    let wt = Term::var(w.clone());
    let (first, second) = match axis {
        Axis::Plain | Axis::H => (vec![a.clone(), wt.clone()], vec![b.clone(), wt]),
        Axis::V => (vec![wt.clone(), a.clone()], vec![wt, b.clone()]),
    };
    let body = Formula::and(Formula::strat(first, p()), Formula::strat(second, Formula::not(p())));
    match axis {
        Axis::Plain => body,
        Axis::H | Axis::V => Formula::exists(w, body),
    }
}

fn lt(a: &str, b: &str, axis: Axis) -> Formula {
    lt_formula(&Term::var(a), &Term::var(b), axis)
}

fn raw_unbd(axis: Axis) -> Formula {
    Formula::forall("x1", Formula::exists("x2", lt("x1", "x2", axis)))
}

fn raw_mn(axis: Axis) -> Formula {
    Formula::exists("x2", Formula::forall("x1", Formula::not(lt("x1", "x2", axis))))
}

fn raw_trs(axis: Axis) -> Formula {
    let body = Formula::imp(
        Formula::and(lt("x1", "x2", axis), lt("x2", "x3", axis)),
        lt("x1", "x3", axis),
    );
    Formula::forall("x1", Formula::forall("x2", Formula::forall("x3", body)))
}

/// Every element has a larger one. Sentences throughout: the plain
/// variants are closed with the witness quantified outermost.
pub fn phi_unbd(axis: Axis) -> Formula {
    closure(&raw_unbd(axis))
}

/// Some element has nothing below it.
pub fn phi_mn(axis: Axis) -> Formula {
    closure(&raw_mn(axis))
}

pub fn phi_trs(axis: Axis) -> Formula {
    closure(&raw_trs(axis))
}

/// Conjunction of the three order axioms; for `Plain` one shared witness.
pub fn phi_less(axis: Axis) -> Formula {
    closure(&Formula::conj([raw_unbd(axis), raw_mn(axis), raw_trs(axis)]))
}

/// `b` is an immediate successor of `a`.
pub fn succ_formula(axis: Axis, a: &Term, b: &Term) -> Formula {
    let z = fresh_name("x3", |n| n == a.name() || n == b.name());
    let zt = Term::var(z.clone());
    Formula::and(
        lt_formula(a, b, axis),
        Formula::forall(
            z,
            Formula::not(Formula::and(lt_formula(&zt, b, axis), lt_formula(a, &zt, axis))),
        ),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("a domino system needs at least one tile")]
    Empty,
    #[error("tile id `{0}` cannot be used in an atom name")]
    BadId(String),
    #[error("tile `{0}` is declared twice")]
    Duplicate(String),
    #[error("relation mentions undeclared tile `{0}`")]
    UnknownTile(String),
}

/// Tile types with horizontal and vertical compatibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominoSystem {
    tiles: Vec<String>,
    h: Vec<(String, String)>,
    v: Vec<(String, String)>,
}

impl DominoSystem {
    pub fn new<S: Into<String>>(
        tiles: impl IntoIterator<Item = S>,
        h: impl IntoIterator<Item = (S, S)>,
        v: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self, TilingError> {
        let tiles: Vec<String> = tiles.into_iter().map(Into::into).collect();
        if tiles.is_empty() {
            return Err(TilingError::Empty);
        }
        let mut seen = BTreeSet::new();
        for t in &tiles {
            if !is_identifier(&tile_atom(t)) {
                return Err(TilingError::BadId(t.clone()));
            }
            if !seen.insert(t.as_str()) {
                return Err(TilingError::Duplicate(t.clone()));
            }
        }
        let pairs = |rel: Vec<(String, String)>| -> Result<Vec<(String, String)>, TilingError> {
            for (a, b) in &rel {
                for t in [a, b] {
                    if !seen.contains(t.as_str()) {
                        return Err(TilingError::UnknownTile(t.clone()));
                    }
                }
            }
            Ok(rel)
        };
        let h = pairs(h.into_iter().map(|(a, b)| (a.into(), b.into())).collect())?;
        let v = pairs(v.into_iter().map(|(a, b)| (a.into(), b.into())).collect())?;
        Ok(DominoSystem { tiles, h, v })
    }

    pub fn tiles(&self) -> &[String] {
        &self.tiles
    }

    pub fn horizontal(&self) -> &[(String, String)] {
        &self.h
    }

    pub fn vertical(&self) -> &[(String, String)] {
        &self.v
    }

    /// Atoms of the tiling signature: the order atom, then one per tile.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = vec![String::from(ORDER_ATOM)];
        out.extend(self.tiles.iter().map(|t| tile_atom(t)));
        out
    }
}

pub fn tile_atom(id: &str) -> String {
    format!("tile_{id}")
}

fn at(x: &str, y: &str, f: Formula) -> Formula {
    Formula::strat(vec![Term::var(x), Term::var(y)], f)
}

/// Cell `(x,y)` carries tile `t` and no other.
pub fn phi_loc(ds: &DominoSystem, t: &str) -> Formula {
    let own = Formula::atom(tile_atom(t));
    let others = ds.tiles.iter().filter(|u| *u != t).map(|u| Formula::not(Formula::atom(tile_atom(u))));
    at("x", "y", Formula::conj(core::iter::once(own).chain(others)))
}

/// Some horizontal partner of `t` sits at the right neighbour of `(x,y)`.
pub fn phi_t_h(ds: &DominoSystem, t: &str) -> Formula {
    Formula::disj(ds.h.iter().filter(|(a, _)| a == t).map(|(_, b)| {
        let step = succ_formula(Axis::H, &Term::var("x"), &Term::var("x_next"));
        Formula::forall("x_next", Formula::imp(step, at("x_next", "y", Formula::atom(tile_atom(b)))))
    }))
}

/// Some vertical partner of `t` sits at the upper neighbour of `(x,y)`.
pub fn phi_t_v(ds: &DominoSystem, t: &str) -> Formula {
    Formula::disj(ds.v.iter().filter(|(a, _)| a == t).map(|(_, b)| {
        let step = succ_formula(Axis::V, &Term::var("y"), &Term::var("y_next"));
        Formula::forall("y_next", Formula::imp(step, at("x", "y_next", Formula::atom(tile_atom(b)))))
    }))
}

/// Every cell carries exactly one tile that agrees with both neighbours.
pub fn phi_tile(ds: &DominoSystem) -> Formula {
    let cases = ds
        .tiles
        .iter()
        .map(|t| Formula::conj([phi_loc(ds, t), phi_t_h(ds, t), phi_t_v(ds, t)]));
    Formula::forall("x", Formula::forall("y", Formula::disj(cases)))
}

/// Both axes are unbounded strict orders with a least element.
pub fn phi_grd() -> Formula {
    Formula::and(phi_less(Axis::H), phi_less(Axis::V))
}

pub fn phi_dom(ds: &DominoSystem) -> Formula {
    Formula::and(phi_grd(), phi_tile(ds))
}

/// The full sentence the construction pairs with `ds`.
pub fn tiling_formula(ds: &DominoSystem) -> Formula {
    phi_dom(ds)
}
