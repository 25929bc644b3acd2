use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

use crate::syntax::{core_normalize, Formula};

/// Most distinct skeleton letters a tautology check will enumerate.
pub const PC_LETTER_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcError {
    #[error("too many skeleton letters: {0} (at most {PC_LETTER_CAP})")]
    TooManyLetters(usize),
}

enum Skel {
    Top,
    Letter(usize),
    Not(Box<Skel>),
    And(Box<Skel>, Box<Skel>),
}

impl Skel {
    fn eval(&self, row: u32) -> bool {
        match self {
            Skel::Top => true,
            Skel::Letter(i) => row >> i & 1 == 1,
            Skel::Not(a) => !a.eval(row),
            Skel::And(a, b) => a.eval(row) && b.eval(row),
        }
    }
}

fn skeleton(f: &Formula, letters: &mut Vec<Formula>) -> Skel {
    match f {
        Formula::Top => Skel::Top,
        Formula::Not(a) => Skel::Not(Box::new(skeleton(a, letters))),
        Formula::And(a, b) => Skel::And(Box::new(skeleton(a, letters)), Box::new(skeleton(b, letters))),
        // atoms, modalities and quantified formulas are opaque
        other => {
            let i = letters.iter().position(|l| l == other).unwrap_or_else(|| {
                letters.push(other.clone());
                letters.len() - 1
            });
            Skel::Letter(i)
        }
    }
}

/// The opaque subformulas of the core form of `f`, in first-occurrence
/// order.
pub fn skeleton_letters(f: &Formula) -> Vec<Formula> {
    let mut letters = Vec::new();
    skeleton(&core_normalize(f), &mut letters);
    letters
}

/// Whether `f` is true under every assignment to its skeleton letters.
pub fn check_pc(f: &Formula) -> Result<bool, PcError> {
    let mut letters = Vec::new();
    let s = skeleton(&core_normalize(f), &mut letters);
    if letters.len() > PC_LETTER_CAP {
        return Err(PcError::TooManyLetters(letters.len()));
    }
    Ok((0..1u32 << letters.len()).all(|row| s.eval(row)))
}
