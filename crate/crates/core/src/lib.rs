//! First-order coalition logic: formulas with quantification over actions
//! and n-ary strategic modalities, interpreted over finite concurrent game
//! structures.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command-line front end live in the `csl-tools` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cgs;
pub mod enumerate;
pub mod mc;
pub mod proof;
pub mod reduce;
pub mod translate;
pub mod syntax;

#[cfg(test)]
mod testutil;

pub use cgs::{Cgs, RelationalCgs};
pub use syntax::{parse, Formula, Signature, Term};
