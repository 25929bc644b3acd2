//! File formats and the `csl` command-line front end for `csl-core`.

pub mod cli;
pub mod format;
