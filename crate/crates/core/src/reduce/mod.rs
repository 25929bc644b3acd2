//! The two reductions: quantified Boolean formulas into model checking,
//! and the formula generators behind the tiling construction.

mod qbf;
mod tiling;

pub use qbf::{parse_qbf, qbf_eval, qbf_to_cgs, qbf_to_csl, Matrix, Qbf, QbfError, Quant};
pub use tiling::{
    lt_formula, phi_dom, phi_grd, phi_less, phi_loc, phi_mn, phi_t_h, phi_t_v, phi_tile, phi_trs, phi_unbd,
    succ_formula, tile_atom, tiling_formula, Axis, DominoSystem, TilingError,
};
