//! Grids, transforms and Fourier multipliers.

mod field;
mod grid;
mod symbol;

pub use field::FieldState;
pub use grid::Grid;
pub use symbol::{
    ldelta_value, lp_at_most_value, lp_block_value, lp_bump, lp_top_level, symbol_deriv,
    symbol_hilbert, symbol_hilbert_dx, symbol_ldelta, symbol_lp, symbol_propagator,
    symbol_tdelta_dx, tdelta_dx_value, LpKind, MultiplierSymbol, SymbolTag,
};

/// Apply `s` to `f`; errors on grid mismatch.
pub fn apply_symbol(f: &FieldState, s: &MultiplierSymbol) -> crate::Result<FieldState> {
    s.apply(f)
}
